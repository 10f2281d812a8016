import dataclasses
import logging
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..base import DomainError
from ..fields import FieldSolution

logger = logging.getLogger(__name__)

Window = Tuple[float, float]


@dataclass(frozen=True, eq=False)
class ModeResult:
    """One resonant mode.

    ``field``, the stored energies and ``mode_volume`` are ``None`` for
    closed-form and lumped results.
    """

    frequency: float
    mode_id: str
    field: Optional[FieldSolution] = None
    w_e: Optional[float] = None
    w_m: Optional[float] = None
    mode_volume: Optional[float] = None
    omega: float = dataclasses.field(init=False)

    def __post_init__(self) -> None:
        if not self.frequency > 0:
            raise DomainError("frequency must be > 0, got {!r}.".format(self.frequency))
        object.__setattr__(self, "omega", 2 * np.pi * self.frequency)

    @property
    def has_field(self) -> bool:
        return self.field is not None

    def energy_imbalance(self) -> float:
        if self.w_e is None or self.w_m is None:
            raise DomainError(
                "mode {} carries no stored energies.".format(self.mode_id)
            )
        return abs(self.w_e - self.w_m) / (self.w_e + self.w_m)


def check_window(window: Window) -> Window:
    lo, hi = float(window[0]), float(window[1])
    if not (0 <= lo < hi and np.isfinite(hi)):
        raise DomainError(
            "frequency window must satisfy 0 <= low < high, got ({}, {}).".format(
                lo, hi
            )
        )
    return lo, hi


class ModeSolverBase(ABC):
    """Template for every mode solver.

    Children return candidate modes near a window; :meth:`solve` keeps the
    in-window ones, sorts them by frequency and truncates to ``n_modes``.
    """

    @abstractmethod
    def _candidate_modes(self, window: Window, n_modes: int) -> List[ModeResult]:
        raise NotImplementedError("must be implemented")

    def solve(self, window: Window, n_modes: int = 1) -> List[ModeResult]:
        lo, hi = check_window(window)
        if n_modes < 1:
            raise DomainError("n_modes must be >= 1, got {}.".format(n_modes))
        modes = [
            mode
            for mode in self._candidate_modes((lo, hi), n_modes)
            if lo <= mode.frequency <= hi
        ]
        modes.sort(key=lambda mode: mode.frequency)
        if not modes:
            logger.info("no mode in window %.6g-%.6g Hz", lo, hi)
        elif len(modes) < n_modes:
            warnings.warn(
                "requested {} modes but only {} lie in the window.".format(
                    n_modes, len(modes)
                )
            )
        return modes[:n_modes]
