"""Closed-form modes of empty rectangular and cylindrical cavities."""
import itertools
from typing import List, Union

import numpy as np
from scipy import special

from ..base import DomainError
from ..constants import CONSTANTS
from ..geometry import CylindricalGeometry, RectangularGeometry
from .base import ModeResult, ModeSolverBase, Window

TE = "TE"
TM = "TM"

# Bessel-root tables cover m <= MAX_ORDER and n <= MAX_ROOT
MAX_ORDER = 5
MAX_ROOT = 5


def _index(name: str, value: int, minimum: int) -> int:
    if int(value) != value or value < minimum:
        raise DomainError(
            "mode index {} must be an integer >= {}, got {!r}.".format(
                name, minimum, value
            )
        )
    return int(value)


def _check_family(family: str) -> str:
    family = family.upper()
    if family not in (TE, TM):
        raise DomainError("family must be TE or TM, got {!r}.".format(family))
    return family


def analytic_rectangular_mode(
    a: float, b: float, d: float, m: int, n: int, p: int, family: str = TE
) -> float:
    """Resonance of an empty ``a x b x d`` box.

    ``f = (c/2) sqrt((m/a)^2 + (n/b)^2 + (p/d)^2)``.

    TE modes need ``p >= 1`` and not both transverse indices zero; TM modes
    need ``m, n >= 1``.
    """
    family = _check_family(family)
    for name, length in (("a", a), ("b", b), ("d", d)):
        if not length > 0:
            raise DomainError("{} must be > 0, got {!r}.".format(name, length))
    if family == TE:
        m, n = _index("m", m, 0), _index("n", n, 0)
        p = _index("p", p, 1)
        if m == 0 and n == 0:
            raise DomainError("TE modes need m or n >= 1.")
    else:
        m, n = _index("m", m, 1), _index("n", n, 1)
        p = _index("p", p, 0)
    return 0.5 * CONSTANTS.c * float(np.hypot(np.hypot(m / a, n / b), p / d))


def bessel_root(family: str, m: int, n: int) -> float:
    """n-th positive root of ``J_m'`` (TE) or ``J_m`` (TM)."""
    family = _check_family(family)
    m = _index("m", m, 0)
    n = _index("n", n, 1)
    if m > MAX_ORDER or n > MAX_ROOT:
        raise DomainError(
            "Bessel-root table covers m <= {} and n <= {}, got m={}, n={}.".format(
                MAX_ORDER, MAX_ROOT, m, n
            )
        )
    roots = special.jnp_zeros(m, n) if family == TE else special.jn_zeros(m, n)
    return float(roots[n - 1])


def analytic_cylindrical_mode(
    radius: float, height: float, family: str, m: int, n: int, p: int
) -> float:
    """Resonance of an empty cylinder.

    ``f = (c/2pi) sqrt((chi/radius)^2 + (p pi/height)^2)``.
    """
    family = _check_family(family)
    if not radius > 0 or not height > 0:
        raise DomainError("radius and height must be > 0.")
    p = _index("p", p, 1 if family == TE else 0)
    chi = bessel_root(family, m, n)
    k = np.sqrt((chi / radius) ** 2 + (p * np.pi / height) ** 2)
    return CONSTANTS.c * float(k) / (2 * np.pi)


class AnalyticModeSolver(ModeSolverBase):
    """Enumerates closed-form modes inside a frequency window."""

    def __init__(
        self,
        geometry: Union[RectangularGeometry, CylindricalGeometry],
        max_index: int = MAX_ROOT,
    ):
        if not isinstance(geometry, (RectangularGeometry, CylindricalGeometry)):
            raise DomainError(
                "closed-form modes need a rectangular or cylindrical geometry."
            )
        self.geometry = geometry
        self.max_index = max_index

    def _candidate_modes(self, window: Window, n_modes: int) -> List[ModeResult]:
        geometry = self.geometry
        modes: List[ModeResult] = []
        indices = range(0, self.max_index + 1)
        for family in (TE, TM):
            for m, n, p in itertools.product(indices, indices, indices):
                try:
                    if isinstance(geometry, RectangularGeometry):
                        frequency = analytic_rectangular_mode(
                            geometry.a, geometry.b, geometry.d, m, n, p, family
                        )
                    else:
                        frequency = analytic_cylindrical_mode(
                            geometry.radius, geometry.height, family, m, n, p
                        )
                except DomainError:
                    continue
                modes.append(
                    ModeResult(
                        frequency=frequency,
                        mode_id="{}{}{}{}".format(family, m, n, p),
                    )
                )
        return modes
