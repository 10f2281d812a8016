"""Frequency tuning of axisymmetric designs.

One wall of the enclosure is moved until the lowest TE0 mode sits on a target
frequency. Regions flush with the moving wall follow it.
"""
import logging
from dataclasses import replace
from typing import TYPE_CHECKING, Callable, Optional, Tuple

import numpy as np
from scipy import optimize
from tqdm import tqdm

from .base import DomainError
from .geometry import AxisymmetricGeometry, build_mesh
from .solvers.axisymmetric import lowest_te0_frequency, solve_axisymmetric_te0
from .solvers.base import ModeResult
from .utils.callbacks import TuningCallback

if TYPE_CHECKING:
    from .spec_file import CavitySpec

logger = logging.getLogger(__name__)

TUNABLE_PARAMETERS = ("outer_radius", "height")

# maximum number of frequency evaluations of one tuning run
MAX_EVALUATIONS = 60

TuningCallbackType = Callable[[int, float, float], Tuple[bool, Optional[str]]]


class _ConvergedEarly(Exception):
    def __init__(self, value: float):
        super().__init__(value)
        self.value = value


def with_parameter(
    geometry: AxisymmetricGeometry, parameter: str, value: float
) -> AxisymmetricGeometry:
    if parameter == "outer_radius":
        return geometry.with_outer_radius(value)
    if parameter == "height":
        return geometry.with_height(value)
    raise DomainError(
        "tunable parameters are {}, got {!r}.".format(
            ", ".join(TUNABLE_PARAMETERS), parameter
        )
    )


def tune_axisymmetric(
    geometry: AxisymmetricGeometry,
    target_cell: float,
    parameter: str,
    target_hz: float,
    bracket: Tuple[float, float],
    callback: Optional[TuningCallbackType] = None,
    progress: bool = True,
    xtol: float = 1e-9,
) -> Tuple[AxisymmetricGeometry, float]:
    """Drive the lowest TE0 frequency of ``geometry`` onto ``target_hz``.

    Parameters
    ----------
    geometry : AxisymmetricGeometry
        Starting design. Its value of ``parameter`` is ignored.
    target_cell : float
        Mesh cell size (m) used for every evaluation.
    parameter : str
        ``"outer_radius"`` or ``"height"``.
    target_hz : float
        Target frequency in Hz.
    bracket : Tuple[float, float]
        Interval of ``parameter`` (m) whose end frequencies enclose the target.
    callback : Callable, optional
        Called as ``callback(i, value, frequency)`` after every evaluation;
        returns ``(should_stop, description)``. Defaults to a
        :class:`TuningCallback`.
    progress : bool, optional
        Show a tqdm progress bar, by default True.
    xtol : float, optional
        Absolute tolerance on ``parameter`` (m), by default 1e-9.

    Returns
    -------
    Tuple[AxisymmetricGeometry, float]
        The tuned geometry and its lowest TE0 frequency.

    Raises
    ------
    DomainError
        If the end frequencies of ``bracket`` do not enclose ``target_hz``.
    GeometryError
        If moving the wall collapses or displaces a region.
    """
    if parameter not in TUNABLE_PARAMETERS:
        raise DomainError(
            "tunable parameters are {}, got {!r}.".format(
                ", ".join(TUNABLE_PARAMETERS), parameter
            )
        )
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise DomainError(
            "bracket must satisfy 0 < low < high, got {}.".format(bracket)
        )
    if not target_hz > 0:
        raise DomainError("target_hz must be > 0, got {!r}.".format(target_hz))

    if callback is None:
        callback = TuningCallback(parameter, target_hz)

    def frequency_at(value: float) -> float:
        mesh = build_mesh(with_parameter(geometry, parameter, value), target_cell)
        return lowest_te0_frequency(mesh)

    with tqdm(total=MAX_EVALUATIONS, disable=not progress) as pbar:
        evaluations = [0]

        def objective(value: float) -> float:
            frequency = frequency_at(value)
            should_stop, message = callback(  # type: ignore
                evaluations[0], value, frequency
            )
            evaluations[0] += 1
            if message is not None:
                pbar.set_description(message)
            pbar.update(1)
            if should_stop:
                raise _ConvergedEarly(value)
            return frequency - target_hz

        f_lo = objective(lo)
        f_hi = objective(hi)
        if np.sign(f_lo) == np.sign(f_hi):
            raise DomainError(
                "bracket [{}, {}] gives {:.6e} Hz and {:.6e} Hz, which do not "
                "enclose the target {:.6e} Hz.".format(
                    lo, hi, f_lo + target_hz, f_hi + target_hz, target_hz
                )
            )
        try:
            value = optimize.brentq(
                objective, lo, hi, xtol=xtol, maxiter=MAX_EVALUATIONS - 2
            )
        except _ConvergedEarly as stop:
            value = stop.value

    tuned = with_parameter(geometry, parameter, value)
    frequency = frequency_at(value)
    logger.info(
        "tuned %s to %.6e m after %d evaluations: %.6f GHz",
        parameter,
        value,
        evaluations[0],
        frequency / 1e9,
    )
    return tuned, frequency


def tune_geometry(
    spec: "CavitySpec",
    parameter: Optional[str] = None,
    target_hz: Optional[float] = None,
    bracket: Optional[Tuple[float, float]] = None,
    callback: Optional[TuningCallbackType] = None,
    progress: bool = True,
) -> Tuple["CavitySpec", ModeResult]:
    """Tune an axisymmetric spec and solve its tuned lowest mode.

    Arguments left as ``None`` are taken from the spec's ``tuning`` section.

    Returns
    -------
    Tuple[CavitySpec, ModeResult]
        The spec with the tuned geometry and the mode at the target.
    """
    geometry = spec.geometry
    if not isinstance(geometry, AxisymmetricGeometry):
        raise DomainError("only axisymmetric designs can be tuned.")
    settings = spec.tuning
    if settings is None and None in (parameter, target_hz, bracket):
        raise DomainError("spec has no tuning section; pass every tuning argument.")
    if settings is not None:
        parameter = settings.parameter if parameter is None else parameter
        target_hz = settings.target_hz if target_hz is None else target_hz
        bracket = settings.bracket if bracket is None else bracket
    assert parameter is not None and target_hz is not None and bracket is not None
    tuned_geometry, frequency = tune_axisymmetric(
        geometry,
        spec.target_cell,
        parameter,
        target_hz,
        bracket,
        callback=callback,
        progress=progress,
    )
    window = (0.99 * frequency, 1.01 * frequency)
    modes = solve_axisymmetric_te0(build_mesh(tuned_geometry, spec.target_cell), window)
    if not modes:
        raise DomainError(
            "tuned mode left the window around {:.6e} Hz.".format(frequency)
        )
    return replace(spec, geometry=tuned_geometry), modes[0]
