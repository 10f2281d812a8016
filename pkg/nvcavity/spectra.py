"""Input-output reflection spectra of a cavity coupled to a spin ensemble.

The reflection coefficient is

    S11 = 1 + kappa_e / (i x - kappa + g_c^2 / (i (delta + x) - gamma))

with ``x = omega - omega_c`` and ``kappa_e = alpha kappa``. At ``x = 0`` the spin
term is ``g_c^2 / (i delta - gamma)``. ``delta = m0 (B - B_r) / hbar``.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .base import DomainError, FloatOrArray, check_positive
from .constants import CONSTANTS
from .utils.callbacks import SweepCallback

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 4001
DEFAULT_GRID_SPAN = 5.0

SweepCallbackType = Callable[..., Tuple[bool, Optional[str]]]


@dataclass(frozen=True)
class SpectroscopyParams:
    """Parameters of the reflection model, all rates in rad/s.

    Parameters
    ----------
    omega_c : float
        Cavity angular frequency.
    kappa : float
        Total cavity damping.
    g_c : float
        Collective coupling.
    gamma : float
        Spin half-linewidth.
    alpha : float, optional
        External-coupling ratio ``kappa_e / kappa``, by default 1 (critical).
    delta : float, optional
        Spin-cavity detuning, by default 0.
    """

    omega_c: float
    kappa: float
    g_c: float
    gamma: float
    alpha: float = 1.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        check_positive("omega_c", self.omega_c)
        check_positive("kappa", self.kappa)
        check_positive("gamma", self.gamma)
        check_positive("alpha", self.alpha, allow_zero=True)
        check_positive("g_c", self.g_c, allow_zero=True)

    def with_delta(self, delta: float) -> "SpectroscopyParams":
        return SpectroscopyParams(
            omega_c=self.omega_c,
            kappa=self.kappa,
            g_c=self.g_c,
            gamma=self.gamma,
            alpha=self.alpha,
            delta=delta,
        )


@dataclass(frozen=True, eq=False)
class SpectrumTrace:
    freq: np.ndarray
    s11_sq: np.ndarray
    params: SpectroscopyParams


@dataclass(frozen=True, eq=False)
class DispersionTrace:
    b_field: np.ndarray
    dressed_freq: np.ndarray
    delta: np.ndarray
    dressed_halfwidth: np.ndarray


class Peak(NamedTuple):
    frequency: float
    depth: float
    fwhm: float


def _grid(freq_grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(freq_grid, dtype=float)
    if grid.ndim != 1 or grid.shape[0] == 0:
        raise DomainError("frequency grid must be a non-empty 1-d array.")
    return grid


def reflection_coefficient(
    params: SpectroscopyParams, freq_grid: np.ndarray
) -> np.ndarray:
    """Complex ``S11`` on ``freq_grid`` (rad/s)."""
    detuning = _grid(freq_grid) - params.omega_c
    spin = params.g_c ** 2 / (1j * (params.delta + detuning) - params.gamma)
    denominator = 1j * detuning - params.kappa + spin
    return 1.0 + params.alpha * params.kappa / denominator


def reflection_spectrum(
    params: SpectroscopyParams, freq_grid: np.ndarray
) -> SpectrumTrace:
    """``|S11|^2`` on ``freq_grid`` (rad/s)."""
    grid = _grid(freq_grid)
    s11 = reflection_coefficient(params, grid)
    return SpectrumTrace(freq=grid, s11_sq=np.abs(s11) ** 2, params=params)


def detuning_from_field(b: FloatOrArray, b_r: float, m0: float) -> FloatOrArray:
    """``delta = m0 (B - B_r) / hbar`` in rad/s, fields in T."""
    return m0 * (np.asarray(b) - b_r) / CONSTANTS.hbar


def dressed_mode_frequency(
    omega_c: float, g_c: float, delta: FloatOrArray, gamma: float
) -> FloatOrArray:
    """``omega = omega_c + g_c^2 delta / (delta^2 + gamma^2)``."""
    gamma = check_positive("gamma", gamma)
    delta = np.asarray(delta, dtype=float)
    return omega_c + g_c ** 2 * delta / (delta ** 2 + gamma ** 2)


def dressed_mode_halfwidth(
    kappa: float, g_c: float, delta: FloatOrArray, gamma: float
) -> FloatOrArray:
    """``kappa' = kappa + g_c^2 gamma / (delta^2 + gamma^2)``."""
    gamma = check_positive("gamma", gamma)
    delta = np.asarray(delta, dtype=float)
    return kappa + g_c ** 2 * gamma / (delta ** 2 + gamma ** 2)


def default_grid(
    params: SpectroscopyParams, n_points: int = DEFAULT_GRID_POINTS
) -> np.ndarray:
    """Uniform grid ``omega_c +- 5 max(g_c, kappa, gamma)``."""
    if n_points < 3:
        raise DomainError("n_points must be >= 3, got {}.".format(n_points))
    half_span = DEFAULT_GRID_SPAN * max(params.g_c, params.kappa, params.gamma)
    return np.linspace(
        params.omega_c - half_span, params.omega_c + half_span, n_points
    )


def field_sweep(
    params: SpectroscopyParams,
    b_grid: np.ndarray,
    b_r: float,
    m0: float,
    freq_grid: Optional[np.ndarray] = None,
    callback: Optional[SweepCallbackType] = None,
    progress: bool = False,
) -> Tuple[DispersionTrace, List[SpectrumTrace]]:
    """Dressed-mode dispersion and one spectrum per DC field in ``b_grid``.

    Parameters
    ----------
    params : SpectroscopyParams
        Model parameters; ``params.delta`` is replaced at every field.
    b_grid : np.ndarray
        DC fields in T.
    b_r : float
        Field at which the spins are resonant with the cavity, in T.
    m0 : float
        Spin magnetic moment in J/T.
    freq_grid : np.ndarray, optional
        Probe frequencies (rad/s); :func:`default_grid` when omitted.
    callback : Callable, optional
        Called as ``callback(i, b, dressed_omega, s11_sq)`` after every field;
        returns ``(should_stop, description)``.
    progress : bool, optional
        Show a tqdm progress bar, by default False.
    """
    b_values = np.asarray(b_grid, dtype=float)
    if b_values.ndim != 1 or b_values.shape[0] == 0:
        raise DomainError("b_grid must be a non-empty 1-d array.")
    grid = default_grid(params) if freq_grid is None else _grid(freq_grid)
    if callback is None:
        callback = SweepCallback()

    delta = np.asarray(detuning_from_field(b_values, b_r, m0), dtype=float)
    dressed = np.asarray(
        dressed_mode_frequency(params.omega_c, params.g_c, delta, params.gamma)
    )
    halfwidth = np.asarray(
        dressed_mode_halfwidth(params.kappa, params.g_c, delta, params.gamma)
    )
    spectra: List[SpectrumTrace] = []
    with tqdm(total=b_values.shape[0], disable=not progress) as pbar:
        for i, (b, d) in enumerate(zip(b_values, delta)):
            trace = reflection_spectrum(params.with_delta(float(d)), grid)
            spectra.append(trace)
            should_stop, message = callback(
                i, float(b), float(dressed[i]), trace.s11_sq
            )
            if message is not None:
                pbar.set_description(message)
            pbar.update(1)
            if should_stop:
                logger.info("field sweep stopped after %d fields", i + 1)
                break
    n_done = len(spectra)
    dispersion = DispersionTrace(
        b_field=b_values[:n_done],
        dressed_freq=dressed[:n_done],
        delta=delta[:n_done],
        dressed_halfwidth=halfwidth[:n_done],
    )
    return dispersion, spectra


def _crossing(x0: float, y0: float, x1: float, y1: float, level: float) -> float:
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def extract_peaks(trace: SpectrumTrace) -> List[Peak]:
    """Dips of ``|S11|^2``: ``(frequency, depth, fwhm)``, sorted by frequency.

    Minima are found by 3-point comparison. The width is measured at the
    level halfway between the minimum and the off-resonant baseline of 1,
    by linear interpolation; it is ``nan`` when a side never crosses the
    level.
    """
    x = trace.freq
    y = trace.s11_sq
    if x.shape[0] < 3:
        raise DomainError("peak extraction needs at least 3 points.")
    peaks: List[Peak] = []
    candidates = np.flatnonzero((y[1:-1] < y[:-2]) & (y[1:-1] <= y[2:])) + 1
    for k in candidates:
        minimum = float(y[k])
        level = 0.5 * (1.0 + minimum)
        left = np.nan
        for i in range(k, 0, -1):
            if y[i - 1] >= level:
                left = _crossing(x[i], y[i], x[i - 1], y[i - 1], level)
                break
        right = np.nan
        for i in range(k, x.shape[0] - 1):
            if y[i + 1] >= level:
                right = _crossing(x[i], y[i], x[i + 1], y[i + 1], level)
                break
        peaks.append(
            Peak(frequency=float(x[k]), depth=1.0 - minimum, fwhm=float(right - left))
        )
    return sorted(peaks, key=lambda peak: peak.frequency)
