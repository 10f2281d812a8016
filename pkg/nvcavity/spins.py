"""NV spin ensembles and their coupling to a cavity mode.

Rates are angular (rad/s) unless a name says otherwise (``_mhz``, ``_hz``).
Two pathways produce the collective coupling and the cooperativity:

* ``exact-si`` evaluates ``g_c = (m0 / 2) sqrt(rho mu0 omega_c p_m / hbar)``
  and ``C = g_c^2 / (2 kappa_c gamma_s)`` directly;
* ``calibrated`` uses the proportionality constants ``k_g`` (MHz) and
  ``k_c`` (MHz^-2) fitted to one row of a reference table, with
  ``g_c = k_g sqrt(p_m)`` and ``C = k_c g_c^2 Q0``.
"""
import itertools
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import optimize

from .base import DomainError, check_fraction, check_positive
from .constants import CONSTANTS, D_OVER_H_NV, G_NV
from .observables import cavity_damping_rate

logger = logging.getLogger(__name__)

EXACT_SI = "exact-si"
CALIBRATED = "calibrated"
PATHWAYS = (EXACT_SI, CALIBRATED)

WEAK = "weak"
HIGH_COOPERATIVITY = "high-cooperativity"
STRONG = "strong"

# FWHM presets (Hz): dipolar-limited ensemble at low temperature and a
# 100 ppm HPHT sample
LINEWIDTH_LOW_TEMPERATURE_FWHM = 3.0e6
LINEWIDTH_HPHT_100PPM_FWHM = 18.84e6

NV_AXES = np.array(
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
) / np.sqrt(3.0)


@dataclass(frozen=True)
class SpinEnsemble:
    """A spin ensemble hosted by the sample region of a cavity.

    Parameters
    ----------
    rho : float
        Spin number density in m^-3.
    gamma_s : float
        Half-width at half-maximum of the spin line in rad/s.
    g_factor : float, optional
        Lande factor, by default 2.0028.
    d_over_h : float, optional
        Zero-field splitting in Hz, by default 2.877e9.
    sample_volume : float, optional
        Volume of the spin-hosting sample in m^3, by default 0.
    t2_star : float, optional
        Dephasing time in s. When set, ``gamma_s`` must equal ``2 / t2_star``.
    """

    rho: float
    gamma_s: float
    g_factor: float = G_NV
    d_over_h: float = D_OVER_H_NV
    sample_volume: float = 0.0
    t2_star: Optional[float] = None

    def __post_init__(self) -> None:
        check_positive("rho", self.rho)
        check_positive("gamma_s", self.gamma_s)
        check_positive("g_factor", self.g_factor)
        check_positive("d_over_h", self.d_over_h)
        check_positive("sample_volume", self.sample_volume, allow_zero=True)
        if self.t2_star is not None:
            check_positive("t2_star", self.t2_star)
            if not np.isclose(self.gamma_s, 2.0 / self.t2_star, rtol=1e-12, atol=0):
                raise DomainError(
                    "gamma_s ({}) must equal 2 / t2_star ({}).".format(
                        self.gamma_s, 2.0 / self.t2_star
                    )
                )

    @classmethod
    def from_fwhm(cls, fwhm_hz: float, rho: float, **kwargs: Any) -> "SpinEnsemble":
        """Ensemble whose line has full width ``fwhm_hz`` (Hz)."""
        fwhm_hz = check_positive("fwhm_hz", fwhm_hz)
        return cls(rho=rho, gamma_s=2 * np.pi * fwhm_hz / 2, **kwargs)

    @classmethod
    def from_t2_star(cls, t2_star: float, rho: float, **kwargs: Any) -> "SpinEnsemble":
        t2_star = check_positive("t2_star", t2_star)
        return cls(rho=rho, gamma_s=2.0 / t2_star, t2_star=t2_star, **kwargs)

    @property
    def m0(self) -> float:
        """Magnetic moment ``g mu_B`` in J/T."""
        return self.g_factor * CONSTANTS.mu_B

    @property
    def gamma_s_over_2pi(self) -> float:
        return self.gamma_s / (2 * np.pi)

    @property
    def fwhm_hz(self) -> float:
        return 2 * self.gamma_s_over_2pi


def _check_rate(name: str, value: float) -> float:
    return check_positive(name, value)


def collective_coupling(ensemble: SpinEnsemble, p_m: float, omega_c: float) -> float:
    """``g_c = (m0 / 2) sqrt(rho mu0 omega_c p_m / hbar)`` in rad/s."""
    p_m = check_fraction("p_m", p_m)
    omega_c = _check_rate("omega_c", omega_c)
    return 0.5 * ensemble.m0 * float(
        np.sqrt(ensemble.rho * CONSTANTS.mu0 * omega_c * p_m / CONSTANTS.hbar)
    )


def calibrated_coupling(p_m: float, k_g: float) -> float:
    """``g_c = k_g sqrt(p_m)`` in MHz, with ``k_g`` in MHz."""
    p_m = check_fraction("p_m", p_m)
    k_g = check_positive("k_g", k_g)
    return k_g * float(np.sqrt(p_m))


def spin_count(ensemble: SpinEnsemble) -> float:
    return ensemble.rho * ensemble.sample_volume


def single_spin_coupling(g_c: float, n: float) -> float:
    """``g_s = g_c / sqrt(N)``."""
    if not n >= 1:
        raise DomainError("spin count must be >= 1, got {!r}.".format(n))
    return g_c / float(np.sqrt(n))


def cooperativity(g_c: float, kappa_c: float, gamma_s: float) -> float:
    """``C = g_c^2 / (2 kappa_c gamma_s)``; all rates in rad/s."""
    kappa_c = _check_rate("kappa_c", kappa_c)
    gamma_s = _check_rate("gamma_s", gamma_s)
    return g_c ** 2 / (2 * kappa_c * gamma_s)


def calibrated_cooperativity(g_c: float, q0: float, k_c: float) -> float:
    """``C = k_c g_c^2 Q0`` with ``g_c`` in MHz and ``k_c`` in MHz^-2."""
    q0 = check_positive("q0", q0)
    k_c = check_positive("k_c", k_c)
    return k_c * g_c ** 2 * q0


def regime_classify(
    g_c: float,
    kappa_c: float,
    gamma_s: float,
    cooperativity_value: Optional[float] = None,
) -> str:
    """Coupling regime with strict comparisons; ties fall to the weaker class.

    ``strong`` needs ``g_c > gamma_s`` and ``g_c > kappa_c``;
    ``high-cooperativity`` needs ``C > 1``. ``cooperativity_value`` replaces
    the cooperativity computed from the three rates.
    """
    check_positive("g_c", g_c, allow_zero=True)
    if cooperativity_value is None:
        cooperativity_value = cooperativity(g_c, kappa_c, gamma_s)
    else:
        _check_rate("kappa_c", kappa_c)
        _check_rate("gamma_s", gamma_s)
    if g_c > gamma_s and g_c > kappa_c:
        return STRONG
    if cooperativity_value > 1:
        return HIGH_COOPERATIVITY
    return WEAK


def required_density(
    p_m: float,
    omega_c: float,
    kappa_c: float,
    gamma_s: float,
    target_cooperativity: float,
    g_factor: float = G_NV,
) -> float:
    """Spin density (m^-3) reaching ``target_cooperativity`` on the exact-SI pathway."""
    p_m = check_fraction("p_m", p_m)
    if p_m == 0:
        raise DomainError("no density reaches a cooperativity with p_m = 0.")
    target_cooperativity = check_positive("target_cooperativity", target_cooperativity)
    omega_c = _check_rate("omega_c", omega_c)
    kappa_c = _check_rate("kappa_c", kappa_c)
    gamma_s = _check_rate("gamma_s", gamma_s)
    m0 = g_factor * CONSTANTS.mu_B
    g_c_squared = 2 * target_cooperativity * kappa_c * gamma_s
    return 4 * g_c_squared * CONSTANTS.hbar / (m0 ** 2 * CONSTANTS.mu0 * omega_c * p_m)


def effective_linewidth(k_c: float, frequency: float) -> float:
    """Spin half-width ``gamma_s / 2 pi`` (Hz) implied by a calibrated ``k_c`` (MHz^-2).

    With ``kappa_c = omega_c / Q0``, ``C = k_c g_c^2 Q0`` equals
    ``g_c^2 / (2 kappa_c gamma_s)`` when ``gamma_s / 2 pi = 1 / (2 nu_c k_c)``.
    """
    k_c = check_positive("k_c", k_c)
    frequency = check_positive("frequency", frequency)
    k_c_hz = k_c * 1e-12
    return 1.0 / (2 * frequency * k_c_hz)


def nv_orientation_angles(b_direction: np.ndarray) -> np.ndarray:
    """Angles (degrees) between a unit field direction and the four NV axes.

    The axes are ordered ``(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)``.
    They are signed, so angles span ``[0, 180]`` and a field along ``[001]``
    sits at 54.7 or 125.3 degrees from each axis.
    """
    b = np.asarray(b_direction, dtype=float)
    if b.shape != (3,):
        raise DomainError(
            "b_direction must be a 3-vector, got shape {}.".format(b.shape)
        )
    norm = float(np.linalg.norm(b))
    if abs(norm - 1.0) > 1e-9:
        raise DomainError("b_direction must be a unit vector, |b| = {!r}.".format(norm))
    cosines = np.clip(NV_AXES.dot(b), -1.0, 1.0)
    return np.degrees(np.arccos(cosines))


def _unit(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def _orientation_residual(angles: np.ndarray, target_angle: float, count: int) -> float:
    acute = np.minimum(angles, 180.0 - angles)
    misfit = np.sort(np.abs(acute - target_angle))
    return float(misfit[count - 1])


def search_field_direction(
    target_angle_deg: float = 45.0, count: int = 2, resolution_deg: float = 2.0
) -> Tuple[np.ndarray, float]:
    """DC-field direction putting ``count`` NV sub-ensembles at ``target_angle_deg``.

    A coarse sphere grid seeds a Nelder-Mead refinement.

    Returns
    -------
    Tuple[np.ndarray, float]
        The unit direction and the worst angular misfit (degrees) among the
        ``count`` best-aligned sub-ensembles.
    """
    if not 0.0 <= target_angle_deg <= 90.0:
        raise DomainError(
            "target_angle_deg must lie in [0, 90], got {!r}.".format(target_angle_deg)
        )
    if count not in (1, 2, 3, 4):
        raise DomainError("count must be 1 to 4, got {!r}.".format(count))
    resolution_deg = check_positive("resolution_deg", resolution_deg)

    def objective(x: np.ndarray) -> float:
        angles = nv_orientation_angles(_unit(x[0], x[1]))
        return _orientation_residual(angles, target_angle_deg, count)

    step = np.radians(resolution_deg)
    thetas = np.arange(0.0, np.pi + 0.5 * step, step)
    phis = np.arange(0.0, 2 * np.pi, step)
    best = min(
        itertools.product(thetas, phis), key=lambda x: objective(np.array(x))
    )
    result = optimize.minimize(
        objective,
        np.array(best),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 2000},
    )
    direction = _unit(result.x[0], result.x[1])
    residual = objective(result.x)
    logger.debug(
        "field direction %s leaves %.3g deg misfit", np.round(direction, 6), residual
    )
    return direction, residual


def zeeman_slope(g_factor: float = G_NV) -> float:
    """First-order Zeeman shift ``g mu_B / h`` in Hz/T."""
    return g_factor * CONSTANTS.mu_B / CONSTANTS.h


def nv_transition_frequencies(
    ensemble: SpinEnsemble, b_magnitude: float, angle: float
) -> Tuple[float, float]:
    """First-order ``m_s = 0 -> -1`` and ``0 -> +1`` frequencies (Hz).

    ``angle`` is the angle in degrees between the field and the NV axis.
    """
    b_magnitude = check_positive("b_magnitude", b_magnitude, allow_zero=True)
    shift = zeeman_slope(ensemble.g_factor) * b_magnitude * np.cos(np.radians(angle))
    return ensemble.d_over_h - shift, ensemble.d_over_h + shift


@dataclass(frozen=True)
class CouplingReport:
    """Coupling figures of one cavity and ensemble pairing.

    ``g_s`` is ``None`` when the sample holds fewer than one spin.
    """

    pathway: str
    g_c: float
    g_s: Optional[float]
    n_spins: float
    cooperativity: float
    regime: str
    kappa_c: float
    gamma_s: float
    p_m: float
    q0: float
    frequency: float
    ensemble: SpinEnsemble

    @property
    def g_c_mhz(self) -> float:
        return self.g_c / (2 * np.pi) / 1e6

    @property
    def g_s_hz(self) -> Optional[float]:
        if self.g_s is None:
            return None
        return self.g_s / (2 * np.pi)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "pathway": self.pathway,
            "p_m": self.p_m,
            "q0": self.q0,
            "frequency_hz": self.frequency,
            "g_c_rad_s": self.g_c,
            "g_c_mhz": self.g_c_mhz,
            "g_s_rad_s": self.g_s,
            "g_s_hz": self.g_s_hz,
            "n_spins": self.n_spins,
            "kappa_c_rad_s": self.kappa_c,
            "gamma_s_rad_s": self.gamma_s,
            "cooperativity": self.cooperativity,
            "regime": self.regime,
        }
        result.update(
            {"ensemble_" + key: value for key, value in asdict(self.ensemble).items()}
        )
        return result


def coupling_report(
    ensemble: SpinEnsemble,
    p_m: float,
    q0: float,
    frequency: float,
    pathway: str = EXACT_SI,
    k_g: Optional[float] = None,
    k_c: Optional[float] = None,
) -> CouplingReport:
    """Couple ``ensemble`` to a mode of filling factor ``p_m`` and quality ``q0``.

    Parameters
    ----------
    pathway : str, optional
        ``"exact-si"`` (default) or ``"calibrated"``; the latter needs
        ``k_g`` (MHz) and ``k_c`` (MHz^-2).
    """
    if pathway not in PATHWAYS:
        raise DomainError(
            "pathway must be one of {}, got {!r}.".format(", ".join(PATHWAYS), pathway)
        )
    p_m = check_fraction("p_m", p_m)
    kappa_c = cavity_damping_rate(frequency, q0)
    if pathway == EXACT_SI:
        g_c = collective_coupling(ensemble, p_m, 2 * np.pi * frequency)
        c_value = cooperativity(g_c, kappa_c, ensemble.gamma_s)
    else:
        if k_g is None or k_c is None:
            raise DomainError("the calibrated pathway needs k_g and k_c.")
        g_c_mhz = calibrated_coupling(p_m, k_g)
        g_c = 2 * np.pi * g_c_mhz * 1e6
        c_value = calibrated_cooperativity(g_c_mhz, q0, k_c)
    n_spins = spin_count(ensemble)
    g_s = single_spin_coupling(g_c, n_spins) if n_spins >= 1 else None
    return CouplingReport(
        pathway=pathway,
        g_c=g_c,
        g_s=g_s,
        n_spins=n_spins,
        cooperativity=c_value,
        regime=regime_classify(g_c, kappa_c, ensemble.gamma_s, c_value),
        kappa_c=kappa_c,
        gamma_s=ensemble.gamma_s,
        p_m=p_m,
        q0=q0,
        frequency=frequency,
        ensemble=ensemble,
    )
