"""Cavity figures of merit: filling factors, geometric factor and the Q budget."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from .base import DomainError, check_fraction, check_positive
from .constants import CONSTANTS
from .fields import FieldSolution, electric_cell_integrals, magnetic_cell_integrals
from .geometry import VACUUM_LABEL
from .materials import Material
from .solvers.base import ModeResult

logger = logging.getLogger(__name__)


def _label_fraction(integrals: np.ndarray, field: FieldSolution, label: str) -> float:
    mask = field.mesh.label_mask(label)
    total = float(integrals.sum())
    if not total > 0:
        raise DomainError("filling factor of a zero field is undefined.")
    return min(1.0, float(integrals[mask].sum()) / total)


def magnetic_filling_factor(field: FieldSolution, region_label: str) -> float:
    """Share of the magnetic energy stored in the cells labelled ``region_label``.

    Raises
    ------
    DomainError
        If the label is unknown to the mesh or the field is zero.
    """
    return _label_fraction(magnetic_cell_integrals(field), field, region_label)


def electric_filling_factor(field: FieldSolution, region_label: str) -> float:
    """Share of the permittivity-weighted electric energy in ``region_label``."""
    return _label_fraction(electric_cell_integrals(field), field, region_label)


@dataclass(frozen=True)
class FillingFactors:
    p_m: Dict[str, float]
    p_e: Dict[str, float]

    @property
    def labels(self) -> List[str]:
        return list(self.p_m.keys())


def filling_factors(
    field: FieldSolution, labels: Optional[Iterable[str]] = None
) -> FillingFactors:
    """Both filling factors for every label (all mesh labels by default)."""
    if labels is None:
        labels = field.mesh.labels
    magnetic = magnetic_cell_integrals(field)
    electric = electric_cell_integrals(field)
    p_m: Dict[str, float] = {}
    p_e: Dict[str, float] = {}
    for label in labels:
        p_m[label] = _label_fraction(magnetic, field, label)
        p_e[label] = _label_fraction(electric, field, label)
    return FillingFactors(p_m=p_m, p_e=p_e)


def _extrapolate(
    near: np.ndarray, far: np.ndarray, x_near: float, x_far: float, x_wall: float
) -> np.ndarray:
    return near + (near - far) * (x_wall - x_near) / (x_near - x_far)


def wall_tangential_integral(field: FieldSolution) -> float:
    """``integral |H_tan|^2 ds`` over the end walls and the side wall.

    Tangential H is extrapolated linearly onto each wall from the two nearest
    staggered samples.
    """
    mesh = field.mesh
    if mesh.n_r < 2 or mesh.n_z < 2:
        raise DomainError("geometric factor needs at least 2 cells per direction.")
    z_mid = mesh.z_mid
    r_mid = mesh.r_mid
    h_r = field.h_r_edges
    h_z = field.h_z_edges

    bottom = _extrapolate(h_r[:, 0], h_r[:, 1], z_mid[0], z_mid[1], 0.0)
    top = _extrapolate(h_r[:, -1], h_r[:, -2], z_mid[-1], z_mid[-2], mesh.height)
    side = _extrapolate(
        h_z[-1, :], h_z[-2, :], r_mid[-1], r_mid[-2], mesh.outer_radius
    )

    bounds = np.concatenate([[0.0], r_mid, [mesh.outer_radius]])
    annuli = np.pi * np.diff(bounds ** 2)
    z_bounds = np.concatenate([[0.0], z_mid, [mesh.height]])
    strips = 2 * np.pi * mesh.outer_radius * np.diff(z_bounds)

    ends = float(np.sum(annuli * (np.abs(bottom) ** 2 + np.abs(top) ** 2)))
    return ends + float(np.sum(strips * np.abs(side) ** 2))


def geometric_factor(field: FieldSolution) -> float:
    """``GF = omega mu0 integral |H|^2 dv / integral |H_tan|^2 ds`` in Ohm.

    Raises
    ------
    DomainError
        If the tangential wall field vanishes.
    """
    surface = wall_tangential_integral(field)
    if not surface > 0:
        raise DomainError("tangential wall field is zero; geometric factor undefined.")
    volume = float(magnetic_cell_integrals(field).sum())
    return field.omega * CONSTANTS.mu0 * volume / surface


def q_metal(gf: float, r_surface: float) -> float:
    """Wall-loss Q, ``GF / R_s``; a lossless wall gives ``inf``."""
    gf = check_positive("gf", gf)
    r_surface = check_positive("r_surface", r_surface, allow_zero=True)
    if r_surface == 0:
        return np.inf
    return gf / r_surface


def q_dielectric(p_e: float, tan_delta: float) -> float:
    """Dielectric-loss Q, ``1 / (p_e tan_delta)``."""
    p_e = check_fraction("p_e", p_e)
    tan_delta = check_positive("tan_delta", tan_delta, allow_zero=True)
    if p_e == 0 or tan_delta == 0:
        return np.inf
    return 1.0 / (p_e * tan_delta)


def q_total(q_parts: Iterable[float]) -> float:
    """Harmonic combination of the per-channel Q factors."""
    parts = [float(q) for q in q_parts]
    if not parts:
        raise DomainError("q_total needs at least one loss channel.")
    inverse = 0.0
    for q in parts:
        if not q > 0:
            raise DomainError("Q factors must be > 0, got {!r}.".format(q))
        inverse += 1.0 / q
    if inverse == 0:
        return np.inf
    return 1.0 / inverse


def cavity_damping_rate(frequency: float, q0: float) -> float:
    """``kappa_c = 2 pi nu_c / Q0`` in rad/s."""
    frequency = check_positive("frequency", frequency)
    q0 = check_positive("q0", q0)
    return 2 * np.pi * frequency / q0


@dataclass(frozen=True)
class QBudget:
    """Per-channel Q factors of one mode.

    ``q_diel`` maps every non-vacuum region label to its dielectric Q.
    """

    q_met: float
    q_diel: Dict[str, float]
    q0: float
    kappa_c: float
    gf: Optional[float]
    frequency: float

    @classmethod
    def from_parts(
        cls,
        frequency: float,
        q_met: float,
        q_diel: Dict[str, float],
        gf: Optional[float] = None,
    ) -> "QBudget":
        q0 = q_total([q_met] + list(q_diel.values()))
        return cls(
            q_met=q_met,
            q_diel=dict(q_diel),
            q0=q0,
            kappa_c=cavity_damping_rate(frequency, q0),
            gf=gf,
            frequency=frequency,
        )

    @property
    def channels(self) -> Dict[str, float]:
        result = {"metal": self.q_met}
        result.update(self.q_diel)
        return result


def q_budget(mode: ModeResult, wall_material: Optional[Material] = None) -> QBudget:
    """Q budget of a solved mode: the metal wall and every labelled dielectric.

    Parameters
    ----------
    mode : ModeResult
        A mode carrying a field solution.
    wall_material : Material, optional
        Overrides the wall material stored on the mesh.
    """
    field = mode.field
    if field is None:
        raise DomainError(
            "mode {} has no field solution; its Q budget cannot be computed.".format(
                mode.mode_id
            )
        )
    mesh = field.mesh
    wall = mesh.wall_material if wall_material is None else wall_material
    if wall.r_surface is None:
        raise DomainError("wall material {!r} is not a metal.".format(wall.name))
    gf = geometric_factor(field)
    factors = filling_factors(field)
    q_diel: Dict[str, float] = {}
    for label in mesh.labels:
        if label == VACUUM_LABEL:
            continue
        material = mesh.material_of(label)
        q_diel[label] = q_dielectric(factors.p_e[label], material.tan_delta or 0.0)
    budget = QBudget.from_parts(
        frequency=mode.frequency,
        q_met=q_metal(gf, wall.r_surface),
        q_diel=q_diel,
        gf=gf,
    )
    logger.debug("Q budget of %s: Q0=%.6g, GF=%.6g Ohm", mode.mode_id, budget.q0, gf)
    return budget
