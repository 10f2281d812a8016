"""Declarative cavity geometries and the structured (r, z) mesh.

Axisymmetric cavities are described as an enclosing metal cylinder
``[0, outer_radius] x [0, height]`` filled with axis-aligned annular
:class:`Region` blocks. :func:`build_mesh` turns such a description into a
tensor-product :class:`AxiMesh` whose lines include every region edge.
"""
import logging
from abc import ABC, abstractproperty
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .base import REAL, DomainError, GeometryError, RefinementError
from .materials import VACUUM, Material, builtin_material

logger = logging.getLogger(__name__)

VACUUM_LABEL = "vacuum"

# relative tolerance used to merge coincident edge coordinates
_EDGE_RTOL = 1e-12


def _check_lengths(**lengths: float) -> None:
    for name, value in lengths.items():
        if not (np.isfinite(value) and value > 0):
            raise GeometryError("{} must be > 0, got {!r}.".format(name, value))


def _check_wall(material: Material) -> None:
    if not material.is_metal:
        raise GeometryError(
            "wall material must be a metal, got {!r}.".format(material.name)
        )


@dataclass(frozen=True)
class Region:
    """An annular block ``r_min <= r <= r_max``, ``z_min <= z <= z_max``."""

    r_min: float
    r_max: float
    z_min: float
    z_max: float
    material: Material
    label: str

    def __post_init__(self) -> None:
        if not (0.0 <= self.r_min < self.r_max):
            raise GeometryError(
                "region {!r}: need 0 <= r_min < r_max, got [{}, {}].".format(
                    self.label, self.r_min, self.r_max
                )
            )
        if not (self.z_min < self.z_max):
            raise GeometryError(
                "region {!r}: need z_min < z_max, got [{}, {}].".format(
                    self.label, self.z_min, self.z_max
                )
            )
        if self.material.is_metal:
            raise GeometryError(
                "region {!r}: metal regions are not supported.".format(self.label)
            )

    @property
    def volume(self) -> float:
        return float(
            np.pi * (self.r_max ** 2 - self.r_min ** 2) * (self.z_max - self.z_min)
        )

    @property
    def thickness(self) -> float:
        return min(self.r_max - self.r_min, self.z_max - self.z_min)

    def overlaps(self, other: "Region") -> bool:
        return (
            min(self.r_max, other.r_max) > max(self.r_min, other.r_min)
            and min(self.z_max, other.z_max) > max(self.z_min, other.z_min)
        )


class CavityGeometry(ABC):
    wall_material: Material

    @abstractproperty
    def variant(self) -> str:
        raise NotImplementedError("must be specified in child")


@dataclass(frozen=True)
class RectangularGeometry(CavityGeometry):
    a: float
    b: float
    d: float
    wall_material: Material = field(default_factory=lambda: builtin_material("copper"))

    def __post_init__(self) -> None:
        _check_lengths(a=self.a, b=self.b, d=self.d)
        _check_wall(self.wall_material)

    @property
    def variant(self) -> str:
        return "rectangular"


@dataclass(frozen=True)
class CylindricalGeometry(CavityGeometry):
    radius: float
    height: float
    wall_material: Material = field(default_factory=lambda: builtin_material("copper"))

    def __post_init__(self) -> None:
        _check_lengths(radius=self.radius, height=self.height)
        _check_wall(self.wall_material)

    @property
    def variant(self) -> str:
        return "cylindrical"


@dataclass(frozen=True)
class ReentrantGeometry(CavityGeometry):
    cavity_radius: float
    cavity_height: float
    post_radius: float
    gap: float
    wall_material: Material = field(default_factory=lambda: builtin_material("copper"))

    def __post_init__(self) -> None:
        _check_lengths(
            cavity_radius=self.cavity_radius,
            cavity_height=self.cavity_height,
            post_radius=self.post_radius,
            gap=self.gap,
        )
        if not self.gap < self.cavity_height:
            raise GeometryError(
                "gap ({}) must be smaller than cavity_height ({}).".format(
                    self.gap, self.cavity_height
                )
            )
        if not self.post_radius < self.cavity_radius:
            raise GeometryError(
                "post_radius ({}) must be smaller than cavity_radius ({}).".format(
                    self.post_radius, self.cavity_radius
                )
            )
        _check_wall(self.wall_material)

    @property
    def variant(self) -> str:
        return "reentrant"


@dataclass(frozen=True)
class AxisymmetricGeometry(CavityGeometry):
    """A metal cylinder loaded with dielectric regions.

    Regions must lie inside the cylinder and must not overlap. Regions sharing
    a label must share a material; the label ``vacuum`` is reserved for the
    unfilled remainder.
    """

    outer_radius: float
    height: float
    regions: Tuple[Region, ...] = ()
    wall_material: Material = field(default_factory=lambda: builtin_material("copper"))

    def __post_init__(self) -> None:
        _check_lengths(outer_radius=self.outer_radius, height=self.height)
        _check_wall(self.wall_material)
        object.__setattr__(self, "regions", tuple(self.regions))
        tol_r = _EDGE_RTOL * self.outer_radius
        tol_z = _EDGE_RTOL * self.height
        label_material: Dict[str, Material] = {VACUUM_LABEL: VACUUM}
        for region in self.regions:
            if region.r_max > self.outer_radius + tol_r or region.z_min < -tol_z or (
                region.z_max > self.height + tol_z
            ):
                raise GeometryError(
                    "region {!r} extends outside the enclosing cylinder.".format(
                        region.label
                    )
                )
            known = label_material.setdefault(region.label, region.material)
            if known != region.material:
                raise GeometryError(
                    "label {!r} is used with materials {!r} and {!r}.".format(
                        region.label, known.name, region.material.name
                    )
                )
        for i, first in enumerate(self.regions):
            for second in self.regions[i + 1 :]:
                if first.overlaps(second):
                    raise GeometryError(
                        "regions {!r} and {!r} overlap.".format(
                            first.label, second.label
                        )
                    )

    @property
    def variant(self) -> str:
        return "axisymmetric"

    @property
    def labels(self) -> List[str]:
        result = [VACUUM_LABEL]
        for region in self.regions:
            if region.label not in result:
                result.append(region.label)
        return result

    def material_of(self, label: str) -> Material:
        if label == VACUUM_LABEL:
            return VACUUM
        for region in self.regions:
            if region.label == label:
                return region.material
        raise DomainError("unknown region label {!r}.".format(label))

    def label_volume(self, label: str) -> float:
        return float(sum(r.volume for r in self.regions if r.label == label))

    def with_outer_radius(self, outer_radius: float) -> "AxisymmetricGeometry":
        """Move the side wall; regions flush with it follow."""
        tol = _EDGE_RTOL * self.outer_radius
        regions = tuple(
            replace(region, r_max=outer_radius)
            if abs(region.r_max - self.outer_radius) <= tol
            else region
            for region in self.regions
        )
        return replace(self, outer_radius=outer_radius, regions=regions)

    def with_height(self, height: float) -> "AxisymmetricGeometry":
        """Move the top wall; regions flush with it follow."""
        tol = _EDGE_RTOL * self.height
        regions = tuple(
            replace(region, z_max=height)
            if abs(region.z_max - self.height) <= tol
            else region
            for region in self.regions
        )
        return replace(self, height=height, regions=regions)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class AxiMesh:
    """A tensor-product mesh of ``[0, outer_radius] x [0, height]``.

    ``cell_material`` and ``cell_label`` are integer arrays of shape
    ``(n_r, n_z)`` indexing into ``materials`` and ``labels``.
    """

    r_nodes: np.ndarray
    z_nodes: np.ndarray
    cell_material: np.ndarray
    cell_label: np.ndarray
    materials: Tuple[Material, ...]
    labels: Tuple[str, ...]
    wall_material: Material

    def __post_init__(self) -> None:
        r, z = self.r_nodes, self.z_nodes
        if r.ndim != 1 or z.ndim != 1 or r.shape[0] < 2 or z.shape[0] < 2:
            raise GeometryError("mesh needs at least one cell in each direction.")
        if r[0] != 0.0 or z[0] != 0.0:
            raise GeometryError("mesh must start at r = 0 and z = 0.")
        if np.any(np.diff(r) <= 0) or np.any(np.diff(z) <= 0):
            raise GeometryError("mesh nodes must be strictly increasing.")
        shape = (r.shape[0] - 1, z.shape[0] - 1)
        if self.cell_material.shape != shape or self.cell_label.shape != shape:
            raise GeometryError("cell maps must have shape {}.".format(shape))
        for array in (self.r_nodes, self.z_nodes, self.cell_material, self.cell_label):
            _freeze(array)

    @property
    def n_r(self) -> int:
        return int(self.r_nodes.shape[0] - 1)

    @property
    def n_z(self) -> int:
        return int(self.z_nodes.shape[0] - 1)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_r, self.n_z)

    @property
    def outer_radius(self) -> float:
        return float(self.r_nodes[-1])

    @property
    def height(self) -> float:
        return float(self.z_nodes[-1])

    @property
    def dr(self) -> np.ndarray:
        return np.diff(self.r_nodes)

    @property
    def dz(self) -> np.ndarray:
        return np.diff(self.z_nodes)

    @property
    def r_mid(self) -> np.ndarray:
        return 0.5 * (self.r_nodes[1:] + self.r_nodes[:-1])

    @property
    def z_mid(self) -> np.ndarray:
        return 0.5 * (self.z_nodes[1:] + self.z_nodes[:-1])

    @property
    def eps_r(self) -> np.ndarray:
        """Relative permittivity per cell."""
        table = np.array([m.permittivity for m in self.materials], dtype=REAL)
        return table[self.cell_material]

    @property
    def cell_labels(self) -> np.ndarray:
        return np.array(self.labels, dtype=object)[self.cell_label]

    def label_mask(self, label: str) -> np.ndarray:
        if label not in self.labels:
            raise DomainError(
                "unknown region label {!r}; mesh labels are {}.".format(
                    label, ", ".join(self.labels)
                )
            )
        return self.cell_label == self.labels.index(label)

    def material_of(self, label: str) -> Material:
        mask = self.label_mask(label)
        if not mask.any():
            return VACUUM
        index = int(self.cell_material[mask][0])
        return self.materials[index]

    def present_labels(self) -> List[str]:
        """Labels carried by at least one cell, in first-seen order."""
        present = set(np.unique(self.cell_label).tolist())
        return [label for i, label in enumerate(self.labels) if i in present]

    def with_partition(
        self, cell_label: np.ndarray, labels: Sequence[str]
    ) -> "AxiMesh":
        """Same mesh and materials with a different labelling of the cells."""
        return AxiMesh(
            r_nodes=self.r_nodes.copy(),
            z_nodes=self.z_nodes.copy(),
            cell_material=self.cell_material.copy(),
            cell_label=np.asarray(cell_label, dtype=np.int64).copy(),
            materials=self.materials,
            labels=tuple(labels),
            wall_material=self.wall_material,
        )


def _subdivide(edges: Sequence[float], extent: float, target_cell: float) -> np.ndarray:
    tol = _EDGE_RTOL * extent
    breakpoints: List[float] = []
    for value in sorted(set(float(e) for e in edges)):
        if breakpoints and value - breakpoints[-1] <= tol:
            continue
        breakpoints.append(value)
    breakpoints[-1] = extent
    nodes = [breakpoints[0]]
    for left, right in zip(breakpoints[:-1], breakpoints[1:]):
        n_cells = max(1, int(np.ceil((right - left) / target_cell - 1e-9)))
        inner = left + (right - left) * np.arange(1, n_cells) / n_cells
        nodes.extend(inner.tolist())
        nodes.append(right)
    return np.array(nodes, dtype=REAL)


def build_mesh(geometry: AxisymmetricGeometry, target_cell: float) -> AxiMesh:
    """Mesh an axisymmetric geometry with lines snapped to every region edge.

    Parameters
    ----------
    geometry : AxisymmetricGeometry
        The cavity to mesh.
    target_cell : float
        Maximum cell extent in m, in both directions.

    Returns
    -------
    AxiMesh
        Cells not covered by a region are vacuum.

    Raises
    ------
    RefinementError
        If ``target_cell`` exceeds the thickness of some region.
    """
    if not isinstance(geometry, AxisymmetricGeometry):
        raise GeometryError(
            "build_mesh needs an axisymmetric geometry, got {!r}.".format(
                geometry.variant
            )
        )
    if not (np.isfinite(target_cell) and target_cell > 0):
        raise DomainError("target_cell must be > 0, got {!r}.".format(target_cell))
    for region in geometry.regions:
        if target_cell > region.thickness * (1 + 1e-9):
            raise RefinementError(
                "target_cell {} is larger than region {!r} (thickness {}).".format(
                    target_cell, region.label, region.thickness
                ),
                region_label=region.label,
            )

    r_edges = [0.0, geometry.outer_radius]
    z_edges = [0.0, geometry.height]
    for region in geometry.regions:
        r_edges.extend([region.r_min, region.r_max])
        z_edges.extend([region.z_min, region.z_max])
    r_nodes = _subdivide(r_edges, geometry.outer_radius, target_cell)
    z_nodes = _subdivide(z_edges, geometry.height, target_cell)

    labels = geometry.labels
    materials: List[Material] = [VACUUM]
    for region in geometry.regions:
        if region.material not in materials:
            materials.append(region.material)

    r_mid = 0.5 * (r_nodes[1:] + r_nodes[:-1])
    z_mid = 0.5 * (z_nodes[1:] + z_nodes[:-1])
    cell_material = np.zeros((r_mid.shape[0], z_mid.shape[0]), dtype=np.int64)
    cell_label = np.zeros_like(cell_material)
    for region in geometry.regions:
        in_r = (r_mid > region.r_min) & (r_mid < region.r_max)
        in_z = (z_mid > region.z_min) & (z_mid < region.z_max)
        mask = np.outer(in_r, in_z)
        cell_material[mask] = materials.index(region.material)
        cell_label[mask] = labels.index(region.label)

    logger.debug(
        "built %d x %d mesh (target_cell=%g, %d regions)",
        r_mid.shape[0],
        z_mid.shape[0],
        target_cell,
        len(geometry.regions),
    )
    return AxiMesh(
        r_nodes=r_nodes,
        z_nodes=z_nodes,
        cell_material=cell_material,
        cell_label=cell_label,
        materials=tuple(materials),
        labels=tuple(labels),
        wall_material=geometry.wall_material,
    )


def cell_volumes(mesh: AxiMesh) -> np.ndarray:
    """Annular cell volumes ``pi (r_{i+1}^2 - r_i^2) (z_{j+1} - z_j)``."""
    r2 = mesh.r_nodes ** 2
    return np.pi * np.outer(np.diff(r2), mesh.dz)


def uniform_mesh(
    outer_radius: float,
    height: float,
    n_r: int,
    n_z: int,
    material: Material = VACUUM,
    label: str = VACUUM_LABEL,
    wall_material: Optional[Material] = None,
) -> AxiMesh:
    """A uniform mesh filled with one material."""
    _check_lengths(outer_radius=outer_radius, height=height)
    if n_r < 1 or n_z < 1:
        raise DomainError("n_r and n_z must be >= 1.")
    if wall_material is None:
        wall_material = builtin_material("copper")
    materials = (material,) if material == VACUUM else (VACUUM, material)
    labels = (label,) if label == VACUUM_LABEL else (VACUUM_LABEL, label)
    return AxiMesh(
        r_nodes=np.linspace(0.0, outer_radius, n_r + 1),
        z_nodes=np.linspace(0.0, height, n_z + 1),
        cell_material=np.full((n_r, n_z), len(materials) - 1, dtype=np.int64),
        cell_label=np.full((n_r, n_z), len(labels) - 1, dtype=np.int64),
        materials=materials,
        labels=labels,
        wall_material=wall_material,
    )
