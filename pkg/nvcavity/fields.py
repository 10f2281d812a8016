"""TE0 field storage and the energy quadratures shared by every observable.

Fields live on a staggered grid:

* ``e_phi`` on mesh nodes, shape ``(n_r + 1, n_z + 1)``;
* ``h_r_edges`` on vertical edges ``(r_i, z_{j+1/2})``, shape ``(n_r + 1, n_z)``;
* ``h_z_edges`` on horizontal edges ``(r_{i+1/2}, z_j)``, shape ``(n_r, n_z + 1)``.

Every cell receives annular shares of the nodes and edges on its boundary.
The shares of one cell add up to its volume, so per-cell energies partition
the totals exactly.
"""
from dataclasses import dataclass
from typing import Callable, NamedTuple, Tuple

import numpy as np

from .base import COMPLEX, DomainError
from .constants import CONSTANTS
from .geometry import AxiMesh, cell_volumes

FieldFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


class CellWeights(NamedTuple):
    """Split of each cell volume at its mid radius.

    ``inner`` is ``pi (r_mid^2 - r_i^2) dz`` and ``outer`` is
    ``pi (r_{i+1}^2 - r_mid^2) dz``; ``inner + outer`` is the cell volume.
    """

    inner: np.ndarray
    outer: np.ndarray
    volume: np.ndarray


def cell_weights(mesh: AxiMesh) -> CellWeights:
    r = mesh.r_nodes
    r_mid = mesh.r_mid
    dz = mesh.dz
    inner = np.pi * np.outer(r_mid ** 2 - r[:-1] ** 2, dz)
    outer = np.pi * np.outer(r[1:] ** 2 - r_mid ** 2, dz)
    return CellWeights(inner=inner, outer=outer, volume=cell_volumes(mesh))


def node_positions(mesh: AxiMesh) -> Tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(mesh.r_nodes, mesh.z_nodes, indexing="ij")


def vertical_edge_positions(mesh: AxiMesh) -> Tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(mesh.r_nodes, mesh.z_mid, indexing="ij")


def horizontal_edge_positions(mesh: AxiMesh) -> Tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(mesh.r_mid, mesh.z_nodes, indexing="ij")


def boundary_node_mask(mesh: AxiMesh) -> np.ndarray:
    """Nodes on the axis or on a metal wall."""
    mask = np.zeros((mesh.n_r + 1, mesh.n_z + 1), dtype=bool)
    mask[0, :] = True
    mask[-1, :] = True
    mask[:, 0] = True
    mask[:, -1] = True
    return mask


def curl_of_e_phi(mesh: AxiMesh, e_phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Staggered ``(-dE/dz, (1/r) d(rE)/dr)`` of a nodal azimuthal field."""
    dz = mesh.dz
    curl_r = -np.diff(e_phi, axis=1) / dz[np.newaxis, :]
    r = mesh.r_nodes
    re = r[:, np.newaxis] * e_phi
    curl_z = np.diff(re, axis=0) / (mesh.r_mid * mesh.dr)[:, np.newaxis]
    return curl_r, curl_z


@dataclass(frozen=True, eq=False)
class FieldSolution:
    """Complex amplitudes of one TE0 mode on an :class:`AxiMesh`."""

    mesh: AxiMesh
    omega: float
    e_phi: np.ndarray
    h_r_edges: np.ndarray
    h_z_edges: np.ndarray

    def __post_init__(self) -> None:
        n_r, n_z = self.mesh.shape
        expected = {
            "e_phi": (n_r + 1, n_z + 1),
            "h_r_edges": (n_r + 1, n_z),
            "h_z_edges": (n_r, n_z + 1),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise DomainError(
                    "{} must have shape {}, got {}.".format(
                        name, shape, getattr(self, name).shape
                    )
                )

    @classmethod
    def from_e_phi(
        cls, mesh: AxiMesh, omega: float, e_phi: np.ndarray
    ) -> "FieldSolution":
        """Derive H from Faraday's law, ``H = j curl(E) / (omega mu0)``."""
        if not omega > 0:
            raise DomainError("omega must be > 0, got {!r}.".format(omega))
        e_phi = np.array(e_phi, dtype=COMPLEX)
        e_phi[boundary_node_mask(mesh)] = 0.0
        curl_r, curl_z = curl_of_e_phi(mesh, e_phi)
        factor = 1j / (omega * CONSTANTS.mu0)
        return cls(
            mesh=mesh,
            omega=float(omega),
            e_phi=e_phi,
            h_r_edges=factor * curl_r,
            h_z_edges=factor * curl_z,
        )

    @classmethod
    def sample(
        cls,
        mesh: AxiMesh,
        omega: float,
        e_phi: FieldFunction,
        h_r: FieldFunction,
        h_z: FieldFunction,
    ) -> "FieldSolution":
        """Sample closed-form fields ``f(r, z)`` at their staggered positions.

        ``e_phi`` is forced to zero on the axis and on the walls.
        """
        r, z = node_positions(mesh)
        e_values = np.array(e_phi(r, z), dtype=COMPLEX)
        e_values[boundary_node_mask(mesh)] = 0.0
        return cls(
            mesh=mesh,
            omega=float(omega),
            e_phi=e_values,
            h_r_edges=np.array(h_r(*vertical_edge_positions(mesh)), dtype=COMPLEX),
            h_z_edges=np.array(h_z(*horizontal_edge_positions(mesh)), dtype=COMPLEX),
        )

    @property
    def h_r(self) -> np.ndarray:
        """Cell-centred H_r."""
        return 0.5 * (self.h_r_edges[1:, :] + self.h_r_edges[:-1, :])

    @property
    def h_z(self) -> np.ndarray:
        """Cell-centred H_z."""
        return 0.5 * (self.h_z_edges[:, 1:] + self.h_z_edges[:, :-1])

    @property
    def frequency(self) -> float:
        return self.omega / (2 * np.pi)

    def scaled(self, factor: complex) -> "FieldSolution":
        return FieldSolution(
            mesh=self.mesh,
            omega=self.omega,
            e_phi=self.e_phi * factor,
            h_r_edges=self.h_r_edges * factor,
            h_z_edges=self.h_z_edges * factor,
        )

    def normalized(self, total_energy: float = 1.0) -> "FieldSolution":
        """Rescale so that ``W_e + W_m == total_energy`` (J)."""
        w_e, w_m = mode_energies(self)
        total = w_e + w_m
        if total <= 0:
            raise DomainError("cannot normalize a zero field.")
        return self.scaled(np.sqrt(total_energy / total))


def electric_cell_integrals(field: FieldSolution) -> np.ndarray:
    """Per-cell ``integral eps_r |E|^2 dv`` (m^3 V^2/m^2)."""
    weights = cell_weights(field.mesh)
    e2 = np.abs(field.e_phi) ** 2
    inner = 0.5 * weights.inner * (e2[:-1, :-1] + e2[:-1, 1:])
    outer = 0.5 * weights.outer * (e2[1:, :-1] + e2[1:, 1:])
    return field.mesh.eps_r * (inner + outer)


def magnetic_cell_integrals(field: FieldSolution) -> np.ndarray:
    """Per-cell ``integral mu_r |H|^2 dv`` (m^3 A^2/m^2); mu_r is 1."""
    weights = cell_weights(field.mesh)
    hr2 = np.abs(field.h_r_edges) ** 2
    hz2 = np.abs(field.h_z_edges) ** 2
    radial = weights.inner * hr2[:-1, :] + weights.outer * hr2[1:, :]
    axial = 0.5 * weights.volume * (hz2[:, :-1] + hz2[:, 1:])
    return radial + axial


def mode_energies(field: FieldSolution) -> Tuple[float, float]:
    """Stored energies ``(W_e, W_m)`` in J.

    ``W_e = 1/2 integral eps0 eps_r |E|^2`` and
    ``W_m = 1/2 integral mu0 |H|^2``.
    """
    w_e = 0.5 * CONSTANTS.eps0 * float(electric_cell_integrals(field).sum())
    w_m = 0.5 * CONSTANTS.mu0 * float(magnetic_cell_integrals(field).sum())
    return w_e, w_m


def mode_volume(field: FieldSolution) -> float:
    """Peak-normalized mode volume in m^3.

    ``V = integral eps_r |E|^2 dv / max_cells(eps_r |E|^2)``, the maximum taken
    over cell averages.
    """
    integrals = electric_cell_integrals(field)
    density = integrals / cell_volumes(field.mesh)
    peak = float(density.max())
    if not peak > 0:
        raise DomainError("mode volume of a zero field is undefined.")
    return float(integrals.sum()) / peak


def energy_imbalance(field: FieldSolution) -> float:
    """``|W_e - W_m| / (W_e + W_m)``."""
    w_e, w_m = mode_energies(field)
    total = w_e + w_m
    if total <= 0:
        return 0.0
    return abs(w_e - w_m) / total


