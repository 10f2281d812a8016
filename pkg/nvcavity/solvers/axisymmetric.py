"""Finite-difference eigenmodes of azimuthally symmetric TE0 resonances.

The scalar unknown is ``u = E_phi`` on the mesh nodes. With the staggered
gradients

* ``(u[i, j+1] - u[i, j]) / dz_j`` on vertical edges and
* ``(r_{i+1} u[i+1, j] - r_i u[i, j]) / (r_mid_i dr_i)`` on horizontal edges,

and the annular weights of :mod:`nvcavity.fields`, the Helmholtz problem
becomes the symmetric pencil ``A u = (omega / c)^2 B u`` with a diagonal,
positive ``B``. Its Rayleigh quotient is the discrete ``W_m / W_e`` ratio,
so every eigenpair is in exact equipartition.
"""
import logging
from typing import List, NamedTuple, Tuple

import numpy as np
import scipy.sparse as sps
from scipy import linalg
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from ..base import REAL, DomainError, SolverError
from ..constants import CONSTANTS
from ..fields import (
    FieldSolution,
    boundary_node_mask,
    cell_weights,
    mode_energies,
    mode_volume,
)
from ..geometry import AxiMesh
from .base import ModeResult, ModeSolverBase, Window

logger = logging.getLogger(__name__)

# below this many unknowns the pencil is solved densely
DENSE_LIMIT = 400

LOADED_MODE_ID = "TE01δ"


class TE0Operators(NamedTuple):
    """Stiffness ``a``, diagonal mass ``b`` and the interior node indices."""

    a: sps.csr_matrix
    b: sps.csr_matrix
    interior: np.ndarray


def _dual_lengths(nodes: np.ndarray) -> np.ndarray:
    steps = np.diff(nodes)
    dual = np.zeros(nodes.shape[0], dtype=REAL)
    dual[:-1] += 0.5 * steps
    dual[1:] += 0.5 * steps
    return dual


def _dual_annuli(mesh: AxiMesh) -> np.ndarray:
    """``pi (r_{i+1/2}^2 - r_{i-1/2}^2)`` around each radial node."""
    bounds = np.concatenate([[0.0], mesh.r_mid, [mesh.outer_radius]])
    return np.pi * np.diff(bounds ** 2)


def nodal_mass(mesh: AxiMesh) -> np.ndarray:
    """``integral eps_r dv`` shares of every node, shape ``(n_r + 1, n_z + 1)``."""
    weights = cell_weights(mesh)
    eps = mesh.eps_r
    mass = np.zeros((mesh.n_r + 1, mesh.n_z + 1), dtype=REAL)
    inner = 0.5 * eps * weights.inner
    outer = 0.5 * eps * weights.outer
    mass[:-1, :-1] += inner
    mass[:-1, 1:] += inner
    mass[1:, :-1] += outer
    mass[1:, 1:] += outer
    return mass


def assemble_te0_operators(mesh: AxiMesh) -> TE0Operators:
    """Assemble the symmetric TE0 pencil restricted to interior nodes.

    Raises
    ------
    DomainError
        If the mesh has no interior node.
    """
    n_r, n_z = mesh.shape
    if n_r < 2 or n_z < 2:
        raise DomainError(
            "TE0 solve needs at least 2 cells per direction, got {} x {}.".format(
                n_r, n_z
            )
        )
    dz = mesh.dz
    dr = mesh.dr
    r = mesh.r_nodes

    d_z = sps.diags([-1.0 / dz, 1.0 / dz], [0, 1], shape=(n_z, n_z + 1))
    g_z = sps.kron(sps.identity(n_r + 1), d_z, format="csr")
    w_z = np.outer(_dual_annuli(mesh), dz).ravel()

    scale = 1.0 / (mesh.r_mid * dr)
    d_r = sps.diags([-r[:-1] * scale, r[1:] * scale], [0, 1], shape=(n_r, n_r + 1))
    g_r = sps.kron(d_r, sps.identity(n_z + 1), format="csr")
    w_r = np.outer(np.pi * np.diff(r ** 2), _dual_lengths(mesh.z_nodes)).ravel()

    stiffness = g_z.T @ sps.diags(w_z) @ g_z + g_r.T @ sps.diags(w_r) @ g_r
    interior = np.flatnonzero(~boundary_node_mask(mesh).ravel())
    a = sps.csr_matrix(stiffness)[interior][:, interior]
    b = sps.diags(nodal_mass(mesh).ravel()[interior], format="csr")
    logger.debug(
        "assembled TE0 pencil: %d unknowns, %d non-zeros", interior.shape[0], a.nnz
    )
    return TE0Operators(a=a.tocsr(), b=b, interior=interior)


def _to_lambda(frequency: float) -> float:
    return (2 * np.pi * frequency / CONSTANTS.c) ** 2


def _eigen_pairs(
    operators: TE0Operators, lam_lo: float, lam_hi: float, n_modes: int
) -> Tuple[np.ndarray, np.ndarray]:
    a, b = operators.a, operators.b
    n_unknowns = a.shape[0]
    if n_unknowns <= DENSE_LIMIT:
        values, vectors = linalg.eigh(a.toarray(), b.toarray())
        return values, vectors

    sigma = 0.5 * (lam_lo + lam_hi)
    reach = max(sigma - lam_lo, lam_hi - sigma)
    k = min(max(2 * n_modes, 6), n_unknowns - 2)
    v0 = np.ones(n_unknowns, dtype=REAL)
    while True:
        try:
            values, vectors = eigsh(a, k=k, M=b, sigma=sigma, which="LM", v0=v0)
        except ArpackNoConvergence as exc:
            raise SolverError(
                "shift-invert iteration did not converge.",
                diagnostics={
                    "k": k,
                    "sigma": sigma,
                    "n_unknowns": n_unknowns,
                    "converged": len(exc.eigenvalues),
                },
            )
        except ArpackError as exc:
            raise SolverError(
                "eigen-iteration failed: {}".format(exc),
                diagnostics={"k": k, "sigma": sigma, "n_unknowns": n_unknowns},
            )
        covered = float(np.max(np.abs(values - sigma)))
        logger.debug("eigsh k=%d sigma=%.6g covers +-%.6g", k, sigma, covered)
        if covered > reach or k >= n_unknowns - 2:
            return values, vectors
        k = min(2 * k, n_unknowns - 2)


class AxisymmetricTE0Solver(ModeSolverBase):
    """TE0 modes of a dielectric-loaded cylinder.

    Parameters
    ----------
    mesh : AxiMesh
        Interface-aligned mesh of the cavity.
    """

    def __init__(self, mesh: AxiMesh):
        self.mesh = mesh

    @property
    def loaded(self) -> bool:
        return bool(np.any(self.mesh.eps_r != 1.0))

    def _candidate_modes(self, window: Window, n_modes: int) -> List[ModeResult]:
        lo, hi = window
        lam_lo, lam_hi = _to_lambda(lo), _to_lambda(hi)
        operators = assemble_te0_operators(self.mesh)
        values, vectors = _eigen_pairs(operators, lam_lo, lam_hi, n_modes)

        order = np.argsort(values)
        n_nodes = (self.mesh.n_r + 1) * (self.mesh.n_z + 1)
        modes: List[ModeResult] = []
        for index in order:
            lam = values[index]
            if not (lam_lo <= lam <= lam_hi) or lam <= 0:
                continue
            if len(modes) == n_modes:
                break
            vector = vectors[:, index]
            vector = vector * np.sign(vector[np.argmax(np.abs(vector))])
            e_phi = np.zeros(n_nodes, dtype=REAL)
            e_phi[operators.interior] = vector
            omega = CONSTANTS.c * float(np.sqrt(lam))
            field = FieldSolution.from_e_phi(
                self.mesh, omega, e_phi.reshape(self.mesh.n_r + 1, -1)
            ).normalized()
            w_e, w_m = mode_energies(field)
            if self.loaded and not modes:
                mode_id = LOADED_MODE_ID
            else:
                mode_id = "TE0[{}]".format(len(modes) + 1)
            modes.append(
                ModeResult(
                    frequency=omega / (2 * np.pi),
                    mode_id=mode_id,
                    field=field,
                    w_e=w_e,
                    w_m=w_m,
                    mode_volume=mode_volume(field),
                )
            )
        logger.debug(
            "%d TE0 modes in %.6g-%.6g Hz on a %d x %d mesh",
            len(modes),
            lo,
            hi,
            self.mesh.n_r,
            self.mesh.n_z,
        )
        return modes


def solve_axisymmetric_te0(
    mesh: AxiMesh, window: Window, n_modes: int = 1
) -> List[ModeResult]:
    """Up to ``n_modes`` TE0 modes in ``window`` (Hz), ascending.

    An empty list means no eigenvalue lies in the window.

    Raises
    ------
    SolverError
        If the shift-invert iteration does not converge.
    """
    return AxisymmetricTE0Solver(mesh).solve(window, n_modes)


def lowest_te0_frequency(mesh: AxiMesh) -> float:
    """Frequency (Hz) of the lowest TE0 eigenmode, with no window restriction."""
    operators = assemble_te0_operators(mesh)
    values, _ = _eigen_pairs(operators, 0.0, 0.0, 1)
    positive = values[values > 0]
    if positive.shape[0] == 0:
        raise SolverError(
            "no positive eigenvalue found.",
            diagnostics={"n_unknowns": operators.a.shape[0]},
        )
    return CONSTANTS.c * float(np.sqrt(positive.min())) / (2 * np.pi)
