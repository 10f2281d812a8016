"""Lumped L-C model of a reentrant (post-gap) cavity.

The gap above the post is a parallel-plate capacitor and the coaxial region
around the post a single-turn inductor. Fringing capacitance is ignored.
"""
from typing import List, NamedTuple

import numpy as np

from ..base import DomainError
from ..constants import CONSTANTS
from ..geometry import ReentrantGeometry
from .base import ModeResult, ModeSolverBase, Window

REENTRANT_MODE_ID = "reentrant-fundamental"

# post radii within this fraction of the cavity radius leave L ill-conditioned
_POST_RADIUS_LIMIT = 1.0 - 1e-9


class LumpedElements(NamedTuple):
    capacitance: float
    inductance: float


def reentrant_elements(geometry: ReentrantGeometry) -> LumpedElements:
    if not isinstance(geometry, ReentrantGeometry):
        raise DomainError("lumped model needs a reentrant geometry.")
    if geometry.gap > 0.5 * geometry.cavity_height:
        raise DomainError(
            "gap ({}) must be at most half the cavity height ({}).".format(
                geometry.gap, geometry.cavity_height
            )
        )
    if geometry.post_radius >= _POST_RADIUS_LIMIT * geometry.cavity_radius:
        raise DomainError(
            "post_radius {} is too close to cavity_radius {}.".format(
                geometry.post_radius, geometry.cavity_radius
            )
        )
    capacitance = CONSTANTS.eps0 * np.pi * geometry.post_radius ** 2 / geometry.gap
    inductance = (
        CONSTANTS.mu0
        * geometry.cavity_height
        / (2 * np.pi)
        * np.log(geometry.cavity_radius / geometry.post_radius)
    )
    return LumpedElements(capacitance=float(capacitance), inductance=float(inductance))


def reentrant_lumped(geometry: ReentrantGeometry) -> ModeResult:
    """``f = 1 / (2 pi sqrt(L C))`` of the reentrant fundamental mode."""
    elements = reentrant_elements(geometry)
    frequency = 1.0 / (
        2 * np.pi * np.sqrt(elements.inductance * elements.capacitance)
    )
    return ModeResult(frequency=float(frequency), mode_id=REENTRANT_MODE_ID)


class ReentrantLumpedSolver(ModeSolverBase):
    def __init__(self, geometry: ReentrantGeometry):
        self.geometry = geometry

    def _candidate_modes(self, window: Window, n_modes: int) -> List[ModeResult]:
        return [reentrant_lumped(self.geometry)]
