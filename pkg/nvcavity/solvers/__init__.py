from .analytic import (
    AnalyticModeSolver,
    analytic_cylindrical_mode,
    analytic_rectangular_mode,
)
from .axisymmetric import (
    AxisymmetricTE0Solver,
    lowest_te0_frequency,
    solve_axisymmetric_te0,
)
from .base import ModeResult, ModeSolverBase
from .lumped import ReentrantLumpedSolver, reentrant_lumped

__all__ = [
    "ModeResult",
    "ModeSolverBase",
    "AnalyticModeSolver",
    "AxisymmetricTE0Solver",
    "ReentrantLumpedSolver",
    "analytic_rectangular_mode",
    "analytic_cylindrical_mode",
    "solve_axisymmetric_te0",
    "lowest_te0_frequency",
    "reentrant_lumped",
]
