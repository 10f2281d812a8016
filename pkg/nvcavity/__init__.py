from .base import (
    CavityError,
    DomainError,
    GeometryError,
    MaterialLookupError,
    RefinementError,
    SolverError,
    SpecParseError,
    UsageError,
)
from .geometry import (
    AxiMesh,
    AxisymmetricGeometry,
    CylindricalGeometry,
    RectangularGeometry,
    ReentrantGeometry,
    Region,
    build_mesh,
)
from .materials import Material, MaterialLibrary, builtin_material
from .observables import filling_factors, geometric_factor, q_budget
from .solvers import (
    AnalyticModeSolver,
    AxisymmetricTE0Solver,
    ModeResult,
    ReentrantLumpedSolver,
)
from .spec_file import CavitySpec, parse_spec
from .spectra import SpectroscopyParams, field_sweep, reflection_spectrum
from .spins import CouplingReport, SpinEnsemble, coupling_report
from .tuning import tune_geometry

__version__ = "0.1.0"

__all__ = [
    "CavityError",
    "DomainError",
    "GeometryError",
    "RefinementError",
    "MaterialLookupError",
    "SolverError",
    "SpecParseError",
    "UsageError",
    "Material",
    "MaterialLibrary",
    "builtin_material",
    "Region",
    "RectangularGeometry",
    "CylindricalGeometry",
    "ReentrantGeometry",
    "AxisymmetricGeometry",
    "AxiMesh",
    "build_mesh",
    "ModeResult",
    "AnalyticModeSolver",
    "AxisymmetricTE0Solver",
    "ReentrantLumpedSolver",
    "tune_geometry",
    "filling_factors",
    "geometric_factor",
    "q_budget",
    "SpinEnsemble",
    "CouplingReport",
    "coupling_report",
    "SpectroscopyParams",
    "reflection_spectrum",
    "field_sweep",
    "CavitySpec",
    "parse_spec",
]
