from typing import Any, Dict, Optional, Union

import numpy as np

REAL = np.float64
COMPLEX = np.complex128

FloatOrArray = Union[float, np.ndarray]


class CavityError(Exception):
    """Base class of every error raised by nvcavity."""


class DomainError(CavityError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class GeometryError(DomainError):
    """Invalid cavity dimensions or region layout."""


class RefinementError(GeometryError):
    """The requested mesh cell is larger than a region can accommodate."""

    def __init__(self, message: str, region_label: Optional[str] = None):
        super().__init__(message)
        self.region_label = region_label


class MaterialLookupError(CavityError, LookupError):
    """Unknown material identifier."""


class SolverError(CavityError, RuntimeError):
    """The eigen-iteration failed to converge."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def __str__(self) -> str:
        message = super().__str__()
        if not self.diagnostics:
            return message
        details = ", ".join(
            "{}={}".format(key, value) for key, value in self.diagnostics.items()
        )
        return "{} ({})".format(message, details)


class SpecParseError(CavityError, ValueError):
    """A cavity-spec file failed validation.

    ``key`` is the dotted path of the offending entry (e.g.
    ``geometry.outer_radius``) and ``line`` its 1-based line number,
    when known.
    """

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
        path: Optional[str] = None,
    ):
        self.key = key
        self.line = line
        self.path = path
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append("line {}".format(line))
        if key is not None:
            location.append("[{}]".format(key))
        if location:
            message = "{}: {}".format(" ".join(location), message)
        super().__init__(message)


class UsageError(CavityError, ValueError):
    """A command was invoked with arguments it cannot run with."""


def check_positive(name: str, value: float, allow_zero: bool = False) -> float:
    value = float(value)
    if np.isnan(value):
        raise DomainError("{} must be a number, got nan.".format(name))
    if allow_zero:
        if value < 0:
            raise DomainError("{} must be >= 0, got {!r}.".format(name, value))
    elif value <= 0:
        raise DomainError("{} must be > 0, got {!r}.".format(name, value))
    return value


def check_fraction(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError("{} must lie in [0, 1], got {!r}.".format(name, value))
    return value
