import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional

import numpy as np
import pandas as pd

from .base import CavityError, DomainError, MaterialLookupError

DIELECTRIC = "dielectric"
METAL = "metal"

DEFAULT_MATERIALS_PATH = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "data", "materials.txt"
)

MATERIAL_COLUMNS = [
    "name",
    "kind",
    "eps_r",
    "tan_delta",
    "mu_r",
    "r_surface",
    "source",
]


@dataclass(frozen=True)
class Material:
    """Fixed 4 K electromagnetic properties of one material.

    Dielectrics carry ``eps_r`` and ``tan_delta``; metals carry the surface
    resistance ``r_surface`` (Ohm). ``mu_r`` is always 1.
    """

    name: str
    kind: str
    eps_r: Optional[float] = None
    tan_delta: Optional[float] = None
    mu_r: float = 1.0
    r_surface: Optional[float] = None
    source: str = ""

    def __post_init__(self) -> None:
        if self.kind == DIELECTRIC:
            if self.eps_r is None or self.tan_delta is None:
                raise DomainError(
                    "dielectric {!r} needs eps_r and tan_delta.".format(self.name)
                )
            if self.r_surface is not None:
                raise DomainError(
                    "dielectric {!r} cannot carry r_surface.".format(self.name)
                )
            if not self.eps_r >= 1.0:
                raise DomainError(
                    "eps_r of {!r} must be >= 1, got {}.".format(self.name, self.eps_r)
                )
            if not self.tan_delta >= 0.0:
                raise DomainError(
                    "tan_delta of {!r} must be >= 0, got {}.".format(
                        self.name, self.tan_delta
                    )
                )
        elif self.kind == METAL:
            if self.r_surface is None:
                raise DomainError("metal {!r} needs r_surface.".format(self.name))
            if self.eps_r is not None or self.tan_delta is not None:
                raise DomainError(
                    "metal {!r} cannot carry eps_r/tan_delta.".format(self.name)
                )
            if not self.r_surface >= 0.0:
                raise DomainError(
                    "r_surface of {!r} must be >= 0, got {}.".format(
                        self.name, self.r_surface
                    )
                )
        else:
            raise DomainError(
                "kind must be {!r} or {!r}, got {!r}.".format(
                    DIELECTRIC, METAL, self.kind
                )
            )
        if self.mu_r != 1.0:
            raise DomainError(
                "mu_r of {!r} must be 1, got {}.".format(self.name, self.mu_r)
            )

    @property
    def is_metal(self) -> bool:
        return self.kind == METAL

    @property
    def permittivity(self) -> float:
        if self.eps_r is None:
            raise DomainError(
                "{!r} is a metal and has no permittivity.".format(self.name)
            )
        return self.eps_r


VACUUM = Material(
    name="vacuum", kind=DIELECTRIC, eps_r=1.0, tan_delta=0.0, source="definition"
)


def _optional(value: object) -> Optional[float]:
    if value is None:
        return None
    value_f = float(value)  # type: ignore
    if np.isnan(value_f):
        return None
    return value_f


class MaterialLibrary:
    """An immutable, name-indexed set of :class:`Material` records."""

    def __init__(self, materials: List[Material]):
        self._materials: Dict[str, Material] = {}
        for material in materials:
            if material.name in self._materials:
                raise CavityError("duplicate material {!r}.".format(material.name))
            self._materials[material.name] = material

    @classmethod
    def from_file(cls, path: str = DEFAULT_MATERIALS_PATH) -> "MaterialLibrary":
        """Load a whitespace-separated material data file.

        Fields are ``name kind eps_r tan_delta mu_r r_surface source``;
        ``-`` marks an unset field and ``#`` starts a comment.
        """
        df = pd.read_csv(
            path,
            sep=r"\s+",
            comment="#",
            na_values="-",
            keep_default_na=False,
            dtype={"name": str, "kind": str, "source": str},
            encoding="utf-8",
        )
        missing = [column for column in MATERIAL_COLUMNS if column not in df.columns]
        if missing:
            raise CavityError(
                "material file {} lacks columns {}.".format(path, ", ".join(missing))
            )
        materials = []
        for row in df.itertuples(index=False):
            mu_r = _optional(row.mu_r)
            materials.append(
                Material(
                    name=row.name,
                    kind=row.kind,
                    eps_r=_optional(row.eps_r),
                    tan_delta=_optional(row.tan_delta),
                    mu_r=1.0 if mu_r is None else mu_r,
                    r_surface=_optional(row.r_surface),
                    source="" if pd.isna(row.source) else str(row.source),
                )
            )
        return cls(materials)

    def __getitem__(self, name: str) -> Material:
        try:
            return self._materials[name]
        except KeyError:
            raise MaterialLookupError(
                "unknown material {!r}; valid identifiers are: {}.".format(
                    name, ", ".join(sorted(self._materials))
                )
            ) from None

    def __contains__(self, name: object) -> bool:
        return name in self._materials

    def __iter__(self) -> Iterator[Material]:
        return iter(self._materials.values())

    def __len__(self) -> int:
        return len(self._materials)

    @property
    def names(self) -> List[str]:
        return list(self._materials)

    def to_frame(self) -> pd.DataFrame:
        records = [
            {
                "name": m.name,
                "kind": m.kind,
                "eps_r": m.eps_r,
                "tan_delta": m.tan_delta,
                "mu_r": m.mu_r,
                "r_surface": m.r_surface,
                "source": m.source,
            }
            for m in self
        ]
        return pd.DataFrame(records, columns=MATERIAL_COLUMNS)


@lru_cache(maxsize=1)
def default_library() -> MaterialLibrary:
    return MaterialLibrary.from_file(DEFAULT_MATERIALS_PATH)


def builtin_material(name: str) -> Material:
    """Look up one of the bundled 4 K materials.

    Parameters
    ----------
    name : str
        One of ``copper``, ``diamond``, ``sapphire``, ``rutile``,
        ``rutile-c-axial``, ``fused-silica`` or ``vacuum``.

    Raises
    ------
    MaterialLookupError
        If ``name`` is not in the bundled data file.
    """
    return default_library()[name]
