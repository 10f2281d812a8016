"""The YAML cavity-spec file.

A spec is a mapping with the sections ``geometry``, ``regions``, ``mesh``,
``solver`` and the optional ``tuning``, ``ensemble``, ``coupling`` and
``spectroscopy``. Lengths are in m, frequencies in Hz, densities in m^-3 and
fields in T. Unknown keys are rejected; every error names the dotted key and
its line.
"""
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml

from .base import CavityError, DomainError, SpecParseError
from .geometry import (
    AxisymmetricGeometry,
    CavityGeometry,
    CylindricalGeometry,
    RectangularGeometry,
    ReentrantGeometry,
    Region,
)
from .materials import MaterialLibrary, default_library
from .spins import EXACT_SI, PATHWAYS, SpinEnsemble

SPECS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "specs")

GEOMETRY_KEYS = {
    "rectangular": ("a", "b", "d"),
    "cylindrical": ("radius", "height"),
    "axisymmetric": ("outer_radius", "height"),
    "reentrant": ("cavity_radius", "cavity_height", "post_radius", "gap"),
}
SECTIONS = (
    "geometry",
    "regions",
    "mesh",
    "solver",
    "tuning",
    "ensemble",
    "coupling",
    "spectroscopy",
)
REGION_KEYS = ("label", "material", "r_min", "r_max", "z_min", "z_max")
LINEWIDTH_KEYS = ("gamma_s_over_2pi", "linewidth_fwhm_hz", "t2_star")
ENSEMBLE_KEYS = ("rho",) + LINEWIDTH_KEYS + (
    "g_factor",
    "d_over_h",
    "sample",
    "sample_volume",
)

DEFAULT_WALL = "copper"
DEFAULT_REFERENCE_ROW = "double-split TE"


def shipped_spec_path(name: str) -> str:
    """Path of a spec shipped with the package, e.g. ``double_split``."""
    path = os.path.join(SPECS_DIR, "{}.yaml".format(name))
    if not os.path.exists(path):
        available = sorted(
            f[:-5] for f in os.listdir(SPECS_DIR) if f.endswith(".yaml")
        )
        raise DomainError(
            "no shipped spec {!r}; available: {}.".format(name, ", ".join(available))
        )
    return path


@dataclass(frozen=True)
class TuningSettings:
    parameter: str
    target_hz: float
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class EnsembleSettings:
    """Ensemble section as written; exactly one linewidth key is set."""

    rho: float
    gamma_s_over_2pi: Optional[float] = None
    linewidth_fwhm_hz: Optional[float] = None
    t2_star: Optional[float] = None
    g_factor: Optional[float] = None
    d_over_h: Optional[float] = None
    sample: Optional[str] = None
    sample_volume: Optional[float] = None

    def build(self, geometry: Optional[CavityGeometry] = None) -> SpinEnsemble:
        """Resolve into a :class:`SpinEnsemble`.

        The sample volume is the volume of the ``sample`` region of an
        axisymmetric ``geometry`` unless ``sample_volume`` is given.
        """
        kwargs: Dict[str, Any] = {}
        if self.g_factor is not None:
            kwargs["g_factor"] = self.g_factor
        if self.d_over_h is not None:
            kwargs["d_over_h"] = self.d_over_h
        if self.sample_volume is not None:
            kwargs["sample_volume"] = self.sample_volume
        elif self.sample is not None and isinstance(geometry, AxisymmetricGeometry):
            kwargs["sample_volume"] = geometry.label_volume(self.sample)
        if self.linewidth_fwhm_hz is not None:
            return SpinEnsemble.from_fwhm(self.linewidth_fwhm_hz, self.rho, **kwargs)
        if self.t2_star is not None:
            return SpinEnsemble.from_t2_star(self.t2_star, self.rho, **kwargs)
        assert self.gamma_s_over_2pi is not None
        return SpinEnsemble(
            rho=self.rho, gamma_s=2 * np.pi * self.gamma_s_over_2pi, **kwargs
        )


@dataclass(frozen=True)
class CouplingSettings:
    pathway: str = EXACT_SI
    alpha: float = 1.0
    reference: str = DEFAULT_REFERENCE_ROW


@dataclass(frozen=True)
class SpectroscopySettings:
    b_start: float
    b_stop: float
    b_steps: int
    b_r: float
    n_points: Optional[int] = None


@dataclass(frozen=True)
class CavitySpec:
    geometry: CavityGeometry
    window: Tuple[float, float]
    n_modes: int = 1
    target_cell: Optional[float] = None
    tuning: Optional[TuningSettings] = None
    ensemble: Optional[EnsembleSettings] = None
    coupling: CouplingSettings = field(default_factory=CouplingSettings)
    spectroscopy: Optional[SpectroscopySettings] = None
    path: Optional[str] = field(default=None, compare=False)

    @property
    def variant(self) -> str:
        return self.geometry.variant

    def spin_ensemble(self) -> Optional[SpinEnsemble]:
        if self.ensemble is None:
            return None
        return self.ensemble.build(self.geometry)


def _line_map(node: yaml.Node, prefix: str, lines: Dict[str, int]) -> None:
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            key = str(key_node.value)
            if prefix:
                key = "{}.{}".format(prefix, key)
            lines[key] = key_node.start_mark.line + 1
            _line_map(value_node, key, lines)
    elif isinstance(node, yaml.SequenceNode):
        for index, item in enumerate(node.value):
            key = "{}[{}]".format(prefix, index)
            lines[key] = item.start_mark.line + 1
            _line_map(item, key, lines)


class _Reader:
    """Typed access to the loaded document with located errors."""

    def __init__(self, lines: Dict[str, int], path: Optional[str]):
        self.lines = lines
        self.path = path

    def error(self, message: str, key: str) -> SpecParseError:
        line = self.lines.get(key)
        probe = key
        while line is None and ("." in probe or "[" in probe):
            probe = probe[: max(probe.rfind("."), probe.rfind("["))]
            line = self.lines.get(probe)
        return SpecParseError(message, key=key, line=line, path=self.path)

    def section(
        self, doc: Dict[str, Any], name: str, allowed: Tuple[str, ...]
    ) -> Dict[str, Any]:
        value = doc.get(name)
        if value is None:
            return {}
        return self.mapping(value, name, allowed)

    def mapping(self, value: Any, key: str, allowed: Tuple[str, ...]) -> Dict[str, Any]:
        if not isinstance(value, dict):
            raise self.error("must be a mapping.", key)
        for name in value:
            if name not in allowed:
                raise self.error(
                    "unknown key; allowed keys are {}.".format(", ".join(allowed)),
                    "{}.{}".format(key, name),
                )
        return value

    def number(
        self,
        data: Dict[str, Any],
        section: str,
        name: str,
        positive: bool = True,
        required: bool = True,
    ) -> Optional[float]:
        key = "{}.{}".format(section, name)
        if name not in data or data[name] is None:
            if required:
                raise self.error("missing required key.", key)
            return None
        raw = data[name]
        if isinstance(raw, bool):
            raise self.error("must be a number, got {!r}.".format(raw), key)
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise self.error("must be a number, got {!r}.".format(raw), key)
        if positive and not value > 0:
            raise self.error("must be > 0, got {!r}.".format(raw), key)
        return value

    def value(
        self, data: Dict[str, Any], section: str, name: str, positive: bool = True
    ) -> float:
        value = self.number(data, section, name, positive=positive)
        assert value is not None
        return value

    def integer(
        self,
        data: Dict[str, Any],
        section: str,
        name: str,
        default: Optional[int] = None,
    ) -> int:
        key = "{}.{}".format(section, name)
        raw = data.get(name, default)
        if raw is None:
            raise self.error("missing required key.", key)
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise self.error("must be an integer, got {!r}.".format(raw), key)
        if raw < 1:
            raise self.error("must be >= 1, got {!r}.".format(raw), key)
        return raw

    def text(
        self,
        data: Dict[str, Any],
        section: str,
        name: str,
        default: Optional[str] = None,
    ) -> str:
        key = "{}.{}".format(section, name)
        raw = data.get(name, default)
        if raw is None:
            raise self.error("missing required key.", key)
        if not isinstance(raw, str):
            raise self.error("must be a string, got {!r}.".format(raw), key)
        return raw

    def pair(
        self, data: Dict[str, Any], section: str, name: str
    ) -> Tuple[float, float]:
        key = "{}.{}".format(section, name)
        raw = data.get(name)
        if raw is None:
            raise self.error("missing required key.", key)
        if not isinstance(raw, list) or len(raw) != 2:
            raise self.error("must be a list [low, high].", key)
        low = self.value({name: raw[0]}, section, name, positive=False)
        high = self.value({name: raw[1]}, section, name, positive=False)
        if not 0 <= low < high:
            raise self.error("must satisfy 0 <= low < high, got {!r}.".format(raw), key)
        return low, high


def _parse_geometry(
    doc: Dict[str, Any], reader: _Reader, library: MaterialLibrary
) -> CavityGeometry:
    if "geometry" not in doc:
        raise reader.error("missing required section.", "geometry")
    raw = doc["geometry"]
    if not isinstance(raw, dict):
        raise reader.error("must be a mapping.", "geometry")
    variant = reader.text(raw, "geometry", "variant")
    if variant not in GEOMETRY_KEYS:
        raise reader.error(
            "variant must be one of {}.".format(", ".join(GEOMETRY_KEYS)),
            "geometry.variant",
        )
    dims = GEOMETRY_KEYS[variant]
    data = reader.mapping(raw, "geometry", ("variant", "wall") + dims)
    values = {name: reader.value(data, "geometry", name) for name in dims}
    wall_name = reader.text(data, "geometry", "wall", DEFAULT_WALL)
    try:
        wall = library[wall_name]
    except CavityError as exc:
        raise reader.error(str(exc), "geometry.wall")

    regions = doc.get("regions") or []
    if not isinstance(regions, list):
        raise reader.error("must be a list.", "regions")
    if regions and variant != "axisymmetric":
        raise reader.error("only axisymmetric geometries carry regions.", "regions")

    try:
        if variant == "rectangular":
            return RectangularGeometry(wall_material=wall, **values)  # type: ignore
        if variant == "cylindrical":
            return CylindricalGeometry(wall_material=wall, **values)  # type: ignore
        if variant == "reentrant":
            return ReentrantGeometry(wall_material=wall, **values)  # type: ignore
    except DomainError as exc:
        raise reader.error(str(exc), "geometry")

    parsed: List[Region] = []
    for index, item in enumerate(regions):
        key = "regions[{}]".format(index)
        entry = reader.mapping(item, key, REGION_KEYS)
        label = reader.text(entry, key, "label")
        material_name = reader.text(entry, key, "material")
        try:
            material = library[material_name]
        except CavityError as exc:
            raise reader.error(str(exc), "{}.material".format(key))
        bounds = {
            name: reader.value(entry, key, name, positive=False)
            for name in ("r_min", "r_max", "z_min", "z_max")
        }
        try:
            parsed.append(Region(material=material, label=label, **bounds))
        except DomainError as exc:
            raise reader.error(str(exc), key)
    try:
        return AxisymmetricGeometry(  # type: ignore
            wall_material=wall, regions=tuple(parsed), **values
        )
    except DomainError as exc:
        raise reader.error(str(exc), "regions" if parsed else "geometry")


def _parse_ensemble(
    doc: Dict[str, Any], reader: _Reader, geometry: CavityGeometry
) -> Optional[EnsembleSettings]:
    if doc.get("ensemble") is None:
        return None
    data = reader.section(doc, "ensemble", ENSEMBLE_KEYS)
    given = [name for name in LINEWIDTH_KEYS if data.get(name) is not None]
    if len(given) != 1:
        raise reader.error(
            "exactly one of {} is required.".format(", ".join(LINEWIDTH_KEYS)),
            "ensemble",
        )
    sample = data.get("sample")
    if sample is not None:
        sample = reader.text(data, "ensemble", "sample")
        if isinstance(geometry, AxisymmetricGeometry) and sample not in geometry.labels:
            raise reader.error(
                "unknown region label; labels are {}.".format(
                    ", ".join(geometry.labels)
                ),
                "ensemble.sample",
            )
    settings = EnsembleSettings(
        rho=reader.value(data, "ensemble", "rho"),
        gamma_s_over_2pi=reader.number(
            data, "ensemble", "gamma_s_over_2pi", required=False
        ),
        linewidth_fwhm_hz=reader.number(
            data, "ensemble", "linewidth_fwhm_hz", required=False
        ),
        t2_star=reader.number(data, "ensemble", "t2_star", required=False),
        g_factor=reader.number(data, "ensemble", "g_factor", required=False),
        d_over_h=reader.number(data, "ensemble", "d_over_h", required=False),
        sample=sample,
        sample_volume=reader.number(
            data, "ensemble", "sample_volume", positive=False, required=False
        ),
    )
    try:
        settings.build(geometry)
    except DomainError as exc:
        raise reader.error(str(exc), "ensemble")
    return settings


def parse_spec_text(text: str, path: Optional[str] = None) -> CavitySpec:
    """Parse and validate a spec held in memory."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise SpecParseError(
            "invalid YAML: {}".format(getattr(exc, "problem", exc)),
            line=None if mark is None else mark.line + 1,
            path=path,
        )
    lines: Dict[str, int] = {}
    if root is not None:
        _line_map(root, "", lines)
    reader = _Reader(lines, path)
    if not isinstance(doc, dict):
        raise SpecParseError("a spec must be a mapping of sections.", path=path)
    for name in doc:
        if name not in SECTIONS:
            raise reader.error(
                "unknown section; sections are {}.".format(", ".join(SECTIONS)),
                str(name),
            )

    library = default_library()
    geometry = _parse_geometry(doc, reader, library)

    mesh = reader.section(doc, "mesh", ("target_cell",))
    target_cell = reader.number(mesh, "mesh", "target_cell", required=False)
    if isinstance(geometry, AxisymmetricGeometry) and target_cell is None:
        raise reader.error("missing required key.", "mesh.target_cell")

    if doc.get("solver") is None:
        raise reader.error("missing required section.", "solver")
    solver = reader.section(doc, "solver", ("window", "n_modes"))
    window = reader.pair(solver, "solver", "window")
    n_modes = reader.integer(solver, "solver", "n_modes", default=1)

    tuning = None
    if doc.get("tuning") is not None:
        if not isinstance(geometry, AxisymmetricGeometry):
            raise reader.error("only axisymmetric designs can be tuned.", "tuning")
        data = reader.section(doc, "tuning", ("parameter", "target_hz", "bracket"))
        parameter = reader.text(data, "tuning", "parameter")
        if parameter not in ("outer_radius", "height"):
            raise reader.error("must be outer_radius or height.", "tuning.parameter")
        tuning = TuningSettings(
            parameter=parameter,
            target_hz=reader.value(data, "tuning", "target_hz"),
            bracket=reader.pair(data, "tuning", "bracket"),
        )

    ensemble = _parse_ensemble(doc, reader, geometry)

    data = reader.section(doc, "coupling", ("pathway", "alpha", "reference"))
    pathway = reader.text(data, "coupling", "pathway", EXACT_SI)
    if pathway not in PATHWAYS:
        raise reader.error(
            "must be one of {}.".format(", ".join(PATHWAYS)), "coupling.pathway"
        )
    alpha = reader.number(data, "coupling", "alpha", positive=False, required=False)
    if alpha is not None and alpha < 0:
        raise reader.error("must be >= 0.", "coupling.alpha")
    coupling = CouplingSettings(
        pathway=pathway,
        alpha=1.0 if alpha is None else alpha,
        reference=reader.text(data, "coupling", "reference", DEFAULT_REFERENCE_ROW),
    )

    spectroscopy = None
    if doc.get("spectroscopy") is not None:
        data = reader.section(
            doc, "spectroscopy", ("b_start", "b_stop", "b_steps", "b_r", "n_points")
        )
        n_points = None
        if data.get("n_points") is not None:
            n_points = reader.integer(data, "spectroscopy", "n_points")
        spectroscopy = SpectroscopySettings(
            b_start=reader.value(data, "spectroscopy", "b_start", positive=False),
            b_stop=reader.value(data, "spectroscopy", "b_stop", positive=False),
            b_steps=reader.integer(data, "spectroscopy", "b_steps"),
            b_r=reader.value(data, "spectroscopy", "b_r", positive=False),
            n_points=n_points,
        )

    return CavitySpec(
        geometry=geometry,
        window=window,
        n_modes=n_modes,
        target_cell=target_cell,
        tuning=tuning,
        ensemble=ensemble,
        coupling=coupling,
        spectroscopy=spectroscopy,
        path=path,
    )


def parse_spec(path: str) -> CavitySpec:
    """Read and validate a spec file.

    Raises
    ------
    SpecParseError
        On an unreadable file or any validation failure.
    """
    try:
        with open(path, encoding="utf-8") as ifs:
            text = ifs.read()
    except OSError as exc:
        raise SpecParseError("cannot read spec: {}".format(exc.strerror), path=path)
    return parse_spec_text(text, path=path)


def _drop_none(data: Dict[str, Any]) -> Dict[str, Any]:
    return {key: value for key, value in data.items() if value is not None}


def spec_to_dict(spec: CavitySpec) -> Dict[str, Any]:
    """Plain-data form of a spec, the inverse of :func:`parse_spec_text`."""
    geometry = spec.geometry
    data: Dict[str, Any] = {}
    section: Dict[str, Any] = {"variant": geometry.variant}
    for name in GEOMETRY_KEYS[geometry.variant]:
        section[name] = getattr(geometry, name)
    section["wall"] = geometry.wall_material.name  # type: ignore
    data["geometry"] = section
    if isinstance(geometry, AxisymmetricGeometry):
        data["regions"] = [
            {
                "label": region.label,
                "material": region.material.name,
                "r_min": region.r_min,
                "r_max": region.r_max,
                "z_min": region.z_min,
                "z_max": region.z_max,
            }
            for region in geometry.regions
        ]
    if spec.target_cell is not None:
        data["mesh"] = {"target_cell": spec.target_cell}
    data["solver"] = {"window": list(spec.window), "n_modes": spec.n_modes}
    if spec.tuning is not None:
        data["tuning"] = {
            "parameter": spec.tuning.parameter,
            "target_hz": spec.tuning.target_hz,
            "bracket": list(spec.tuning.bracket),
        }
    if spec.ensemble is not None:
        settings = spec.ensemble
        data["ensemble"] = _drop_none(
            {name: getattr(settings, name) for name in ENSEMBLE_KEYS}
        )
    data["coupling"] = {
        "pathway": spec.coupling.pathway,
        "alpha": spec.coupling.alpha,
        "reference": spec.coupling.reference,
    }
    if spec.spectroscopy is not None:
        s = spec.spectroscopy
        data["spectroscopy"] = _drop_none(
            {
                "b_start": s.b_start,
                "b_stop": s.b_stop,
                "b_steps": s.b_steps,
                "b_r": s.b_r,
                "n_points": s.n_points,
            }
        )
    return data


def serialize_spec(spec: CavitySpec) -> str:
    return yaml.safe_dump(spec_to_dict(spec), sort_keys=False)

