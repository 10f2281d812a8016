"""The ``nvcavity`` command line.

Verbs::

    nvcavity solve    --spec double_split
    nvcavity report   --spec double_split [--row LABEL | --p-m P --q0 Q --frequency NU]
    nvcavity sweep    --spec double_split [--b-start B0 --b-stop B1 --b-steps N]
    nvcavity table1   [--dataset PATH] [--reference LABEL] [--g-tol MHZ] [--c-tol REL]
    nvcavity materials

``--spec`` takes a path or the name of a shipped spec. Exit status is 0 on
success, 1 when no mode lies in the window or a table row fails, and 2 on
any library error.
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import reporting
from .base import CavityError, UsageError
from .geometry import (
    AxisymmetricGeometry,
    CylindricalGeometry,
    RectangularGeometry,
    ReentrantGeometry,
    build_mesh,
)
from .materials import default_library
from .observables import FillingFactors, QBudget, filling_factors, q_budget
from .solvers import (
    AnalyticModeSolver,
    AxisymmetricTE0Solver,
    ModeResult,
    ModeSolverBase,
    ReentrantLumpedSolver,
)
from .spec_file import CavitySpec, parse_spec, shipped_spec_path, spec_to_dict
from .spectra import (
    DEFAULT_GRID_POINTS,
    SpectroscopyParams,
    default_grid,
    field_sweep,
)
from .spins import (
    CALIBRATED,
    EXACT_SI,
    PATHWAYS,
    CouplingReport,
    SpinEnsemble,
    coupling_report,
    zeeman_slope,
)
from .tuning import tune_geometry
from .utils.table_data import compare_table, load_table1
from .utils.table_data.calibration import (
    DEFAULT_C_TOLERANCE,
    DEFAULT_G_TOLERANCE_MHZ,
    DEFAULT_REFERENCE,
    TABLE_FREQUENCY_HZ,
    calibrate_table_constants,
    find_row,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

BOTH = "both"
TEXT = "text"
CSV = "csv"

MODES_CSV = "modes.csv"
COUPLING_CSV = "coupling.csv"
DISPERSION_CSV = "dispersion.csv"
SPECTRA_CSV = "spectra.csv"
TABLE1_CSV = "table1_comparison.csv"
MATERIALS_CSV = "materials.csv"
MANIFEST = "manifest.txt"


def _load_spec(value: Optional[str], required: bool = True) -> Optional[CavitySpec]:
    if value is None:
        if required:
            raise UsageError("--spec is required for this command.")
        return None
    if os.path.exists(value) or value.endswith((".yaml", ".yml")) or os.sep in value:
        return parse_spec(value)
    return parse_spec(shipped_spec_path(value))


def _solver_for(spec: CavitySpec) -> ModeSolverBase:
    geometry = spec.geometry
    if isinstance(geometry, AxisymmetricGeometry):
        assert spec.target_cell is not None
        return AxisymmetricTE0Solver(build_mesh(geometry, spec.target_cell))
    if isinstance(geometry, ReentrantGeometry):
        return ReentrantLumpedSolver(geometry)
    assert isinstance(geometry, (RectangularGeometry, CylindricalGeometry))
    return AnalyticModeSolver(geometry)


def solve_spec(
    spec: CavitySpec, progress: bool = True
) -> Tuple[CavitySpec, List[ModeResult]]:
    """Apply the spec's tuning section, then solve its window."""
    if spec.tuning is not None:
        spec, _ = tune_geometry(spec, progress=progress)
    modes = _solver_for(spec).solve(spec.window, spec.n_modes)
    return spec, modes


def _observables(
    mode: ModeResult,
) -> Tuple[Optional[QBudget], Optional[FillingFactors]]:
    if mode.field is None:
        return None, None
    return q_budget(mode), filling_factors(mode.field)


def _manifest(command: str, args: argparse.Namespace, **extra: Any) -> Dict[str, Any]:
    parameters: Dict[str, Any] = {"command": command}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "verbose"):
            continue
        parameters["arg." + key] = value
    parameters.update(extra)
    return parameters


def _spec_parameters(spec: CavitySpec) -> Dict[str, Any]:
    flat = pd.json_normalize(spec_to_dict(spec), sep=".")
    return {"spec." + key: value for key, value in flat.iloc[0].items()}


def _out_path(args: argparse.Namespace, name: str) -> str:
    return os.path.join(args.out, name)


def cmd_solve(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    assert spec is not None
    spec, modes = solve_spec(spec, progress=args.progress)
    if not modes:
        sys.stderr.write(
            "no mode between {:.6g} and {:.6g} Hz.\n".format(*spec.window)
        )
        return EXIT_FAILED
    budgets: List[Optional[QBudget]] = []
    factors: List[Optional[FillingFactors]] = []
    for mode in modes:
        budget, factor = _observables(mode)
        budgets.append(budget)
        factors.append(factor)
    if args.format == TEXT:
        sys.stdout.write(reporting.format_mode_report(modes, budgets, factors))
    else:
        reporting.write_frame(
            reporting.mode_frame(modes, budgets, factors), _out_path(args, MODES_CSV)
        )
        parameters = _manifest("solve", args, **_spec_parameters(spec))
        reporting.write_manifest(_out_path(args, MANIFEST), parameters)
    return EXIT_OK


def _ensemble(args: argparse.Namespace, spec: Optional[CavitySpec]) -> SpinEnsemble:
    if args.rho is not None or args.fwhm is not None:
        if args.rho is None or args.fwhm is None:
            raise UsageError("--rho and --fwhm must be given together.")
        sample_volume = args.sample_volume
        if sample_volume is None and spec is not None:
            from_spec = spec.spin_ensemble()
            sample_volume = 0.0 if from_spec is None else from_spec.sample_volume
        return SpinEnsemble.from_fwhm(
            args.fwhm, args.rho, sample_volume=sample_volume or 0.0
        )
    ensemble = None if spec is None else spec.spin_ensemble()
    if ensemble is None:
        raise UsageError(
            "coupling needs an ensemble section in the spec or --rho and --fwhm."
        )
    return ensemble


def _coupling_inputs(
    args: argparse.Namespace, spec: Optional[CavitySpec]
) -> Tuple[float, float, float, str]:
    """``(p_m, q0, frequency, source)`` from a table row, flags or the spec."""
    explicit = (args.p_m, args.q0, args.frequency)
    if args.row is not None:
        if any(value is not None for value in explicit):
            raise UsageError(
                "--row cannot be combined with --p-m, --q0 or --frequency."
            )
        row = find_row(load_table1(args.dataset), args.row)
        source = "table row {}".format(row.mode_label)
        return row.p_m, row.q0, TABLE_FREQUENCY_HZ, source
    if any(value is not None for value in explicit):
        if any(value is None for value in explicit):
            raise UsageError("--p-m, --q0 and --frequency must be given together.")
        return args.p_m, args.q0, args.frequency, "explicit inputs"
    if spec is None:
        raise UsageError("give --spec, --row or --p-m/--q0/--frequency.")
    if spec.ensemble is None or spec.ensemble.sample is None:
        raise UsageError(
            "the spec names no sample region; give --p-m, --q0 and --frequency."
        )
    spec, modes = solve_spec(spec, progress=args.progress)
    if not modes:
        raise UsageError(
            "no mode between {:.6g} and {:.6g} Hz.".format(*spec.window)
        )
    mode = modes[0]
    budget, factor = _observables(mode)
    if budget is None or factor is None:
        raise UsageError(
            "mode {} has no field; give --p-m, --q0 and --frequency.".format(
                mode.mode_id
            )
        )
    p_m = factor.p_m[spec.ensemble.sample]
    return p_m, budget.q0, mode.frequency, "mode " + mode.mode_id


def _pathways(args: argparse.Namespace, spec: Optional[CavitySpec]) -> List[str]:
    if args.pathway == BOTH:
        return list(PATHWAYS)
    if args.pathway is not None:
        return [args.pathway]
    return [EXACT_SI if spec is None else spec.coupling.pathway]


def _reports(
    args: argparse.Namespace, spec: Optional[CavitySpec]
) -> Tuple[List[CouplingReport], str]:
    ensemble = _ensemble(args, spec)
    p_m, q0, frequency, source = _coupling_inputs(args, spec)
    k_g: Optional[float] = None
    k_c: Optional[float] = None
    pathways = _pathways(args, spec)
    if CALIBRATED in pathways:
        reference = args.reference
        if reference is None:
            reference = DEFAULT_REFERENCE if spec is None else spec.coupling.reference
        k_g, k_c = calibrate_table_constants(load_table1(args.dataset), reference)
    reports = [
        coupling_report(
            ensemble, p_m, q0, frequency, pathway=pathway, k_g=k_g, k_c=k_c
        )
        for pathway in pathways
    ]
    return reports, source


def cmd_report(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec, required=False)
    reports, source = _reports(args, spec)
    if args.format == TEXT:
        sys.stdout.write("inputs from {}\n".format(source))
        if args.p_e is not None:
            sys.stdout.write("  p_e             {:.6g}\n".format(args.p_e))
        sys.stdout.write(reporting.format_coupling_report(reports))
    else:
        reporting.write_frame(
            reporting.coupling_frame(reports), _out_path(args, COUPLING_CSV)
        )
        parameters = _manifest("report", args, source=source)
        if spec is not None:
            parameters.update(_spec_parameters(spec))
        reporting.write_manifest(_out_path(args, MANIFEST), parameters)
    return EXIT_OK


def _resonance_field(ensemble: SpinEnsemble, frequency: float) -> float:
    b_r = (ensemble.d_over_h - frequency) / zeeman_slope(ensemble.g_factor)
    if not b_r >= 0:
        raise UsageError(
            "the lower NV branch never reaches {:.6g} Hz; give --b-r.".format(frequency)
        )
    return b_r


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec, required=False)
    reports, source = _reports(args, spec)
    report = reports[0]
    settings = None if spec is None else spec.spectroscopy

    def pick(flag: Optional[Any], name: str) -> Optional[Any]:
        if flag is not None:
            return flag
        return None if settings is None else getattr(settings, name)

    b_start = pick(args.b_start, "b_start")
    b_stop = pick(args.b_stop, "b_stop")
    b_steps = pick(args.b_steps, "b_steps")
    if b_start is None or b_stop is None or b_steps is None:
        raise UsageError("a sweep needs --b-start, --b-stop and --b-steps.")
    if b_steps < 1:
        raise UsageError("--b-steps must be >= 1, got {}.".format(b_steps))
    b_r = pick(args.b_r, "b_r")
    if b_r is None:
        b_r = _resonance_field(report.ensemble, report.frequency)
    n_points = pick(None, "n_points")

    alpha = 1.0 if spec is None else spec.coupling.alpha
    params = SpectroscopyParams(
        omega_c=2 * np.pi * report.frequency,
        kappa=report.kappa_c,
        g_c=report.g_c,
        gamma=report.gamma_s,
        alpha=alpha,
    )
    freq_grid = default_grid(params, n_points or DEFAULT_GRID_POINTS)
    b_grid = np.linspace(b_start, b_stop, b_steps)
    dispersion, spectra = field_sweep(
        params,
        b_grid,
        b_r,
        report.ensemble.m0,
        freq_grid=freq_grid,
        progress=args.progress,
    )
    reporting.write_frame(
        reporting.dispersion_frame(dispersion), _out_path(args, DISPERSION_CSV)
    )
    reporting.write_frame(
        reporting.spectra_frame(dispersion.b_field, spectra),
        _out_path(args, SPECTRA_CSV),
    )
    parameters = _manifest(
        "sweep",
        args,
        source=source,
        pathway=report.pathway,
        omega_c_rad_s=params.omega_c,
        kappa_rad_s=params.kappa,
        g_c_rad_s=params.g_c,
        gamma_rad_s=params.gamma,
        alpha=params.alpha,
        b_start_tesla=b_start,
        b_stop_tesla=b_stop,
        b_steps=b_steps,
        b_r_tesla=b_r,
        n_points=freq_grid.shape[0],
    )
    if spec is not None:
        parameters.update(_spec_parameters(spec))
    reporting.write_manifest(_out_path(args, MANIFEST), parameters)
    if args.format == TEXT:
        sys.stdout.write(reporting.format_coupling_report([report]))
        sys.stdout.write(
            "swept {} fields from {:.6g} T to {:.6g} T, B_r = {:.6g} T\n".format(
                b_steps, b_start, b_stop, b_r
            )
        )
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    rows = load_table1(args.dataset)
    report = compare_table(
        rows,
        reference=args.reference or DEFAULT_REFERENCE,
        g_tolerance_mhz=args.g_tol,
        c_tolerance=args.c_tol,
    )
    if args.format == TEXT:
        header = [
            "pathway calibrated, reference {!r}".format(report.reference),
            "k_g = {:.6g} MHz, k_c = {:.6g} MHz^-2".format(report.k_g, report.k_c),
            "effective gamma_s/2pi = {:.6g} MHz".format(
                report.effective_linewidth_hz / 1e6
            ),
        ]
        sys.stdout.write(reporting.format_comparison(report.rows, header))
        if not report.passed:
            sys.stdout.write("failed rows: {}\n".format(", ".join(report.failures)))
    else:
        reporting.write_frame(report.rows, _out_path(args, TABLE1_CSV))
        parameters = _manifest(
            "table1",
            args,
            k_g_mhz=report.k_g,
            k_c_per_mhz2=report.k_c,
            effective_linewidth_hz=report.effective_linewidth_hz,
            passed=report.passed,
        )
        reporting.write_manifest(_out_path(args, MANIFEST), parameters)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_materials(args: argparse.Namespace) -> int:
    df = default_library().to_frame()
    if args.format == TEXT:
        sys.stdout.write(df.to_string(index=False, na_rep=reporting.UNAVAILABLE) + "\n")
    else:
        reporting.write_frame(df, _out_path(args, MATERIALS_CSV))
    return EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="spec file path or shipped spec name")
    common.add_argument("--out", default=".", help="output directory for files")
    common.add_argument("--format", choices=(CSV, TEXT), default=TEXT)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument(
        "--no-progress",
        dest="progress",
        action="store_false",
        help="hide progress bars",
    )
    return common


def _add_coupling_flags(
    parser: argparse.ArgumentParser, pathways: Sequence[str]
) -> None:
    parser.add_argument("--row", help="take p_m and Q0 from a bundled table row")
    parser.add_argument("--p-m", dest="p_m", type=float)
    parser.add_argument("--p-e", dest="p_e", type=float)
    parser.add_argument("--q0", type=float)
    parser.add_argument("--frequency", type=float, help="cavity frequency in Hz")
    parser.add_argument("--pathway", choices=pathways)
    parser.add_argument("--rho", type=float, help="spin density in m^-3")
    parser.add_argument("--fwhm", type=float, help="spin linewidth FWHM in Hz")
    parser.add_argument("--sample-volume", dest="sample_volume", type=float)
    parser.add_argument("--dataset", help="table CSV, the bundled one by default")
    parser.add_argument("--reference", help="calibration row label")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="nvcavity",
        description="Design microwave cavities for NV spin ensembles.",
    )
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    solve = sub.add_parser("solve", parents=[common], help="solve the cavity modes")
    solve.set_defaults(func=cmd_solve)

    report = sub.add_parser("report", parents=[common], help="spin coupling report")
    _add_coupling_flags(report, PATHWAYS + (BOTH,))
    report.set_defaults(func=cmd_report, pathway=BOTH)

    sweep = sub.add_parser("sweep", parents=[common], help="DC field sweep")
    _add_coupling_flags(sweep, PATHWAYS)
    sweep.add_argument("--b-start", dest="b_start", type=float)
    sweep.add_argument("--b-stop", dest="b_stop", type=float)
    sweep.add_argument("--b-steps", dest="b_steps", type=int)
    sweep.add_argument("--b-r", dest="b_r", type=float)
    sweep.set_defaults(func=cmd_sweep)

    table1 = sub.add_parser("table1", parents=[common], help="table reproduction")
    table1.add_argument("--dataset")
    table1.add_argument("--reference")
    table1.add_argument(
        "--g-tol", dest="g_tol", type=float, default=DEFAULT_G_TOLERANCE_MHZ
    )
    table1.add_argument(
        "--c-tol", dest="c_tol", type=float, default=DEFAULT_C_TOLERANCE
    )
    table1.set_defaults(func=cmd_table1)

    materials = sub.add_parser("materials", parents=[common], help="material library")
    materials.set_defaults(func=cmd_materials)
    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return int(args.func(args))
    except CavityError as exc:
        sys.stderr.write("error: {}\n".format(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
