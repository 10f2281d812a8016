"""Tables, text reports and whole-file atomic writes for the command line."""
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from .observables import FillingFactors, QBudget
from .solvers.base import ModeResult
from .spectra import DispersionTrace, SpectrumTrace
from .spins import CouplingReport

logger = logging.getLogger(__name__)

UNAVAILABLE = "n/a"

DISPERSION_COLUMNS = ["b_tesla", "delta_rad_s", "omega_rad_s", "halfwidth_rad_s"]
SPECTRA_COLUMNS = ["b_tesla", "omega_rad_s", "s11_sq"]


def atomic_write_text(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as ofs:
            ofs.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info("wrote %s", path)


def frame_to_csv(df: pd.DataFrame) -> str:
    text = df.to_csv(index=False, na_rep=UNAVAILABLE, float_format="%.10g")
    text = text.replace("\r\n", "\n")
    if not text.endswith("\n"):
        text += "\n"
    return text


def write_frame(df: pd.DataFrame, path: str) -> None:
    atomic_write_text(path, frame_to_csv(df))


def write_manifest(path: str, parameters: Dict[str, Any]) -> None:
    """``key = value`` lines, one per resolved parameter."""
    from . import __version__

    lines = ["tool_version = {}".format(__version__)]
    for key, value in parameters.items():
        lines.append("{} = {}".format(key, value))
    atomic_write_text(path, "\n".join(lines) + "\n")


def mode_frame(
    modes: List[ModeResult],
    budgets: List[Optional[QBudget]],
    factors: List[Optional[FillingFactors]],
) -> pd.DataFrame:
    """One row per mode; field-dependent columns are NaN for field-less modes."""
    labels: List[str] = []
    for item in factors:
        if item is not None:
            for label in item.labels:
                if label not in labels:
                    labels.append(label)
    records = []
    for mode, budget, factor in zip(modes, budgets, factors):
        record: Dict[str, Any] = {
            "mode_id": mode.mode_id,
            "frequency_hz": mode.frequency,
            "omega_rad_s": mode.omega,
            "w_e_j": mode.w_e,
            "w_m_j": mode.w_m,
            "mode_volume_cm3": None
            if mode.mode_volume is None
            else mode.mode_volume * 1e6,
            "gf_ohm": None if budget is None else budget.gf,
            "q_met": None if budget is None else budget.q_met,
            "q0": None if budget is None else budget.q0,
            "kappa_c_rad_s": None if budget is None else budget.kappa_c,
        }
        for label in labels:
            record["p_m_" + label] = None if factor is None else factor.p_m.get(label)
            record["p_e_" + label] = None if factor is None else factor.p_e.get(label)
            q_diel = None if budget is None else budget.q_diel.get(label)
            record["q_diel_" + label] = q_diel
        records.append(record)
    return pd.DataFrame.from_records(records)


def _fmt(value: Any, spec: str = "{:.6g}") -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return UNAVAILABLE
    return spec.format(value)


def format_mode_report(
    modes: List[ModeResult],
    budgets: List[Optional[QBudget]],
    factors: List[Optional[FillingFactors]],
) -> str:
    lines = []
    for mode, budget, factor in zip(modes, budgets, factors):
        lines.append("mode {}".format(mode.mode_id))
        frequency = _fmt(mode.frequency / 1e9, "{:.6f}")
        lines.append("  frequency       {} GHz".format(frequency))
        volume = None if mode.mode_volume is None else mode.mode_volume * 1e6
        lines.append("  mode volume     {} cm^3".format(_fmt(volume)))
        if factor is None or budget is None:
            lines.append("  filling factors {}".format(UNAVAILABLE))
            lines.append("  Q budget        {} (no field solution)".format(UNAVAILABLE))
            continue
        for label in factor.labels:
            lines.append(
                "  {:<15} p_m={:.6g} p_e={:.6g}".format(
                    label, factor.p_m[label], factor.p_e[label]
                )
            )
        lines.append("  GF              {} Ohm".format(_fmt(budget.gf)))
        for channel, q in budget.channels.items():
            name = "Q[{}]".format(channel)
            lines.append("  {:<15} {}".format(name, _fmt(q)))
        lines.append("  Q0              {}".format(_fmt(budget.q0)))
        lines.append(
            "  kappa_c/2pi     {} kHz".format(_fmt(budget.kappa_c / (2 * np.pi) / 1e3))
        )
    return "\n".join(lines) + "\n"


def coupling_frame(reports: List[CouplingReport]) -> pd.DataFrame:
    return pd.DataFrame.from_records([report.to_dict() for report in reports])


def format_coupling_report(reports: List[CouplingReport]) -> str:
    lines = []
    for report in reports:
        lines.append("pathway {}".format(report.pathway))
        lines.append("  p_m             {:.6g}".format(report.p_m))
        lines.append("  Q0              {:.6g}".format(report.q0))
        lines.append("  frequency       {:.6f} GHz".format(report.frequency / 1e9))
        lines.append("  g_c/2pi         {:.6g} MHz".format(report.g_c_mhz))
        lines.append("  g_s/2pi         {} Hz".format(_fmt(report.g_s_hz)))
        lines.append("  N               {:.6g}".format(report.n_spins))
        lines.append(
            "  kappa_c/2pi     {:.6g} kHz".format(report.kappa_c / (2 * np.pi) / 1e3)
        )
        lines.append(
            "  gamma_s/2pi     {:.6g} MHz".format(report.gamma_s / (2 * np.pi) / 1e6)
        )
        lines.append("  C               {:.6g}".format(report.cooperativity))
        lines.append("  regime          {}".format(report.regime))
    if len({report.pathway for report in reports}) > 1:
        lines.append(
            "note: exact-si evaluates the coupling formula with the given density; "
            "calibrated rescales the reference table row. They differ by a "
            "constant factor."
        )
    lines.append("note: detuning uses delta = m0 (B - B_r) / hbar.")
    return "\n".join(lines) + "\n"


def dispersion_frame(trace: DispersionTrace) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "b_tesla": trace.b_field,
            "delta_rad_s": trace.delta,
            "omega_rad_s": trace.dressed_freq,
            "halfwidth_rad_s": trace.dressed_halfwidth,
        },
        columns=DISPERSION_COLUMNS,
    )


def spectra_frame(b_field: np.ndarray, spectra: List[SpectrumTrace]) -> pd.DataFrame:
    """Spectra stacked in blocks of one DC field each."""
    frames = [
        pd.DataFrame(
            {
                "b_tesla": np.full(trace.freq.shape[0], b),
                "omega_rad_s": trace.freq,
                "s11_sq": trace.s11_sq,
            },
            columns=SPECTRA_COLUMNS,
        )
        for b, trace in zip(b_field, spectra)
    ]
    if not frames:
        return pd.DataFrame(columns=SPECTRA_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def format_comparison(df: pd.DataFrame, header: List[str]) -> str:
    lines = list(header)
    lines.append(
        "{:<24}{:>10}{:>10}{:>9}{:>10}{:>10}{:>9}  {}".format(
            "row", "g_c tab", "g_c pred", "|dg|", "C tab", "C pred", "rel", "status"
        )
    )
    for record in df.to_dict(orient="records"):
        status = "reference" if record["reference"] else (
            "pass" if record["passed"] else "FAIL"
        )
        lines.append(
            "{:<24}{:>10.4g}{:>10.4g}{:>9.3f}{:>10.4g}{:>10.4g}{:>9.4f}  {}".format(
                record["mode_label"],
                record["g_c_table_mhz"],
                record["g_c_pred_mhz"],
                record["g_c_abs_error_mhz"],
                record["c_table"],
                record["c_pred"],
                record["c_rel_error"],
                status,
            )
        )
    return "\n".join(lines) + "\n"
