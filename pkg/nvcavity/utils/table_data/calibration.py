"""Calibration of the table's two scaling laws and row-by-row comparison.

The table obeys ``g_c = k_g sqrt(p_m)`` and ``C = k_c g_c^2 Q0``. Both
constants are fitted to one reference row; every other row is then
predicted from its own ``p_m`` and, for ``C``, its tabulated ``g_c`` and
``Q0``.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import pandas as pd

from ...base import DomainError
from ...spins import (
    CALIBRATED,
    CouplingReport,
    SpinEnsemble,
    calibrated_cooperativity,
    calibrated_coupling,
    coupling_report,
    effective_linewidth,
)
from .table1_data import TableRow

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE = "double-split TE"
DEFAULT_G_TOLERANCE_MHZ = 1.0
DEFAULT_C_TOLERANCE = 0.025
# frequency all tabulated designs are tuned to
TABLE_FREQUENCY_HZ = 2.87e9


def find_row(rows: List[TableRow], label: str) -> TableRow:
    for row in rows:
        if row.mode_label == label:
            return row
    raise DomainError(
        "no row {!r}; rows are {}.".format(
            label, ", ".join(repr(row.mode_label) for row in rows)
        )
    )


def calibrate_table_constants(
    rows: List[TableRow], reference: str = DEFAULT_REFERENCE
) -> Tuple[float, float]:
    """``k_g`` (MHz) and ``k_c`` (MHz^-2) fitted to the ``reference`` row."""
    row = find_row(rows, reference)
    if not (row.p_m > 0 and row.q0 > 0):
        raise DomainError("reference row needs p_m > 0 and q0 > 0.")
    k_g = row.g_c_mhz / np.sqrt(row.p_m)
    k_c = row.c_factor / (row.g_c_mhz ** 2 * row.q0)
    return float(k_g), float(k_c)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Predicted against tabulated ``g_c`` and ``C`` for every row.

    ``rows`` holds one record per table row, the reference included.
    """

    reference: str
    k_g: float
    k_c: float
    g_tolerance_mhz: float
    c_tolerance: float
    effective_linewidth_hz: float
    rows: pd.DataFrame

    @property
    def passed(self) -> bool:
        return bool(self.rows["passed"].all())

    @property
    def failures(self) -> List[str]:
        return list(self.rows.loc[~self.rows["passed"], "mode_label"])


def compare_table(
    rows: List[TableRow],
    reference: str = DEFAULT_REFERENCE,
    g_tolerance_mhz: float = DEFAULT_G_TOLERANCE_MHZ,
    c_tolerance: float = DEFAULT_C_TOLERANCE,
) -> ComparisonReport:
    """Calibrate on ``reference`` and predict every row.

    Parameters
    ----------
    rows : List[TableRow]
        The table.
    reference : str, optional
        Label of the calibration row.
    g_tolerance_mhz : float, optional
        Allowed ``|g_c prediction - g_c table|`` in MHz, by default 1.
    c_tolerance : float, optional
        Allowed relative cooperativity error, by default 0.025.
    """
    if g_tolerance_mhz < 0 or c_tolerance < 0:
        raise DomainError("tolerances must be >= 0.")
    k_g, k_c = calibrate_table_constants(rows, reference)
    records = []
    for row in rows:
        is_reference = row.mode_label == reference
        if is_reference:
            g_pred = row.g_c_mhz
            c_pred = row.c_factor
        else:
            g_pred = calibrated_coupling(row.p_m, k_g)
            c_pred = calibrated_cooperativity(row.g_c_mhz, row.q0, k_c)
        g_error = abs(g_pred - row.g_c_mhz)
        c_error = abs(c_pred - row.c_factor) / row.c_factor
        g_pass = g_error <= g_tolerance_mhz
        c_pass = c_error <= c_tolerance
        records.append(
            {
                "mode_label": row.mode_label,
                "reference": is_reference,
                "p_m": row.p_m,
                "q0": row.q0,
                "g_c_table_mhz": row.g_c_mhz,
                "g_c_pred_mhz": g_pred,
                "g_c_abs_error_mhz": g_error,
                "c_table": row.c_factor,
                "c_pred": c_pred,
                "c_rel_error": c_error,
                "g_c_pass": g_pass,
                "c_pass": c_pass,
                "passed": g_pass and c_pass,
            }
        )
    report = ComparisonReport(
        reference=reference,
        k_g=k_g,
        k_c=k_c,
        g_tolerance_mhz=g_tolerance_mhz,
        c_tolerance=c_tolerance,
        effective_linewidth_hz=effective_linewidth(k_c, TABLE_FREQUENCY_HZ),
        rows=pd.DataFrame.from_records(
            records,
            columns=[
                "mode_label",
                "reference",
                "p_m",
                "q0",
                "g_c_table_mhz",
                "g_c_pred_mhz",
                "g_c_abs_error_mhz",
                "c_table",
                "c_pred",
                "c_rel_error",
                "g_c_pass",
                "c_pass",
                "passed",
            ],
        ),
    )
    logger.info(
        "table comparison against %r: %d rows, %d failures",
        reference,
        len(rows),
        len(report.failures),
    )
    return report


def table_row_report(
    row: TableRow,
    ensemble: SpinEnsemble,
    k_g: float,
    k_c: float,
    frequency: float = TABLE_FREQUENCY_HZ,
) -> CouplingReport:
    """Calibrated coupling report for a tabulated design."""
    return coupling_report(
        ensemble,
        p_m=row.p_m,
        q0=row.q0,
        frequency=frequency,
        pathway=CALIBRATED,
        k_g=k_g,
        k_c=k_c,
    )
