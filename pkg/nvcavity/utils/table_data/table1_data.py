import os
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ...base import SpecParseError
from .loader_base import DataLoaderBase

DEFAULT_TABLE1_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "data",
    "table1.csv",
)

TABLE1_COLUMNS = [
    "mode_label",
    "p_m_e3",
    "p_e_e3",
    "q0",
    "g_c_mhz",
    "volume_cm3",
    "c_factor",
]


@dataclass(frozen=True)
class TableRow:
    """One tabulated cavity design.

    Filling factors are stored as printed, i.e. multiplied by 10^3.
    """

    mode_label: str
    p_m_e3: float
    p_e_e3: float
    q0: float
    g_c_mhz: float
    volume_cm3: float
    c_factor: float

    @property
    def p_m(self) -> float:
        return self.p_m_e3 * 1e-3

    @property
    def p_e(self) -> float:
        return self.p_e_e3 * 1e-3


class Table1DataManager(DataLoaderBase):
    """The data manager for the bundled cavity-comparison table."""

    @property
    def DEFAULT_PATH(self) -> str:
        return DEFAULT_TABLE1_PATH

    @property
    def COLUMNS(self) -> List[str]:
        return TABLE1_COLUMNS

    def load_rows(self) -> List[TableRow]:
        """Load and validate every row.

        Raises
        ------
        SpecParseError
            On a missing or non-positive value, or a repeated label.
        """
        df = self.load_frame()
        header_line = self._header_line() or 0
        rows: List[TableRow] = []
        seen = set()
        for index, record in enumerate(df.to_dict(orient="records")):
            line = header_line + 1 + index
            label = str(record["mode_label"]).strip()
            if label in seen:
                raise SpecParseError(
                    "duplicate row {!r}.".format(label),
                    key="mode_label",
                    line=line,
                    path=self.path,
                )
            seen.add(label)
            values = {}
            for column in TABLE1_COLUMNS[1:]:
                try:
                    value = float(record[column])
                except (TypeError, ValueError):
                    value = np.nan
                if not (np.isfinite(value) and value > 0):
                    raise SpecParseError(
                        "value must be a number > 0, got {!r}.".format(record[column]),
                        key=column,
                        line=line,
                        path=self.path,
                    )
                values[column] = value
            rows.append(TableRow(mode_label=label, **values))
        return rows


def load_table1(path: Optional[str] = None) -> List[TableRow]:
    return Table1DataManager(path).load_rows()
