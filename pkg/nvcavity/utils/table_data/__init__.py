from .calibration import (
    ComparisonReport,
    calibrate_table_constants,
    compare_table,
    find_row,
    table_row_report,
)
from .table1_data import Table1DataManager, TableRow, load_table1

__all__ = [
    "TableRow",
    "Table1DataManager",
    "load_table1",
    "ComparisonReport",
    "calibrate_table_constants",
    "compare_table",
    "find_row",
    "table_row_report",
]
