from stringqfi.optimize.grid import DEFAULT_AXES, VARIABLES, ScanAxis, ScanGrid
from stringqfi.optimize.maximize import MaxResult, maximize
from stringqfi.optimize.scan import SCAN_COLUMNS, ScanResult, scan

__all__ = [
    "DEFAULT_AXES",
    "VARIABLES",
    "ScanAxis",
    "ScanGrid",
    "ScanResult",
    "SCAN_COLUMNS",
    "MaxResult",
    "scan",
    "maximize",
]
