from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from stringqfi.core.config import DetectorConfig, ScanConfig
from stringqfi.core.errors import DomainError, StringQfiError, UsageError
from stringqfi.metrology.qfi import QfiResult, qfi_from_response
from stringqfi.optimize.grid import ScanGrid
from stringqfi.response.cache import ResponseValue
from stringqfi.response.evaluator import ResponseEvaluator, default_evaluator

logger = logging.getLogger(__name__)

SCAN_COLUMNS = ["pol", "r_tilde", "nu", "tau", "theta", "fisher", "crlb_single", "error"]


@dataclass
class ScanResult:
    """
    Row-major QFI table over a ScanGrid.

    cells  : one QfiResult per grid cell, None where the cell failed
    errors : cell index -> diagnostic message for the failed cells
    """
    grid: ScanGrid
    cells: list[QfiResult | None]
    errors: dict[int, str] = field(default_factory=dict)
    points: list[dict[str, float]] = field(default_factory=list)

    @property
    def fisher(self) -> np.ndarray:
        """Fisher values shaped like the grid; NaN for failed cells."""
        values = np.array([c.fisher if c is not None else np.nan for c in self.cells], dtype=float)
        return values.reshape(self.grid.shape) if self.grid.axes else values

    def best_index(self) -> int:
        """Flat index of the largest Fisher value (first one on ties)."""
        values = np.array([c.fisher if c is not None else -np.inf for c in self.cells], dtype=float)
        if not np.isfinite(values).any():
            raise DomainError("Every scan cell failed; the scanned region has no evaluable point.")
        return int(np.argmax(values))

    def best(self) -> QfiResult:
        return self.cells[self.best_index()]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for index, (cell, point) in enumerate(zip(self.cells, self.points)):
            if cell is not None:
                row = cell.to_row()
                row["error"] = ""
            else:
                merged = {**self.grid.fixed, **point}
                row = {
                    "pol": self.grid.polarization.label,
                    "r_tilde": merged["r"],
                    "nu": merged["nu"],
                    "tau": merged["tau"],
                    "theta": merged["theta"],
                    "fisher": np.nan,
                    "crlb_single": np.nan,
                    "error": self.errors.get(index, ""),
                }
            rows.append(row)
        return pd.DataFrame(rows, columns=SCAN_COLUMNS)


def _response_point(
    evaluator: ResponseEvaluator,
    grid: ScanGrid,
    key: tuple[float, float],
) -> ResponseValue | StringQfiError:
    r_tilde, nu = key
    try:
        return evaluator.combined(grid.polarization, r_tilde, nu, with_derivative=True)
    except StringQfiError as exc:
        return exc


def scan(
    grid: ScanGrid,
    evaluator: ResponseEvaluator | None = None,
    config: ScanConfig | None = None,
) -> ScanResult:
    """
    Evaluate the QFI on every cell of ``grid``.

    Distinct (r_tilde, nu) pairs are evaluated once each, in parallel when
    ``config.jobs > 1``; cells are then assembled in row-major order, so the
    result does not depend on completion order. Failures are recorded per cell.
    """
    ev = evaluator or default_evaluator()
    cfg = config or ScanConfig()
    if grid.size > cfg.max_cells:
        raise UsageError(f"Scan has {grid.size} cells, above the limit of {cfg.max_cells}.")

    points = list(grid.points())
    configs: list[DetectorConfig | None] = []
    errors: dict[int, str] = {}
    for index, point in enumerate(points):
        try:
            configs.append(grid.config_at(point))
        except StringQfiError as exc:
            configs.append(None)
            errors[index] = str(exc)

    keys = sorted({(c.r_tilde, c.nu) for c in configs if c is not None})
    logger.debug("scan: %d cells, %d distinct response points, jobs=%d", len(points), len(keys), cfg.jobs)
    if cfg.jobs > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(lambda k: _response_point(ev, grid, k), keys))
    else:
        outcomes = [_response_point(ev, grid, k) for k in keys]
    responses = dict(zip(keys, outcomes))

    cells: list[QfiResult | None] = []
    for index, cfg_cell in enumerate(configs):
        if cfg_cell is None:
            cells.append(None)
            continue
        response = responses[(cfg_cell.r_tilde, cfg_cell.nu)]
        if isinstance(response, StringQfiError):
            cells.append(None)
            errors[index] = str(response)
            continue
        try:
            cells.append(qfi_from_response(cfg_cell, response))
        except StringQfiError as exc:
            cells.append(None)
            errors[index] = str(exc)

    if errors:
        logger.warning("scan: %d of %d cells failed", len(errors), len(points))
    return ScanResult(grid=grid, cells=cells, errors=errors, points=points)
