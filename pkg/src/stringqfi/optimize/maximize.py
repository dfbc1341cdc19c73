"""
Coarse-scan-then-refine search for QFI maxima over one or two free axes.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from stringqfi.core import math as smath
from stringqfi.core.config import ScanConfig
from stringqfi.core.errors import StringQfiError, UsageError
from stringqfi.metrology.qfi import QfiResult, qfi_at
from stringqfi.optimize.grid import ScanAxis, ScanGrid
from stringqfi.optimize.scan import ScanResult, scan
from stringqfi.response.evaluator import ResponseEvaluator, default_evaluator

logger = logging.getLogger(__name__)


@dataclass
class MaxResult:
    """
    best               : the largest QFI found (never below the best coarse cell)
    refinement_history : (point, fisher) for every refinement evaluation, in order
    converged          : the refinement met ``tol`` within the iteration cap
    tolerance_achieved : final bracket width (1-D) or simplex extent (2-D), in
                         refinement coordinates (log on log-spaced axes)
    iterations         : refinement iterations used
    coarse             : the coarse scan the refinement started from
    """
    best: QfiResult
    refinement_history: list[tuple[dict[str, float], float]] = field(default_factory=list)
    converged: bool = False
    tolerance_achieved: float = math.inf
    iterations: int = 0
    coarse: ScanResult | None = None

    def to_record(self) -> dict[str, object]:
        record: dict[str, object] = self.best.to_row()
        record.update({
            "converged": self.converged,
            "tolerance_achieved": self.tolerance_achieved,
            "iterations": self.iterations,
        })
        return record


class _Objective:
    """QFI as a function of refinement coordinates, with an evaluation log."""

    def __init__(self, grid: ScanGrid, evaluator: ResponseEvaluator):
        self.grid = grid
        self.evaluator = evaluator
        self.history: list[tuple[dict[str, float], float]] = []
        self.best: QfiResult | None = None

    def point(self, units) -> dict[str, float]:
        return {axis.name: axis.from_unit(u) for axis, u in zip(self.grid.axes, units)}

    def __call__(self, units) -> float:
        point = self.point(units)
        try:
            result = qfi_at(self.grid.config_at(point), self.evaluator)
        except StringQfiError as exc:
            logger.debug("refinement point %s failed: %s", point, exc)
            self.history.append((point, math.nan))
            return -math.inf
        self.history.append((point, result.fisher))
        if self.best is None or result.fisher > self.best.fisher:
            self.best = result
        return result.fisher


def _neighbour_bracket(axis: ScanAxis, index: int) -> tuple[float, float]:
    values = axis.values()
    lo = values[max(index - 1, 0)]
    hi = values[min(index + 1, len(values) - 1)]
    return axis.to_unit(lo), axis.to_unit(hi)


def _initial_simplex(axes: list[ScanAxis], indices: tuple[int, ...]) -> np.ndarray:
    # best cell plus one grid step along each axis, stepping back at the upper edge
    values = [axis.values() for axis in axes]
    x0 = np.array([axis.to_unit(v[i]) for axis, v, i in zip(axes, values, indices)])
    simplex = [x0]
    for k, (axis, v, i) in enumerate(zip(axes, values, indices)):
        j = i + 1 if i + 1 < len(v) else i - 1
        vertex = x0.copy()
        vertex[k] = axis.to_unit(v[j])
        simplex.append(vertex)
    return np.array(simplex)


def maximize(
    grid: ScanGrid,
    tol: float = 1e-4,
    evaluator: ResponseEvaluator | None = None,
    config: ScanConfig | None = None,
    max_iter: int = 200,
) -> MaxResult:
    """
    Locate the QFI maximum over a 1- or 2-axis grid.

    The coarse scan picks the global best cell; golden-section search (one
    axis) or Nelder-Mead (two axes) then refines around it until the bracket
    or simplex is narrower than ``tol``. Non-convergence is reported with a
    RuntimeWarning and ``converged=False``; the best value so far is returned.
    """
    if not (tol > 0.0):
        raise UsageError(f"tol must be > 0, got {tol!r}.")
    if len(grid.axes) not in (1, 2):
        raise UsageError(f"maximize needs 1 or 2 free axes, got {len(grid.axes)}.")
    ev = evaluator or default_evaluator()

    coarse = scan(grid, ev, config)
    flat = coarse.best_index()
    coarse_best = coarse.cells[flat]
    indices = np.unravel_index(flat, grid.shape)
    objective = _Objective(grid, ev)
    logger.info("coarse best %s: fisher=%.10g", coarse_best.point.as_point(), coarse_best.fisher)

    if len(grid.axes) == 1:
        axis = grid.axes[0]
        a, b = _neighbour_bracket(axis, int(indices[0]))
        _, _, width, iterations = smath.golden_section_max(lambda u: objective([u]), a, b, tol, max_iter)
        converged = width <= tol
        achieved = width
    else:
        simplex = _initial_simplex(grid.axes, tuple(int(i) for i in indices))
        bounds = [(axis.to_unit(axis.lo), axis.to_unit(axis.hi)) for axis in grid.axes]
        res = optimize.minimize(
            lambda u: -objective(u),
            simplex[0],
            method="Nelder-Mead",
            bounds=bounds,
            options={
                "initial_simplex": simplex,
                "xatol": tol,
                "fatol": math.inf,
                "maxiter": max_iter,
            },
        )
        vertices = res.final_simplex[0]
        achieved = float(np.max(np.ptp(vertices, axis=0)))
        iterations = int(res.nit)
        converged = bool(res.success) and achieved <= tol

    best = coarse_best
    if objective.best is not None and objective.best.fisher > coarse_best.fisher:
        best = objective.best
    if not converged:
        warnings.warn(
            f"Refinement did not reach tol={tol!r} within {max_iter} iterations "
            f"(achieved {achieved!r}); returning the best point so far.",
            RuntimeWarning,
            stacklevel=2,
        )
    return MaxResult(
        best=best,
        refinement_history=objective.history,
        converged=converged,
        tolerance_achieved=achieved,
        iterations=iterations,
        coarse=coarse,
    )
