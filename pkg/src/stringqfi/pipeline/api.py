from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import pandas as pd

from stringqfi import __version__
from stringqfi.core.config import Polarization, ScanConfig
from stringqfi.core.context import RunContext
from stringqfi.core.errors import UsageError
from stringqfi.io.read_write import csv_header, write_csv, write_manifest
from stringqfi.optimize.grid import ScanAxis, ScanGrid
from stringqfi.optimize.scan import SCAN_COLUMNS, scan
from stringqfi.response.evaluator import ResponseEvaluator, default_evaluator

logger = logging.getLogger(__name__)

PANELS: tuple[str, ...] = ("radial", "tangential", "parallel")


@dataclass(frozen=True)
class FigureSpec:
    """
    One reproducible figure: a scan per polarization panel.

    axes   : names of the free variables (default ranges from DEFAULT_AXES)
    fixed  : values of the remaining variables
    curves : optional values of one fixed variable, one curve each; every
             curve's rows go into the same panel table
    """
    name: str
    description: str
    axes: tuple[str, ...]
    fixed: dict[str, float]
    curves: tuple[str, tuple[float, ...]] | None = None
    panels: tuple[str, ...] = PANELS


FIGURES: dict[str, FigureSpec] = {
    "fig3": FigureSpec(
        name="fig3",
        description="QFI over evolution time and initial-state angle",
        axes=("tau", "theta"),
        fixed={"r": 0.1, "nu": 1.5},
    ),
    "fig4": FigureSpec(
        name="fig4",
        description="QFI over evolution time and distance to the string",
        axes=("tau", "r"),
        fixed={"nu": 1.5, "theta": 0.0},
    ),
    "fig5": FigureSpec(
        name="fig5",
        description="QFI over distance to the string for several deficit parameters",
        axes=("r",),
        fixed={"tau": 4.0, "theta": 0.0},
        curves=("nu", (1.5, 1.8, 2.0)),
    ),
    "fig6": FigureSpec(
        name="fig6",
        description="QFI over the deficit parameter and evolution time",
        axes=("nu", "tau"),
        fixed={"r": 0.1, "theta": 0.0},
    ),
}


@dataclass
class FigureRun:
    """Resolved scan settings of one figure run."""
    spec: FigureSpec
    axes: list[ScanAxis]
    fixed: dict[str, float]
    curve_values: tuple[float, ...] = field(default_factory=tuple)

    def grids(self, polarization: Polarization) -> list[ScanGrid]:
        if self.spec.curves is None:
            return [ScanGrid(self.axes, dict(self.fixed), polarization)]
        variable = self.spec.curves[0]
        return [
            ScanGrid(self.axes, {**self.fixed, variable: value}, polarization)
            for value in self.curve_values
        ]


def get_figure(name: str) -> FigureSpec:
    spec = FIGURES.get(name)
    if spec is None:
        options = ", ".join(sorted(FIGURES))
        raise UsageError(f"Unknown figure '{name}'. Available: {options}")
    return spec


def resolve_figure(
    name: str,
    density: int | None = None,
    overrides: dict[str, float] | None = None,
    axes: Sequence[ScanAxis] = (),
) -> FigureRun:
    """
    Apply density, fixed-value and axis overrides to a figure's defaults.

    Overriding the curve variable (nu for fig5) replaces the curve list with
    that single value.
    """
    spec = get_figure(name)
    if density is not None and density < 2:
        raise UsageError(f"density must be >= 2, got {density}.")
    by_name = {axis.name: axis for axis in axes}
    unknown = set(by_name) - set(spec.axes)
    if unknown:
        raise UsageError(f"{name} has no free axis {sorted(unknown)}; its axes are {list(spec.axes)}.")
    resolved_axes = [by_name.get(n) or ScanAxis.default(n, density) for n in spec.axes]

    fixed = dict(spec.fixed)
    curve_values: tuple[float, ...] = spec.curves[1] if spec.curves else ()
    for key, value in (overrides or {}).items():
        if key in spec.axes:
            raise UsageError(f"'{key}' is a free axis of {name}; use an axis override instead.")
        if spec.curves is not None and key == spec.curves[0]:
            curve_values = (float(value),)
        elif key in fixed:
            fixed[key] = float(value)
        else:
            raise UsageError(f"{name} has no fixed parameter '{key}'.")
    return FigureRun(spec=spec, axes=resolved_axes, fixed=fixed, curve_values=curve_values)


def _manifest(run: FigureRun, scheme_version: str, argv: Sequence[str]) -> dict[str, object]:
    manifest: dict[str, object] = {
        "figure": run.spec.name,
        "description": run.spec.description,
        "tool_version": __version__,
        "scheme": scheme_version,
        "panels": ",".join(run.spec.panels),
    }
    for key, value in run.fixed.items():
        manifest[f"fixed.{key}"] = value
    if run.spec.curves is not None:
        manifest[f"curves.{run.spec.curves[0]}"] = ",".join(f"{v:.17g}" for v in run.curve_values)
    for axis in run.axes:
        manifest[f"axis.{axis.name}"] = f"{axis.lo:.17g}:{axis.hi:.17g}:{axis.count}:{axis.spacing}"
    manifest["command"] = csv_header(argv, scheme_version)[1].removeprefix("command: ")
    return manifest


def run_figure(
    name: str,
    output_dir: Path | str | None = None,
    density: int | None = None,
    evaluator: ResponseEvaluator | None = None,
    jobs: int = 1,
    overrides: dict[str, float] | None = None,
    axes: Sequence[ScanAxis] = (),
    argv: Sequence[str] = (),
) -> RunContext:
    """
    Scan every polarization panel of a figure.

    With ``output_dir`` set, writes ``<panel>.csv`` per panel and
    ``manifest.txt`` there; the tables are always kept on the returned context.
    """
    ev = evaluator or default_evaluator()
    run = resolve_figure(name, density, overrides, axes)
    scan_cfg = ScanConfig(jobs=jobs)
    scheme = ev.config.scheme_version
    context = RunContext(name=name, metadata=_manifest(run, scheme, argv))

    for panel in run.spec.panels:
        pol = Polarization.preset(panel)
        frames = []
        failed = 0
        for grid in run.grids(pol):
            result = scan(grid, ev, scan_cfg)
            failed += len(result.errors)
            frames.append(result.to_frame())
        table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=SCAN_COLUMNS)
        context.add_table(panel, table)
        context.errors[panel] = failed
        logger.info("%s/%s: %d cells, %d failed", name, panel, len(table), failed)

    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        header = csv_header(argv, scheme)
        for panel, table in context.tables.items():
            path = out / f"{panel}.csv"
            write_csv(table, path, header)
            context.outputs[panel] = path
        manifest_path = out / "manifest.txt"
        write_manifest(context.metadata, manifest_path)
        context.outputs["manifest"] = manifest_path
    return context


def figure_maxima(context: RunContext) -> pd.DataFrame:
    """
    Largest fisher value per panel (and per curve for figures with curves).

    Columns: figure, panel, pol, r_tilde, nu, tau, theta, fisher.
    """
    spec = get_figure(context.name)
    curve_var = {"r": "r_tilde"}.get(spec.curves[0], spec.curves[0]) if spec.curves else None
    rows = []
    for panel, table in context.tables.items():
        valid = table.dropna(subset=["fisher"])
        if valid.empty:
            continue
        groups = valid.groupby(curve_var, sort=True) if curve_var else [(None, valid)]
        for _, group in groups:
            best = group.loc[group["fisher"].idxmax()]
            rows.append({
                "figure": context.name,
                "panel": panel,
                "pol": best["pol"],
                "r_tilde": best["r_tilde"],
                "nu": best["nu"],
                "tau": best["tau"],
                "theta": best["theta"],
                "fisher": best["fisher"],
            })
    return pd.DataFrame(rows, columns=["figure", "panel", "pol", "r_tilde", "nu", "tau", "theta", "fisher"])
