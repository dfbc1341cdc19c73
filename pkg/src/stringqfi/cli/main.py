from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import pandas as pd

from stringqfi import __version__
from stringqfi.core.config import DetectorConfig, Polarization, RunConfig, ScanConfig
from stringqfi.core.errors import ConvergenceError, DomainError, StringQfiError, UsageError
from stringqfi.io.read_write import csv_header, format_record, read_config_file, write_csv, write_record
from stringqfi.metrology.qfi import qfi_at
from stringqfi.optimize.grid import ScanAxis, ScanGrid
from stringqfi.optimize.maximize import maximize
from stringqfi.optimize.scan import scan
from stringqfi.pipeline.api import FIGURES, figure_maxima, run_figure
from stringqfi.response.asymptotic import response_asymptotic_dnu, response_asymptotic_small_r
from stringqfi.response.cache import ResponseCache
from stringqfi.response.components import get_component
from stringqfi.response.evaluator import ResponseEvaluator, response_table
from stringqfi.response.kossakowski import ThermalParams, thermal_occupation

logger = logging.getLogger("stringqfi")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

POINT_KEYS = ("r", "nu", "tau", "theta")
TOLERANCE_KEYS = ("quad_rtol", "min_nodes", "max_nodes", "fd_step")
APPEND_KEYS = {"axis"}
TRUE_WORDS = {"1", "true", "yes", "on"}
FALSE_WORDS = {"0", "false", "no", "off"}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


def _add_point_flags(p: argparse.ArgumentParser, theta_default: float | None = 0.0) -> None:
    p.add_argument("--r", type=float, help="Distance to the string, r_tilde (units c/omega0).")
    p.add_argument("--nu", type=float, help="Deficit-angle parameter nu.")
    p.add_argument("--tau", type=float, help="Evolution time, tau_tilde (units 1/gamma0).")
    p.add_argument("--theta", type=float, default=theta_default, help="Initial-state angle (rad).")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="stringqfi", description="QFI of the cosmic-string deficit angle.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="key=value file; its values override flags.")
    parser.add_argument("--cache", type=Path, help="Response cache file (read and updated).")
    parser.add_argument("--jobs", type=int, default=1, help="Worker threads for scans.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug.")
    parser.add_argument("--quad-rtol", type=float, help="Quadrature refinement tolerance.")
    parser.add_argument("--min-nodes", type=int, help="Initial Gauss-Legendre node count.")
    parser.add_argument("--max-nodes", type=int, help="Gauss-Legendre node cap.")
    parser.add_argument("--fd-step", type=float, help="Finite-difference step in nu.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_resp = sub.add_parser("response", help="Response functions f_i and d f_i / d nu.")
    p_resp.add_argument("--component", default="radial", help="radial|tangential|parallel or r|alpha|z.")
    p_resp.add_argument("--r", type=float)
    p_resp.add_argument("--nu", type=float)
    p_resp.add_argument("--r-axis", help="lo:hi[:count[:log]] sweep over r_tilde.")
    p_resp.add_argument("--nu-axis", help="lo:hi[:count[:linear]] sweep over nu.")
    p_resp.add_argument("--asymptotic", action="store_true", help="Add small-r formula columns.")
    p_resp.add_argument("-o", "--output", type=Path)

    p_qfi = sub.add_parser("qfi", help="QFI at a point or over a grid.")
    p_qfi.add_argument("--pol", default="radial", help="Preset name or explicit 'zr,za,zz'.")
    _add_point_flags(p_qfi)
    p_qfi.add_argument("--phi", type=float, default=0.0)
    p_qfi.add_argument("--n-occ", type=float, help="Thermal occupation number.")
    p_qfi.add_argument("--omega0", type=float, help="Transition frequency (rad/s), with --temperature.")
    p_qfi.add_argument("--temperature", type=float, help="Bath temperature (K), with --omega0.")
    p_qfi.add_argument("--axis", action="append", default=[], help="name:lo:hi[:count[:spacing]]")
    p_qfi.add_argument("-o", "--output", type=Path)

    p_fig = sub.add_parser("figure", help="Reproduce the data of one figure.")
    p_fig.add_argument("name", help=", ".join(sorted(FIGURES)))
    _add_point_flags(p_fig, theta_default=None)
    p_fig.add_argument("--density", type=int, help="Sample count per default axis.")
    p_fig.add_argument("--axis", action="append", default=[], help="Override a free axis.")
    p_fig.add_argument("--output-dir", type=Path, help="Defaults to ./<name>.")

    p_max = sub.add_parser("maximize", help="Locate the QFI maximum over 1 or 2 axes.")
    p_max.add_argument("--pol", default="radial")
    _add_point_flags(p_max)
    p_max.add_argument("--axis", action="append", default=[], help="name:lo:hi[:count[:spacing]]")
    p_max.add_argument("--tol", type=float, default=1e-4)
    p_max.add_argument("--max-iter", type=int, default=200)
    p_max.add_argument("-o", "--output", type=Path, help="Record destination (key=value).")

    return parser, {"response": p_resp, "qfi": p_qfi, "figure": p_fig, "maximize": p_max}


def _convert(action: argparse.Action, raw: str) -> Any:
    if action.nargs == 0:
        word = raw.strip().lower()
        if word in TRUE_WORDS:
            return action.const if action.const is not None else True
        if word in FALSE_WORDS:
            return action.default
        raise UsageError(f"Config key '{action.dest}' expects a boolean, got '{raw}'.")
    convert = action.type or str
    try:
        return convert(raw)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"Config key '{action.dest}' has invalid value '{raw}'.") from exc


def apply_config_file(
    args: argparse.Namespace,
    parser: argparse.ArgumentParser,
    subparser: argparse.ArgumentParser | None,
) -> list[str]:
    """
    Override parsed flags with the values of ``args.config``.

    Returns the equivalent '--key=value' tokens so the effective settings
    appear in output headers.
    """
    if args.config is None:
        return []
    actions = {a.dest: a for a in parser._actions}
    if subparser is not None:
        actions.update({a.dest: a for a in subparser._actions})
    for dest in ("help", "version", "config", "command"):
        actions.pop(dest, None)
    tokens = []
    for key, raw in read_config_file(args.config).items():
        action = actions.get(key)
        if action is None:
            raise UsageError(f"Unknown config key '{key}' in {args.config}.")
        if key in APPEND_KEYS:
            value = [part.strip() for part in raw.split(",") if part.strip()]
        else:
            value = _convert(action, raw)
        setattr(args, key, value)
        tokens.append(f"--{key.replace('_', '-')}={raw}")
    return tokens


def build_run_config(args: argparse.Namespace, argv: Sequence[str], config_tokens: Sequence[str]) -> RunConfig:
    params = {name: getattr(args, name) for name in POINT_KEYS if getattr(args, name, None) is not None}
    tolerances = {k: getattr(args, k) for k in TOLERANCE_KEYS if getattr(args, k, None) is not None}
    output = getattr(args, "output", None) or getattr(args, "output_dir", None)
    return RunConfig(
        command=args.command,
        params=params,
        polarization=getattr(args, "pol", None),
        output_path=output,
        cache_path=args.cache,
        jobs=args.jobs,
        tolerances=tolerances,
        argv=[*argv, *config_tokens],
    )


def _parse_axes(specs: Sequence[str]) -> list[ScanAxis]:
    return [ScanAxis.parse(spec) for spec in specs]


def _require(params: dict[str, float], names: Sequence[str], command: str) -> None:
    missing = [n for n in names if n not in params]
    if missing:
        flags = ", ".join(f"--{n}" for n in missing)
        raise UsageError(f"{command} needs {flags} (or an --axis over them).")


def _sweep_values(flag_value: float | None, axis_spec: str | None, name: str) -> list[float]:
    if axis_spec is not None:
        if flag_value is not None:
            raise UsageError(f"Give either --{name} or --{name}-axis, not both.")
        return [float(v) for v in ScanAxis.parse(f"{name}:{axis_spec}").values()]
    if flag_value is None:
        raise UsageError(f"response needs --{name} or --{name}-axis.")
    return [flag_value]


def cmd_response(args: argparse.Namespace, run: RunConfig, evaluator: ResponseEvaluator) -> int:
    comp = get_component(args.component)
    r_values = _sweep_values(args.r, args.r_axis, "r")
    nu_values = _sweep_values(args.nu, args.nu_axis, "nu")
    table = response_table(comp, r_values, nu_values, with_derivative=True, evaluator=evaluator)
    if args.asymptotic:
        table["f_asymptotic"] = [
            response_asymptotic_small_r(comp, r, nu) for r, nu in zip(table["r_tilde"], table["nu"])
        ]
        table["df_dnu_asymptotic"] = [
            response_asymptotic_dnu(comp, r, nu) for r, nu in zip(table["r_tilde"], table["nu"])
        ]
    write_csv(table, run.output_path, csv_header(run.argv, evaluator.config.scheme_version))
    return EXIT_OK


def _occupation(args: argparse.Namespace) -> float:
    thermal = args.omega0 is not None or args.temperature is not None
    if thermal and args.n_occ is not None:
        raise UsageError("Give either --n-occ or --omega0/--temperature, not both.")
    if thermal:
        if args.omega0 is None or args.temperature is None:
            raise UsageError("--omega0 and --temperature must be given together.")
        n_occ = thermal_occupation(ThermalParams(args.omega0, args.temperature))
        logger.info("thermal occupation N = %.17g", n_occ)
        return n_occ
    return args.n_occ or 0.0


def _grid(args: argparse.Namespace, run: RunConfig, n_occ: float = 0.0, phi: float = 0.0) -> ScanGrid:
    axes = _parse_axes(args.axis)
    scanned = {axis.name for axis in axes}
    fixed = {k: v for k, v in run.params.items() if k not in scanned}
    return ScanGrid(
        axes=axes,
        fixed=fixed,
        polarization=Polarization.from_spec(run.polarization or "radial"),
        n_occ=n_occ,
        phi=phi,
    )


def cmd_qfi(args: argparse.Namespace, run: RunConfig, evaluator: ResponseEvaluator) -> int:
    n_occ = _occupation(args)
    header = csv_header(run.argv, evaluator.config.scheme_version)
    if not args.axis:
        _require(run.params, ("r", "nu", "tau"), "qfi")
        config = DetectorConfig(
            polarization=Polarization.from_spec(args.pol),
            r_tilde=args.r,
            nu=args.nu,
            tau_tilde=args.tau,
            theta=args.theta,
            phi=args.phi,
            n_occ=n_occ,
        )
        result = qfi_at(config, evaluator)
        write_csv(pd.DataFrame([result.to_row()]), run.output_path, header)
        return EXIT_OK
    grid = _grid(args, run, n_occ=n_occ, phi=args.phi)
    result = scan(grid, evaluator, ScanConfig(jobs=run.jobs))
    write_csv(result.to_frame(), run.output_path, header)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace, run: RunConfig, evaluator: ResponseEvaluator) -> int:
    output_dir = args.output_dir or Path(args.name)
    context = run_figure(
        args.name,
        output_dir=output_dir,
        density=args.density,
        evaluator=evaluator,
        jobs=run.jobs,
        overrides=run.params,
        axes=_parse_axes(args.axis),
        argv=run.argv,
    )
    maxima = figure_maxima(context)
    write_csv(maxima, None, [f"maxima of {args.name}; data in {output_dir}"])
    return EXIT_OK


def _report(result) -> str:
    best = result.best
    point = best.point
    lines = [
        f"best {point.polarization.label} QFI: F = {best.fisher:.10g}",
        f"  at r_tilde = {point.r_tilde:.10g}, nu = {point.nu:.10g}, "
        f"tau = {point.tau_tilde:.10g}, theta = {point.theta:.10g}",
        f"  single-shot variance bound 1/F = {best.crlb_single:.10g}",
        f"  converged = {result.converged} after {result.iterations} iterations "
        f"(achieved {result.tolerance_achieved:.3g})",
    ]
    return "\n".join(lines)


def cmd_maximize(args: argparse.Namespace, run: RunConfig, evaluator: ResponseEvaluator) -> int:
    grid = _grid(args, run)
    result = maximize(grid, tol=args.tol, evaluator=evaluator, config=ScanConfig(jobs=run.jobs), max_iter=args.max_iter)
    report = _report(result)
    if run.output_path is not None:
        print(report)
        write_record(result.to_record(), run.output_path)
    else:
        sys.stdout.write("".join(f"# {line}\n" for line in report.splitlines()))
        sys.stdout.write(format_record(result.to_record()))
    return EXIT_OK if result.converged else EXIT_CONVERGENCE


COMMANDS = {
    "response": cmd_response,
    "qfi": cmd_qfi,
    "figure": cmd_figure,
    "maximize": cmd_maximize,
}


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    cache: ResponseCache | None = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        config_tokens = apply_config_file(args, parser, subparsers[args.command])
        configure_logging(int(args.verbose))
        run = build_run_config(args, argv, config_tokens)
        if run.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {run.jobs}.")
        cache = ResponseCache(run.cache_path) if run.cache_path is not None else None
        evaluator = ResponseEvaluator(run.response_config(), cache)
        return COMMANDS[run.command](args, run, evaluator)
    except UsageError as exc:
        print(f"stringqfi: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"stringqfi: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(
            f"stringqfi: convergence failure: {exc} "
            f"(partial value {exc.partial_value!r}, error {exc.achieved_error!r})",
            file=sys.stderr,
        )
        return EXIT_CONVERGENCE
    except StringQfiError as exc:
        print(f"stringqfi: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    finally:
        if cache is not None:
            cache.save()


if __name__ == "__main__":
    sys.exit(main())
