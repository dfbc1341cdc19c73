from __future__ import annotations

import logging
import shlex
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, TextIO

import pandas as pd

from stringqfi import __version__
from stringqfi.core.errors import UsageError
from stringqfi.response.cache import CacheKey, ResponseValue

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
RATE_NOTE = (
    "rates: g = gamma_total = 4A in units of gamma0 (g = f in the vacuum); "
    "transverse decay exp(-g tau/2), longitudinal exp(-g tau), omega3 -> -B/A"
)
UNITS_NOTE = "units: r_tilde in c/omega0, tau in 1/gamma0, fisher dimensionless"
CACHE_MAGIC = "# stringqfi-response-cache v1"
CACHE_COLUMNS = [
    "component", "r_tilde", "nu", "scheme", "value", "dvalue_dnu",
    "has_derivative", "trunc_error", "quad_error",
]
# flags that change speed but never the numbers; left out of reproducibility headers
EXECUTION_FLAGS = {"--cache": True, "--jobs": True, "--verbose": False, "-v": False}


def reproducible_argv(argv: Iterable[str]) -> list[str]:
    """Drop execution-only flags (and their values) from a command line."""
    tokens = list(argv)
    kept: list[str] = []
    skip = False
    for token in tokens:
        if skip:
            skip = False
            continue
        flag, eq, _ = token.partition("=")
        if flag in EXECUTION_FLAGS:
            skip = EXECUTION_FLAGS[flag] and not eq
            continue
        if token.startswith("-v") and set(token[1:]) == {"v"}:
            continue
        kept.append(token)
    return kept


def csv_header(argv: Iterable[str], scheme_version: str) -> list[str]:
    command = shlex.join(["stringqfi", *reproducible_argv(argv)])
    return [
        f"stringqfi {__version__}",
        f"command: {command}",
        RATE_NOTE,
        UNITS_NOTE,
        f"scheme: {scheme_version}",
    ]


def _open_target(path: Path | str | None) -> tuple[TextIO, bool]:
    if path is None or str(path) == "-":
        return sys.stdout, False
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    return target.open("w", encoding="utf-8", newline=""), True


def write_csv(
    df: pd.DataFrame,
    path: Path | str | None,
    header: Iterable[str] = (),
) -> None:
    """
    Write ``df`` as CSV preceded by '#' comment lines.

    Floats use %.17g so values read back exactly; ``path=None`` writes to stdout.
    """
    handle, owned = _open_target(path)
    try:
        for line in header:
            handle.write(f"# {line}\n")
        df.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    finally:
        if owned:
            handle.close()
    if owned:
        logger.info("Wrote %d rows to %s", len(df), path)


def read_csv(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path, comment="#", float_precision="round_trip")


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def format_record(record: Mapping[str, Any]) -> str:
    return "".join(f"{key}={_format_value(value)}\n" for key, value in record.items())


def write_record(record: Mapping[str, Any], path: Path | str | None) -> None:
    """key=value lines, one per entry, in insertion order."""
    handle, owned = _open_target(path)
    try:
        handle.write(format_record(record))
    finally:
        if owned:
            handle.close()


def write_manifest(manifest: Mapping[str, Any], path: Path | str) -> None:
    write_record(manifest, path)


def read_record(path: Path | str) -> dict[str, str]:
    """Parse key=value lines; blank lines and '#' comments are skipped."""
    record: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise UsageError(f"{path}:{lineno}: expected key=value, got '{raw}'.")
        record[key.strip()] = value.strip()
    return record


def read_config_file(path: Path | str) -> dict[str, str]:
    """
    Read a flat key=value config file.

    Keys are CLI long-option names; '-' and '_' are interchangeable and are
    normalised to '_'.
    """
    if not Path(path).is_file():
        raise UsageError(f"Config file not found: {path}")
    return {key.replace("-", "_"): value for key, value in read_record(path).items()}


def write_cache_file(items: Iterable[tuple[CacheKey, ResponseValue]], path: Path | str) -> None:
    rows = [
        {
            "component": component,
            "r_tilde": r_tilde,
            "nu": nu,
            "scheme": scheme,
            "value": val.value,
            "dvalue_dnu": val.dvalue_dnu,
            "has_derivative": int(val.has_derivative),
            "trunc_error": val.trunc_error,
            "quad_error": val.quad_error,
        }
        for (component, r_tilde, nu, scheme), val in items
    ]
    df = pd.DataFrame(rows, columns=CACHE_COLUMNS)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as handle:
        handle.write(CACHE_MAGIC + "\n")
        df.to_csv(handle, sep="\t", index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug("Saved %d cached response values to %s", len(df), target)


def read_cache_file(path: Path | str) -> dict[CacheKey, ResponseValue]:
    """
    Load a cache file written by ``write_cache_file``.

    A file with a different version line is ignored (empty result) so a stale
    cache can never feed values into a run.
    """
    source = Path(path)
    with source.open("r", encoding="utf-8") as handle:
        first = handle.readline().rstrip("\n")
    if first != CACHE_MAGIC:
        logger.warning("Ignoring response cache %s: unrecognised header %r", source, first)
        return {}
    df = pd.read_csv(
        source,
        sep="\t",
        skiprows=1,
        float_precision="round_trip",
        dtype={"component": str, "scheme": str},
    )
    entries: dict[CacheKey, ResponseValue] = {}
    for row in df.itertuples(index=False):
        key = (row.component, float(row.r_tilde), float(row.nu), row.scheme)
        entries[key] = ResponseValue(
            value=float(row.value),
            dvalue_dnu=float(row.dvalue_dnu),
            trunc_error=float(row.trunc_error),
            quad_error=float(row.quad_error),
            has_derivative=bool(row.has_derivative),
        )
    return entries
