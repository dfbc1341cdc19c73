from __future__ import annotations

import math

import pandas as pd
import pytest

from stringqfi import __version__
from stringqfi.core.errors import UsageError
from stringqfi.io.read_write import (
    CACHE_MAGIC,
    csv_header,
    format_record,
    read_cache_file,
    read_config_file,
    read_csv,
    read_record,
    reproducible_argv,
    write_cache_file,
    write_csv,
    write_record,
)
from stringqfi.response.cache import ResponseValue


def test_execution_flags_are_dropped():
    argv = ["--cache", "c.tsv", "--jobs=4", "-vv", "--verbose", "qfi", "--r", "0.1", "--jobs", "2"]
    assert reproducible_argv(argv) == ["qfi", "--r", "0.1"]


def test_header_lines():
    header = csv_header(["qfi", "--pol", "radial", "--cache", "x.tsv"], "gl-sin-v1")
    assert header[0] == f"stringqfi {__version__}"
    assert header[1] == "command: stringqfi qfi --pol radial"
    assert header[2].startswith("rates:")
    assert header[3].startswith("units:")
    assert header[4] == "scheme: gl-sin-v1"


def test_csv_round_trips_floats_exactly(tmp_path):
    df = pd.DataFrame({"pol": ["radial", "parallel"], "fisher": [1.0 / 3.0, math.pi * 1e-7]})
    path = tmp_path / "out.csv"
    write_csv(df, path, ["first", "second"])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[:3] == ["# first", "# second", "pol,fisher"]
    pd.testing.assert_frame_equal(read_csv(path), df)


def test_csv_to_stdout(capsys):
    write_csv(pd.DataFrame({"a": [0.5]}), None, ["h"])
    assert capsys.readouterr().out == "# h\na\n0.5\n"


def test_record_format(tmp_path):
    record = {"pol": "radial", "fisher": 0.1, "converged": True, "iterations": 7}
    assert format_record(record) == "pol=radial\nfisher=0.10000000000000001\nconverged=true\niterations=7\n"
    path = tmp_path / "record.txt"
    write_record(record, path)
    assert read_record(path) == {"pol": "radial", "fisher": "0.10000000000000001", "converged": "true", "iterations": "7"}


def test_config_file_keys_are_normalised(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# settings\nmax-nodes = 256\n\nfd_step=0.002  # smaller\n", encoding="utf-8")
    assert read_config_file(path) == {"max_nodes": "256", "fd_step": "0.002"}


def test_config_file_errors(tmp_path):
    with pytest.raises(UsageError):
        read_config_file(tmp_path / "missing.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(bad)


def test_cache_file_round_trip(tmp_path):
    items = [
        (("radial", 0.1, 1.5, "v1"), ResponseValue(0.1234567890123456789, -0.5, 1e-13, 2e-12, True)),
        (("parallel", 2.29, 2.0, "v1"), ResponseValue(1.9999999999999998)),
    ]
    path = tmp_path / "cache.tsv"
    write_cache_file(items, path)
    assert path.read_text(encoding="utf-8").splitlines()[0] == CACHE_MAGIC
    assert read_cache_file(path) == dict(items)
