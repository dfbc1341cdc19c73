from __future__ import annotations

import io
import math

import numpy as np
import pandas as pd
import pytest

from stringqfi import __version__
from stringqfi.cli.main import main
from stringqfi.core.config import Polarization
from stringqfi.dynamics import BlochState, EvolutionParams, InitialState, lindblad_integrate
from stringqfi.io.read_write import read_record
from stringqfi.metrology.qfi import qfi_bloch
from stringqfi.response.kossakowski import kossakowski_thermal


def _table(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parallel_response_near_the_string(capsys):
    code, out, _ = _run(capsys, "response", "--component", "z", "--r", "0.001", "--nu", "1.5")
    assert code == 0
    table = _table(out)
    assert table["f"].item() == pytest.approx(1.5, abs=1e-3)
    assert out.startswith(f"# stringqfi {__version__}\n")


def test_flat_space_radial_response(capsys):
    code, out, _ = _run(capsys, "response", "--component", "r", "--r", "0.5", "--nu", "1")
    assert code == 0
    assert _table(out)["f"].item() == pytest.approx(1.0, abs=1e-6)


def test_response_sweep_with_asymptotics(capsys):
    code, out, _ = _run(
        capsys, "response", "--component", "alpha", "--r-axis", "0.01:0.05:3:log", "--nu", "1.5", "--asymptotic",
    )
    assert code == 0
    table = _table(out)
    assert len(table) == 3
    assert ((table["f"] - table["f_asymptotic"]).abs() < 0.05 * table["f"]).all()


def test_qfi_point(capsys):
    code, out, _ = _run(capsys, "qfi", "--pol", "radial", "--r", "0.14", "--nu", "1.5", "--tau", "4", "--theta", "0")
    assert code == 0
    row = _table(out).iloc[0]
    assert row["fisher"] == pytest.approx(8.513, rel=2e-2)
    assert row["crlb_single"] == pytest.approx(1.0 / row["fisher"])


@pytest.mark.parametrize("extra", [("--tau", "4", "--theta", "3.14159265"), ("--tau", "0", "--theta", "0")])
def test_qfi_vanishes_for_ground_state_and_zero_time(capsys, extra):
    code, out, _ = _run(capsys, "qfi", "--r", "0.14", "--nu", "1.5", *extra)
    assert code == 0
    assert _table(out)["fisher"].item() == pytest.approx(0.0, abs=1e-12)


def test_qfi_theta_sweep(capsys):
    code, out, _ = _run(
        capsys, "qfi", "--pol", "0.5,0.5,0", "--r", "0.1", "--nu", "1.5", "--tau", "4",
        "--axis", "theta:0:3.141592653589793:5",
    )
    assert code == 0
    fisher = _table(out)["fisher"].to_numpy()
    assert len(fisher) == 5
    assert fisher[-1] == 0.0
    assert all(a >= b for a, b in zip(fisher, fisher[1:]))


def _master_equation_qfi(evaluator, r_tilde: float, nu: float, tau: float, n_occ: float) -> float:
    h = 1e-3
    steps = math.ceil(tau / 0.0025)
    radial = Polarization.preset("radial")

    def omega(value: float) -> np.ndarray:
        coeffs = kossakowski_thermal(radial, r_tilde, value, n_occ, evaluator=evaluator)
        params = EvolutionParams.from_kossakowski(coeffs, tau_tilde=tau)
        return lindblad_integrate(InitialState(0.0), params, steps).vector

    d_omega = (omega(nu + h) - omega(nu - h)) / (2.0 * h)
    return qfi_bloch(BlochState.from_vectors(omega(nu), d_omega))


def test_thermal_qfi_matches_master_equation(capsys, evaluator):
    point = ("--r", "0.14", "--nu", "1.5", "--tau", "2")
    code, thermal, _ = _run(capsys, "qfi", *point, "--n-occ", "1")
    assert code == 0
    expected = _master_equation_qfi(evaluator, 0.14, 1.5, 2.0, 1.0)
    assert _table(thermal)["fisher"].item() == pytest.approx(expected, rel=1e-5)


def test_thermal_occupation_flags_are_exclusive(capsys):
    point = ("--r", "0.14", "--nu", "1.5", "--tau", "2")
    assert _run(capsys, "qfi", *point, "--n-occ", "1", "--omega0", "1e9", "--temperature", "1")[0] == 2
    assert _run(capsys, "qfi", *point, "--omega0", "1e9")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("figure", "fig9"),
        ("response", "--r-axis", "0.1:1:0", "--nu", "1.5"),
        ("qfi", "--r", "0.1", "--nu", "1.5", "--tau", "4", "--axis", "r:1:1"),
        ("qfi", "--r", "0.1", "--nu", "1.5"),
        ("qfi", "--bogus"),
        ("--jobs", "0", "qfi", "--r", "0.1", "--nu", "1.5", "--tau", "1"),
        (),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert "usage error" in err


def test_domain_error(capsys):
    code, _, err = _run(capsys, "response", "--component", "r", "--r", "0.1", "--nu", "5")
    assert code == 3
    assert "domain error" in err


def test_maximize_over_an_unevaluable_region_is_a_domain_error(capsys):
    code, out, err = _run(
        capsys, "maximize", "--nu", "1.5", "--tau", "4", "--theta", "0", "--axis", "r:31:40:3",
    )
    assert code == 3
    assert out == ""
    assert "no evaluable point" in err


def test_convergence_error(capsys):
    code, _, err = _run(
        capsys, "--min-nodes", "16", "--max-nodes", "16", "response", "--component", "r", "--r", "10", "--nu", "1.5",
    )
    assert code == 4
    assert "convergence failure" in err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_config_file_overrides_flags(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("# flat space\nnu = 1\nr = 0.5\nfd-step = 0.002\n", encoding="utf-8")
    code, out, _ = _run(capsys, "--config", str(config), "response", "--component", "r", "--r", "0.3", "--nu", "1.5")
    assert code == 0
    row = _table(out).iloc[0]
    assert row["r_tilde"] == 0.5
    assert row["nu"] == 1.0
    assert "--nu=1" in out
    assert "--fd-step=0.002" in out


def test_unknown_config_key(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("speed = 11\n", encoding="utf-8")
    assert _run(capsys, "--config", str(config), "qfi")[0] == 2


def test_output_is_identical_with_and_without_cache(tmp_path, capsys):
    target = tmp_path / "out.csv"
    cache = tmp_path / "responses.tsv"
    argv = ["qfi", "--r", "0.14", "--nu", "1.5", "--axis", "tau:0:8:5", "-o", str(target)]

    assert main(argv) == 0
    plain = target.read_bytes()
    assert main(["--cache", str(cache), "--jobs", "2", *argv]) == 0
    assert cache.exists()
    first = target.read_bytes()
    assert main(["--cache", str(cache), *argv]) == 0
    second = target.read_bytes()
    capsys.readouterr()

    assert plain == first == second
    assert b"--cache" not in plain


def test_figure_writes_panels(tmp_path, capsys):
    out_dir = tmp_path / "fig5"
    code, out, _ = _run(
        capsys, "figure", "fig5", "--nu", "1.5", "--axis", "r:0.05:1:4:log", "--output-dir", str(out_dir),
    )
    assert code == 0
    assert sorted(p.name for p in out_dir.iterdir()) == ["manifest.txt", "parallel.csv", "radial.csv", "tangential.csv"]
    assert len(_table(out)) == 3
    assert read_record(out_dir / "manifest.txt")["curves.nu"] == "1.5"


@pytest.mark.slow
def test_maximize_over_distance(tmp_path, capsys):
    record_path = tmp_path / "best.txt"
    code, out, _ = _run(
        capsys, "maximize", "--pol", "radial", "--nu", "1.5", "--tau", "4", "--theta", "0",
        "--axis", "r:0.01:10", "-o", str(record_path),
    )
    assert code == 0
    assert "best radial QFI" in out
    record = read_record(record_path)
    assert float(record["fisher"]) == pytest.approx(8.513, rel=2e-2)
    assert float(record["r_tilde"]) == pytest.approx(0.14, rel=1e-1)
    assert record["converged"] == "true"


@pytest.mark.slow
def test_maximize_parallel_to_stdout(capsys):
    code, out, _ = _run(
        capsys, "maximize", "--pol", "parallel", "--nu", "2", "--tau", "4", "--theta", "0", "--axis", "r:0.01:10",
    )
    assert code == 0
    record = {k: v for k, _, v in (line.partition("=") for line in out.splitlines() if not line.startswith("#"))}
    assert math.isfinite(float(record["fisher"]))
    assert float(record["fisher"]) > 0.0
