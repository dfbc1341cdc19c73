from __future__ import annotations

from stringqfi.core.config import DetectorConfig, Polarization
from stringqfi.metrology.qfi import qfi_at
from stringqfi.optimize.grid import ScanAxis, ScanGrid
from stringqfi.optimize.maximize import maximize
from stringqfi.response.evaluator import response_f


def main() -> None:
    # Minkowski limit: every component equals 1 at nu = 1
    for component in ("radial", "tangential", "parallel"):
        print(component, response_f(component, 0.5, 1.0).value)

    config = DetectorConfig(
        polarization=Polarization.preset("radial"),
        r_tilde=0.14,
        nu=1.5,
        tau_tilde=4.0,
        theta=0.0,
    )
    result = qfi_at(config)
    print(f"F = {result.fisher:.6g}, 1/F = {result.crlb_single:.6g}")

    grid = ScanGrid(
        axes=[ScanAxis("r", 0.01, 10.0, 400, "log")],
        fixed={"nu": 1.5, "tau": 4.0, "theta": 0.0},
        polarization=Polarization.preset("radial"),
    )
    best = maximize(grid, tol=1e-4)
    print(best.to_record())


if __name__ == "__main__":
    main()
