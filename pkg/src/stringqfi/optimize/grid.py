from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from stringqfi.core import math as smath
from stringqfi.core.config import DetectorConfig, Polarization
from stringqfi.core.errors import UsageError

VARIABLES = ("tau", "theta", "r", "nu")

# figure ranges: tau in [0, 20], r in [0.01, 10] (log), theta in [0, pi], nu in [1, 2.5];
# 400 log-spaced r samples resolve the oscillation lobes beyond r ~ 2
DEFAULT_AXES: dict[str, tuple[float, float, int, str]] = {
    "tau": (0.0, 20.0, 201, "linear"),
    "theta": (0.0, math.pi, 61, "linear"),
    "r": (0.01, 10.0, 400, "log"),
    "nu": (1.0, 2.5, 61, "linear"),
}


@dataclass(frozen=True)
class ScanAxis:
    """
    One free variable of a scan.

    name    : one of tau, theta, r, nu
    lo, hi  : inclusive bounds, lo < hi
    count   : number of samples, >= 2
    spacing : "linear" or "log" (log needs lo > 0)
    """
    name: str
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if self.name not in VARIABLES:
            raise UsageError(f"Unknown axis '{self.name}'. Available: {', '.join(VARIABLES)}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise UsageError(f"Axis '{self.name}' needs finite lo < hi, got lo={self.lo}, hi={self.hi}.")
        if self.count < 2:
            raise UsageError(f"Axis '{self.name}' needs count >= 2, got {self.count}.")
        if self.spacing not in ("linear", "log"):
            raise UsageError(f"Axis spacing must be 'linear' or 'log', got '{self.spacing}'.")
        if self.spacing == "log" and self.lo <= 0.0:
            raise UsageError(f"Log-spaced axis '{self.name}' needs lo > 0, got {self.lo}.")

    def values(self) -> np.ndarray:
        return smath.axis_values(self.lo, self.hi, self.count, self.spacing)

    def to_unit(self, x: float) -> float:
        """Refinement coordinate: log(x) on log axes, x otherwise."""
        return math.log(x) if self.spacing == "log" else float(x)

    def from_unit(self, u: float) -> float:
        x = math.exp(u) if self.spacing == "log" else float(u)
        return min(max(x, self.lo), self.hi)

    @classmethod
    def parse(cls, spec: str) -> ScanAxis:
        """
        Parse 'name:lo:hi[:count[:spacing]]'; missing count/spacing come from DEFAULT_AXES.
        """
        parts = spec.split(":")
        if len(parts) < 3 or len(parts) > 5:
            raise UsageError(f"Axis spec must be name:lo:hi[:count[:spacing]], got '{spec}'.")
        name = parts[0]
        if name not in DEFAULT_AXES:
            raise UsageError(f"Unknown axis '{name}'. Available: {', '.join(VARIABLES)}")
        _, _, default_count, default_spacing = DEFAULT_AXES[name]
        try:
            lo, hi = float(parts[1]), float(parts[2])
            count = int(parts[3]) if len(parts) > 3 else default_count
        except ValueError as exc:
            raise UsageError(f"Axis spec '{spec}' is not numeric.") from exc
        spacing = parts[4] if len(parts) > 4 else default_spacing
        return cls(name, lo, hi, count, spacing)

    @classmethod
    def default(cls, name: str, count: int | None = None) -> ScanAxis:
        lo, hi, default_count, spacing = DEFAULT_AXES[name]
        return cls(name, lo, hi, count or default_count, spacing)


@dataclass
class ScanGrid:
    """
    A rectangular scan over the free axes with every other variable fixed.

    axes         : free variables, first axis varies slowest (row-major)
    fixed        : values of the remaining variables among tau, theta, r, nu
    polarization : polarization weights of the detector
    n_occ, phi   : thermal occupation and initial phase shared by all cells
    """
    axes: list[ScanAxis]
    fixed: dict[str, float] = field(default_factory=dict)
    polarization: Polarization = field(default_factory=lambda: Polarization.preset("radial"))
    n_occ: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise UsageError(f"Duplicate scan axes: {names}.")
        both = set(names) & set(self.fixed)
        if both:
            raise UsageError(f"Variables both scanned and fixed: {sorted(both)}.")
        unknown = set(self.fixed) - set(VARIABLES)
        if unknown:
            raise UsageError(f"Unknown fixed variables: {sorted(unknown)}.")
        missing = set(VARIABLES) - set(names) - set(self.fixed)
        if missing:
            raise UsageError(f"Variables neither scanned nor fixed: {sorted(missing)}.")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(axis.count for axis in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64)) if self.axes else 1

    def config_at(self, values: dict[str, float]) -> DetectorConfig:
        merged = {**self.fixed, **values}
        return DetectorConfig(
            polarization=self.polarization,
            r_tilde=float(merged["r"]),
            nu=float(merged["nu"]),
            tau_tilde=float(merged["tau"]),
            theta=float(merged["theta"]),
            phi=self.phi,
            n_occ=self.n_occ,
        )

    def points(self) -> Iterator[dict[str, float]]:
        """Variable bindings of every cell in row-major order."""
        grids = [axis.values() for axis in self.axes]
        names = [axis.name for axis in self.axes]
        for combo in itertools.product(*grids):
            yield {name: float(v) for name, v in zip(names, combo)}
