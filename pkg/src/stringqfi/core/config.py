from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar

from stringqfi.core.errors import DomainError, UsageError


@dataclass
class QuadratureConfig:
    """
    Settings for the singular eta-quadrature and the mode-sum truncation.

    Defaults:
      - node counts double from min_nodes until the refinement gap is below
        rtol * max(1, value), capped at max_nodes
      - contract_tol is the error budget a returned ResponseValue must meet
      - mode_padding is the constant term of M = ceil((r + 10 r^(1/3) + pad) / nu)
    """
    min_nodes: int = 16
    max_nodes: int = 512
    rtol: float = 1e-11
    contract_tol: float = 1e-8
    mode_padding: float = 25.0

    def __post_init__(self) -> None:
        if self.min_nodes < 2 or self.max_nodes < self.min_nodes:
            raise DomainError(
                f"Invalid node schedule: min_nodes={self.min_nodes}, max_nodes={self.max_nodes}."
            )
        if not (0.0 < self.rtol <= self.contract_tol):
            raise DomainError(
                f"Require 0 < rtol <= contract_tol (got rtol={self.rtol}, contract_tol={self.contract_tol})."
            )


@dataclass
class DerivativeConfig:
    """
    Finite-difference settings for d f / d nu.

    step       : base step h (the Richardson partner uses h / 2)
    richardson : combine the h and h / 2 estimates to cancel the O(h^2) term
    """
    step: float = 1e-3
    richardson: bool = True

    def __post_init__(self) -> None:
        if not (0.0 < self.step < 0.1):
            raise DomainError(f"Derivative step must lie in (0, 0.1), got {self.step}.")


@dataclass
class ResponseConfig:
    """
    Top-level configuration of the response-function evaluator.

    quadrature     : eta-quadrature and mode-sum settings
    derivative     : finite-difference settings for d f / d nu
    r_max          : upper end of the validated r_tilde range (0, r_max]
    nu_min, nu_max : validated deficit-parameter range
    scheme_version : tag recorded in cache keys and manifests
    """
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    derivative: DerivativeConfig = field(default_factory=DerivativeConfig)
    r_max: float = 30.0
    nu_min: float = 1.0
    nu_max: float = 3.0
    scheme_version: str = "gl-sin-v1"


@dataclass(frozen=True)
class Polarization:
    """
    Relative polarizabilities along the radial, tangential and string-parallel
    directions. The weights are fractions of the squared dipole element and sum to 1.
    """
    zeta_r: float
    zeta_alpha: float
    zeta_z: float

    PRESETS: ClassVar[dict[str, tuple[float, float, float]]] = {
        "radial": (1.0, 0.0, 0.0),
        "tangential": (0.0, 1.0, 0.0),
        "parallel": (0.0, 0.0, 1.0),
    }
    ALIASES: ClassVar[dict[str, str]] = {
        "r": "radial",
        "alpha": "tangential",
        "a": "tangential",
        "t": "tangential",
        "z": "parallel",
        "p": "parallel",
    }

    def __post_init__(self) -> None:
        weights = self.weights
        if not all(math.isfinite(w) and 0.0 <= w <= 1.0 for w in weights):
            raise DomainError(f"Polarization weights must lie in [0, 1], got {weights}.")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise DomainError(f"Polarization weights must sum to 1, got {sum(weights)!r}.")

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.zeta_r, self.zeta_alpha, self.zeta_z)

    @property
    def label(self) -> str:
        for name, preset in self.PRESETS.items():
            if self.weights == preset:
                return name
        return "mixed({:.17g},{:.17g},{:.17g})".format(*self.weights)

    @classmethod
    def preset(cls, name: str) -> Polarization:
        key = cls.ALIASES.get(name.lower(), name.lower())
        if key not in cls.PRESETS:
            options = ", ".join(sorted([*cls.PRESETS, *cls.ALIASES]))
            raise UsageError(f"Unknown polarization '{name}'. Available: {options}")
        return cls(*cls.PRESETS[key])

    @classmethod
    def from_spec(cls, spec: str) -> Polarization:
        """Parse a preset name/alias or an explicit 'zr,za,zz' triple."""
        if "," not in spec:
            return cls.preset(spec)
        parts = spec.split(",")
        if len(parts) != 3:
            raise UsageError(f"Polarization triple needs three weights, got '{spec}'.")
        try:
            weights = [float(p) for p in parts]
        except ValueError as exc:
            raise UsageError(f"Polarization triple is not numeric: '{spec}'.") from exc
        return cls(*weights)


@dataclass
class DetectorConfig:
    """
    A single parameter point of the static detector.

    polarization : relative polarizabilities
    r_tilde      : distance to the string in units of c / omega0
    nu           : deficit-angle parameter
    tau_tilde    : evolution time in units of 1 / gamma0
    theta, phi   : initial-state weight and phase (radians); phi is wrapped into [0, 2 pi)
    n_occ        : thermal occupation number (0 for the vacuum)
    omega_eff    : effective level spacing in units of gamma0 (phase only)
    """
    polarization: Polarization
    r_tilde: float
    nu: float
    tau_tilde: float
    theta: float = 0.0
    phi: float = 0.0
    n_occ: float = 0.0
    omega_eff: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}.")
        if not (math.isfinite(self.tau_tilde) and self.tau_tilde >= 0.0):
            raise DomainError(f"tau_tilde must be finite and >= 0, got {self.tau_tilde}.")
        if not (math.isfinite(self.n_occ) and self.n_occ >= 0.0):
            raise DomainError(f"n_occ must be finite and >= 0, got {self.n_occ}.")
        self.phi = math.fmod(self.phi, 2.0 * math.pi)
        if self.phi < 0.0:
            self.phi += 2.0 * math.pi

    def as_point(self) -> dict[str, Any]:
        return {
            "pol": self.polarization.label,
            "r_tilde": self.r_tilde,
            "nu": self.nu,
            "tau": self.tau_tilde,
            "theta": self.theta,
        }


@dataclass
class ScanConfig:
    """
    Execution settings for grid scans.

    jobs      : worker threads for response evaluations (results merge by cell index)
    max_cells : guard on the total number of grid cells
    """
    jobs: int = 1
    max_cells: int = 10**7

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise UsageError(f"jobs must be >= 1, got {self.jobs}.")


@dataclass
class RunConfig:
    """
    Everything one CLI invocation needs.

    command      : sub-command name (response, qfi, figure, maximize)
    params       : named parameter bindings after flags and config file are merged
    polarization : preset name or explicit triple, if the command takes one
    output_path  : CSV / record destination (None writes to stdout)
    cache_path   : response cache file, if enabled
    jobs         : worker threads
    tolerances   : overrides for QuadratureConfig / DerivativeConfig / maximize tol
    argv         : the reproducible part of the command line, echoed in CSV headers
    """
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    polarization: str | None = None
    output_path: Path | None = None
    cache_path: Path | None = None
    jobs: int = 1
    tolerances: dict[str, float] = field(default_factory=dict)
    argv: list[str] = field(default_factory=list)

    def response_config(self) -> ResponseConfig:
        quad_keys = {"quad_rtol": "rtol", "max_nodes": "max_nodes", "min_nodes": "min_nodes"}
        quad = {dst: self.tolerances[src] for src, dst in quad_keys.items() if src in self.tolerances}
        for key in ("max_nodes", "min_nodes"):
            if key in quad:
                quad[key] = int(quad[key])
        deriv = {}
        if "fd_step" in self.tolerances:
            deriv["step"] = self.tolerances["fd_step"]
        return ResponseConfig(
            quadrature=QuadratureConfig(**quad),
            derivative=DerivativeConfig(**deriv),
        )
