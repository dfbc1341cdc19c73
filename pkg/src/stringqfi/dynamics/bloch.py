"""
Closed-form Bloch-vector evolution of the two-level detector.

Rate convention: transverse components decay as exp(-g tau / 2), the
longitudinal one as exp(-g tau), with g = gamma_total = 4 A in units of gamma0
(g = f in the vacuum). Equilibrium is omega_3 -> -B / A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from stringqfi.core.errors import DomainError
from stringqfi.response.kossakowski import KossakowskiCoeffs


@dataclass(frozen=True)
class InitialState:
    """
    |psi(0)> = cos(theta / 2)|+> + exp(i phi) sin(theta / 2)|->.

    theta in [0, pi]; phi is wrapped into [0, 2 pi).
    """
    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta!r}.")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}.")
        wrapped = math.fmod(self.phi, 2.0 * math.pi)
        if wrapped < 0.0:
            wrapped += 2.0 * math.pi
        object.__setattr__(self, "phi", wrapped)

    def bloch_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class BlochState:
    """Bloch components omega_k and their nu-derivatives d_omega_k."""
    omega1: float
    omega2: float
    omega3: float
    d_omega1: float = 0.0
    d_omega2: float = 0.0
    d_omega3: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.omega1, self.omega2, self.omega3])

    @property
    def dvector(self) -> np.ndarray:
        return np.array([self.d_omega1, self.d_omega2, self.d_omega3])

    @classmethod
    def from_vectors(cls, omega, d_omega=(0.0, 0.0, 0.0)) -> BlochState:
        o = [float(v) for v in omega]
        d = [float(v) for v in d_omega]
        return cls(o[0], o[1], o[2], d[0], d[1], d[2])


@dataclass(frozen=True)
class EvolutionParams:
    """
    tau_tilde   : gamma0 * tau
    gamma_total : longitudinal decay rate in units of gamma0 (f in the vacuum)
    b_over_a    : B / A; 1 in the vacuum, 1 / (2N + 1) in a thermal bath
    omega_eff   : effective level spacing, treated as independent of nu
    """
    tau_tilde: float
    gamma_total: float
    b_over_a: float = 1.0
    omega_eff: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau_tilde) and self.tau_tilde >= 0.0):
            raise DomainError(f"tau_tilde must be finite and >= 0, got {self.tau_tilde!r}.")
        if not (math.isfinite(self.gamma_total) and self.gamma_total > 0.0):
            raise DomainError(f"gamma_total must be finite and > 0, got {self.gamma_total!r}.")
        if not (0.0 < self.b_over_a <= 1.0):
            raise DomainError(f"b_over_a must lie in (0, 1], got {self.b_over_a!r}.")

    @classmethod
    def from_kossakowski(cls, coeffs: KossakowskiCoeffs, tau_tilde: float, omega_eff: float = 1.0) -> EvolutionParams:
        return cls(
            tau_tilde=tau_tilde,
            gamma_total=4.0 * coeffs.a_coeff,
            b_over_a=coeffs.b_coeff / coeffs.a_coeff,
            omega_eff=omega_eff,
        )


def bloch_evolve(init: InitialState, params: EvolutionParams) -> BlochState:
    g, tau, b = params.gamma_total, params.tau_tilde, params.b_over_a
    angle = params.omega_eff * tau + init.phi
    transverse = math.sin(init.theta) * math.exp(-0.5 * g * tau)
    decay = math.exp(-g * tau)
    return BlochState(
        omega1=transverse * math.cos(angle),
        omega2=transverse * math.sin(angle),
        omega3=math.cos(init.theta) * decay - b * (1.0 - decay),
    )


def bloch_evolve_with_dnu(init: InitialState, params: EvolutionParams, g: float, dg_dnu: float) -> BlochState:
    """
    Bloch vector plus its nu-derivative, carried entirely by g (Omega and B / A
    do not depend on nu):

        d omega_perp = -(tau dg / 2) omega_perp
        d omega_3    = -tau dg (cos theta + B / A) exp(-g tau)
    """
    if not (math.isfinite(g) and g > 0.0):
        raise DomainError(f"g must be finite and > 0, got {g!r}.")
    params = replace(params, gamma_total=g)
    state = bloch_evolve(init, params)
    tau = params.tau_tilde
    half_rate = -0.5 * tau * dg_dnu
    return replace(
        state,
        d_omega1=half_rate * state.omega1,
        d_omega2=half_rate * state.omega2,
        d_omega3=-tau * dg_dnu * (math.cos(init.theta) + params.b_over_a) * math.exp(-g * tau),
    )


def purity(state: BlochState) -> float:
    """Length |omega| of the Bloch vector (1 for pure states)."""
    return float(np.linalg.norm(state.vector))
