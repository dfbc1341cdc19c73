"""
Spacetime parameter conversion, thermal occupation and Kossakowski coefficients.

All rates are in units of gamma0; gamma0 itself is never evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from stringqfi.core.config import Polarization
from stringqfi.core.errors import DomainError
from stringqfi.response.evaluator import ResponseEvaluator, response_f_combined

HBAR = 1.0546e-34  # J s
K_BOLTZMANN = 1.38e-23  # J / K
EXPONENT_CUTOFF = 700.0


@dataclass(frozen=True)
class KossakowskiCoeffs:
    """Dissipator parameters A (a_coeff) and B (b_coeff) in units of gamma0."""
    a_coeff: float
    b_coeff: float

    def __post_init__(self) -> None:
        if not (self.a_coeff >= self.b_coeff >= 0.0):
            raise DomainError(
                f"Kossakowski coefficients need A >= B >= 0, got A={self.a_coeff}, B={self.b_coeff}."
            )


@dataclass(frozen=True)
class ThermalParams:
    """
    omega0      : transition angular frequency (rad / s)
    temperature : bath temperature (K)
    """
    omega0: float
    temperature: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega0) and self.omega0 > 0.0):
            raise DomainError(f"omega0 must be finite and > 0, got {self.omega0!r}.")
        if not (math.isfinite(self.temperature) and self.temperature >= 0.0):
            raise DomainError(f"temperature must be finite and >= 0, got {self.temperature!r}.")


def deficit_from_mass_density(g_mu: float) -> float:
    """nu = 1 / (1 - 4 G mu) for a string of dimensionless linear mass density G mu."""
    if not (math.isfinite(g_mu) and 0.0 <= g_mu < 0.25):
        raise DomainError(f"G mu must lie in [0, 1/4), got {g_mu!r}.")
    return 1.0 / (1.0 - 4.0 * g_mu)


def thermal_occupation(params: ThermalParams) -> float:
    """
    Bose-Einstein occupation N = 1 / (exp(hbar omega0 / k_B T) - 1).

    Exactly 0 at T = 0 and whenever the exponent exceeds 700.
    """
    if params.temperature == 0.0:
        return 0.0
    exponent = HBAR * params.omega0 / (K_BOLTZMANN * params.temperature)
    if exponent > EXPONENT_CUTOFF:
        return 0.0
    return 1.0 / math.expm1(exponent)


def kossakowski_vacuum(
    pol: Polarization,
    r_tilde: float,
    nu: float,
    evaluator: ResponseEvaluator | None = None,
) -> KossakowskiCoeffs:
    """A = B = f / 4, with f = sum_i zeta_i f_i."""
    f = response_f_combined(pol, r_tilde, nu, evaluator=evaluator).value
    quarter = 0.25 * f
    return KossakowskiCoeffs(quarter, quarter)


def kossakowski_thermal(
    pol: Polarization,
    r_tilde: float,
    nu: float,
    n_occ: float,
    evaluator: ResponseEvaluator | None = None,
) -> KossakowskiCoeffs:
    """A = (f / 4)(2N + 1), B = f / 4."""
    if not (math.isfinite(n_occ) and n_occ >= 0.0):
        raise DomainError(f"n_occ must be finite and >= 0, got {n_occ!r}.")
    vacuum = kossakowski_vacuum(pol, r_tilde, nu, evaluator=evaluator)
    return KossakowskiCoeffs(vacuum.a_coeff * (2.0 * n_occ + 1.0), vacuum.b_coeff)


def kossakowski_from_temperature(
    pol: Polarization,
    r_tilde: float,
    nu: float,
    params: ThermalParams,
    evaluator: ResponseEvaluator | None = None,
) -> KossakowskiCoeffs:
    return kossakowski_thermal(pol, r_tilde, nu, thermal_occupation(params), evaluator=evaluator)
