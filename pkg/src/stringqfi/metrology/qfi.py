"""
Quantum Fisher information for the deficit-angle parameter nu.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from stringqfi.core import math as smath
from stringqfi.core.config import DetectorConfig
from stringqfi.core.errors import DomainError, InvalidStateError
from stringqfi.dynamics.bloch import BlochState, EvolutionParams, InitialState, bloch_evolve_with_dnu
from stringqfi.response.asymptotic import response_asymptotic_dnu, response_asymptotic_small_r
from stringqfi.response.base import ResponseComponent
from stringqfi.response.cache import ResponseValue
from stringqfi.response.evaluator import ResponseEvaluator, default_evaluator

PURE_STATE_THRESHOLD = 1e-9


@dataclass(frozen=True)
class QfiResult:
    """
    fisher      : QFI for nu (dimensionless, >= 0)
    point       : the parameter point it was evaluated at
    crlb_single : single-shot variance bound 1 / fisher (inf when fisher = 0)
    f, df_dnu   : the combined response value and its nu-derivative used
    """
    fisher: float
    point: DetectorConfig
    crlb_single: float
    f: float = float("nan")
    df_dnu: float = float("nan")

    def to_row(self) -> dict[str, Any]:
        row = self.point.as_point()
        row.update({"fisher": self.fisher, "crlb_single": self.crlb_single})
        return row


def qfi_bloch(state: BlochState) -> float:
    """
    F = |d omega|^2 + (omega . d omega)^2 / (1 - |omega|^2), or |d omega|^2 for
    |omega| >= 1 - 1e-9 (the mixed-state term is 0 / 0 there).
    """
    omega, d_omega = state.vector, state.dvector
    norm = float(np.linalg.norm(omega))
    if norm > 1.0 + PURE_STATE_THRESHOLD:
        raise InvalidStateError(f"Bloch vector length {norm!r} exceeds 1.")
    fisher = float(d_omega @ d_omega)
    if norm >= 1.0 - PURE_STATE_THRESHOLD:
        return fisher
    return fisher + float(omega @ d_omega) ** 2 / (1.0 - norm * norm)


def _check_closed_form(f: float, tau_tilde: float) -> None:
    if not (math.isfinite(f) and f > 0.0):
        raise DomainError(f"f must be finite and > 0, got {f!r}.")
    if not (math.isfinite(tau_tilde) and tau_tilde >= 0.0):
        raise DomainError(f"tau_tilde must be finite and >= 0, got {tau_tilde!r}.")


def _inverse_expm1(x: float) -> float:
    # 1 / (e^x - 1) without overflow for large x
    return math.exp(-x) / -math.expm1(-x)


def qfi_closed_form(f: float, df_dnu: float, tau_tilde: float, theta: float) -> float:
    """
    F = e^{-f tau} (df tau)^2 cos^2(theta / 2) (2 e^{f tau} - 1 + cos theta) / (2 (e^{f tau} - 1)).

    Evaluated as (df tau)^2 cos^2(theta / 2) (2 - e^{-f tau}(1 - cos theta)) / (2 (e^{f tau} - 1)),
    with cos^2(theta / 2) = (1 + cos theta) / 2 so that theta = pi gives exactly 0.
    """
    _check_closed_form(f, tau_tilde)
    if tau_tilde == 0.0:
        return 0.0
    x = f * tau_tilde
    c = math.cos(theta)
    half_cos_sq = 0.5 * (1.0 + c)
    bracket = 2.0 - math.exp(-x) * (1.0 - c)
    return (df_dnu * tau_tilde) ** 2 * half_cos_sq * bracket * 0.5 * _inverse_expm1(x)


def dqfi_dtheta(f: float, df_dnu: float, tau_tilde: float, theta: float) -> float:
    """
    dF / dtheta = -(df tau)^2 (e^{f tau} + cos theta) sin theta / (2 e^{f tau} (e^{f tau} - 1)).

    Non-positive on [0, pi], vanishing at both ends.
    """
    _check_closed_form(f, tau_tilde)
    if tau_tilde == 0.0 or theta == 0.0 or theta == math.pi:
        return 0.0
    x = f * tau_tilde
    ratio = (1.0 + math.cos(theta) * math.exp(-x)) * _inverse_expm1(x)
    return -0.5 * (df_dnu * tau_tilde) ** 2 * math.sin(theta) * ratio


def qfi_thermal(
    f: float,
    df_dnu: float,
    n_occ: float,
    tau_tilde: float,
    theta: float,
    phi: float = 0.0,
    omega_eff: float = 1.0,
) -> float:
    """
    QFI in a thermal bath via the Bloch path: g = f (2N + 1), B / A = 1 / (2N + 1).

    Reduces to ``qfi_closed_form`` at n_occ = 0.
    """
    _check_closed_form(f, tau_tilde)
    if not (math.isfinite(n_occ) and n_occ >= 0.0):
        raise DomainError(f"n_occ must be finite and >= 0, got {n_occ!r}.")
    scale = 2.0 * n_occ + 1.0
    g = f * scale
    params = EvolutionParams(tau_tilde=tau_tilde, gamma_total=g, b_over_a=1.0 / scale, omega_eff=omega_eff)
    state = bloch_evolve_with_dnu(InitialState(theta, phi), params, g, df_dnu * scale)
    return qfi_bloch(state)


def qfi_small_r(
    component: str | ResponseComponent,
    r_tilde: float,
    nu: float,
    tau_tilde: float,
    theta: float,
    with_zero_mode: bool = False,
) -> float:
    """QFI with the small-r asymptotic f and its analytic nu-derivative."""
    f = response_asymptotic_small_r(component, r_tilde, nu, with_zero_mode)
    df = response_asymptotic_dnu(component, r_tilde, nu, with_zero_mode)
    return qfi_closed_form(f, df, tau_tilde, theta)


def crlb(fisher: float, n_measurements: int = 1) -> float:
    """Cramer-Rao variance bound 1 / (N F); infinite when F = 0."""
    if int(n_measurements) != n_measurements or n_measurements < 1:
        raise DomainError(f"n_measurements must be a positive integer, got {n_measurements!r}.")
    if not (fisher >= 0.0):
        raise DomainError(f"fisher must be >= 0, got {fisher!r}.")
    if fisher == 0.0:
        return math.inf
    return 1.0 / (n_measurements * fisher)


def qfi_at(config: DetectorConfig, evaluator: ResponseEvaluator | None = None) -> QfiResult:
    """
    Compose the response evaluation with the QFI formula at one parameter point.
    """
    ev = evaluator or default_evaluator()
    response = ev.combined(config.polarization, config.r_tilde, config.nu, with_derivative=True)
    return qfi_from_response(config, response)


def qfi_from_response(config: DetectorConfig, response: ResponseValue) -> QfiResult:
    """QFI at ``config`` from an already evaluated combined response (with derivative)."""
    if config.n_occ == 0.0:
        fisher = qfi_closed_form(response.value, response.dvalue_dnu, config.tau_tilde, config.theta)
    else:
        fisher = qfi_thermal(
            response.value,
            response.dvalue_dnu,
            config.n_occ,
            config.tau_tilde,
            config.theta,
            config.phi,
            config.omega_eff,
        )
    return QfiResult(
        fisher=fisher,
        point=config,
        crlb_single=crlb(fisher),
        f=response.value,
        df_dnu=response.dvalue_dnu,
    )


def unimodality_report(
    f: float,
    df_dnu: float,
    tau_values: Sequence[float],
    theta: float = 0.0,
) -> tuple[bool, int]:
    """
    Check that F(tau) rises to a single maximum and then decreases on the given grid.

    A violation is reported with a RuntimeWarning rather than an exception.
    """
    values = [qfi_closed_form(f, df_dnu, tau, theta) for tau in tau_values]
    unimodal, peak = smath.is_unimodal(values)
    if not unimodal:
        warnings.warn(
            f"QFI is not unimodal in tau for f={f!r}, df_dnu={df_dnu!r}, theta={theta!r} "
            f"(peak index {peak}).",
            RuntimeWarning,
            stacklevel=2,
        )
    return unimodal, peak
