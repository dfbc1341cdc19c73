"""
Direct integration of the Born-Markov master equation

    d rho / d tau = -i [H_eff, rho] + (1/2) sum_ij a_ij (2 s_j rho s_i - s_i s_j rho - rho s_i s_j)

with a_ij = A delta_ij - i B eps_ij3 - A delta_i3 delta_j3, H_eff = Omega s_3 / 2.

Used as an independent check of the closed form in ``bloch``: working the
dissipator through gives transverse rate 2A, longitudinal rate 4A and
equilibrium omega_3 = -B / A, so A = gamma_total / 4 and B = b_over_a * A.
"""
from __future__ import annotations

import numpy as np

from stringqfi.core.errors import DomainError
from stringqfi.dynamics.bloch import BlochState, EvolutionParams, InitialState

IDENTITY = np.eye(2, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def kossakowski_matrix(a_coeff: float, b_coeff: float) -> np.ndarray:
    return np.array(
        [
            [a_coeff, -1j * b_coeff, 0.0],
            [1j * b_coeff, a_coeff, 0.0],
            [0.0, 0.0, 0.0],
        ],
        dtype=complex,
    )


def liouvillian(omega_eff: float, a_ij: np.ndarray) -> np.ndarray:
    """
    4 x 4 superoperator acting on the row-major vectorisation of rho
    (vec(X rho Y) = kron(X, Y.T) vec(rho)).
    """
    h = 0.5 * omega_eff * PAULI[2]
    sup = -1j * (np.kron(h, IDENTITY) - np.kron(IDENTITY, h.T))
    for i in range(3):
        for j in range(3):
            a = a_ij[i, j]
            if a == 0:
                continue
            si, sj = PAULI[i], PAULI[j]
            sisj = si @ sj
            sup += 0.5 * a * (
                2.0 * np.kron(sj, si.T) - np.kron(sisj, IDENTITY) - np.kron(IDENTITY, sisj.T)
            )
    return sup


def _rk4_step(sup: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    k1 = sup @ v
    k2 = sup @ (v + 0.5 * dt * k1)
    k3 = sup @ (v + 0.5 * dt * k2)
    k4 = sup @ (v + dt * k3)
    return v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def density_matrix(omega: np.ndarray) -> np.ndarray:
    return 0.5 * (IDENTITY + sum(w * s for w, s in zip(omega, PAULI)))


def bloch_components(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ s).real for s in PAULI])


def lindblad_integrate(init: InitialState, params: EvolutionParams, steps: int) -> BlochState:
    """
    Fixed-step RK4 from tau = 0 to params.tau_tilde.

    No convergence check is made; callers needing tighter agreement pass more steps.
    """
    if int(steps) != steps or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps!r}.")
    a_coeff = 0.25 * params.gamma_total
    sup = liouvillian(params.omega_eff, kossakowski_matrix(a_coeff, params.b_over_a * a_coeff))

    v = density_matrix(init.bloch_vector()).reshape(-1)
    if params.tau_tilde == 0.0:
        return BlochState.from_vectors(bloch_components(v.reshape(2, 2)))
    dt = params.tau_tilde / int(steps)
    for _ in range(int(steps)):
        v = _rk4_step(sup, v, dt)
    return BlochState.from_vectors(bloch_components(v.reshape(2, 2)))
