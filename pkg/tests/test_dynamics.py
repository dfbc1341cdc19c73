from __future__ import annotations

import math

import numpy as np
import pytest

from stringqfi.core.errors import DomainError
from stringqfi.dynamics import (
    BlochState,
    EvolutionParams,
    InitialState,
    bloch_evolve,
    bloch_evolve_with_dnu,
    lindblad_integrate,
    purity,
)
from stringqfi.response.kossakowski import KossakowskiCoeffs

THETAS = np.linspace(0.0, math.pi, 5)
RATES = (0.05, 0.3, 0.8, 1.5, 2.5)
TAUS = (0.0, 0.5, 2.0, 5.0, 10.0)


def test_initial_state_vector():
    state = InitialState(theta=math.pi / 2, phi=5 * math.pi / 2)
    assert state.phi == pytest.approx(math.pi / 2)
    np.testing.assert_allclose(state.bloch_vector(), [0.0, 1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("theta, phi", [(-0.1, 0.0), (math.pi + 0.1, 0.0), (1.0, math.inf)])
def test_initial_state_validation(theta, phi):
    with pytest.raises(DomainError):
        InitialState(theta, phi)


@pytest.mark.parametrize("kwargs", [{"tau_tilde": -1.0, "gamma_total": 1.0}, {"tau_tilde": 1.0, "gamma_total": 0.0},
                                    {"tau_tilde": 1.0, "gamma_total": 1.0, "b_over_a": 1.5}])
def test_evolution_params_validation(kwargs):
    with pytest.raises(DomainError):
        EvolutionParams(**kwargs)


def test_zero_time_returns_initial_state():
    init = InitialState(theta=1.1, phi=0.4)
    state = bloch_evolve(init, EvolutionParams(tau_tilde=0.0, gamma_total=0.7))
    np.testing.assert_allclose(state.vector, init.bloch_vector(), atol=1e-15)


@pytest.mark.parametrize("b_over_a", [1.0, 1.0 / 3.0])
def test_relaxes_to_equilibrium(b_over_a):
    state = bloch_evolve(InitialState(theta=0.3), EvolutionParams(tau_tilde=200.0, gamma_total=1.0, b_over_a=b_over_a))
    np.testing.assert_allclose(state.vector, [0.0, 0.0, -b_over_a], atol=1e-12)


def test_ground_state_is_stationary_in_vacuum():
    state = bloch_evolve(InitialState(theta=math.pi), EvolutionParams(tau_tilde=3.0, gamma_total=0.9))
    assert state.omega3 == pytest.approx(-1.0, abs=1e-15)
    assert purity(state) == pytest.approx(1.0, abs=1e-15)


def test_evolution_is_contractive():
    for theta in THETAS:
        for g in RATES:
            for tau in TAUS:
                state = bloch_evolve(InitialState(theta, 0.7), EvolutionParams(tau, g))
                assert purity(state) <= 1.0 + 1e-12


@pytest.mark.parametrize("b_over_a", [1.0, 0.5])
def test_nu_derivative_matches_finite_difference_in_rate(b_over_a):
    dg = -0.37
    h = 1e-6
    for theta in THETAS:
        for g in RATES:
            init = InitialState(theta, 0.2)
            params = EvolutionParams(tau_tilde=1.7, gamma_total=g, b_over_a=b_over_a)
            state = bloch_evolve_with_dnu(init, params, g, dg)
            plus = bloch_evolve(init, EvolutionParams(1.7, g + h, b_over_a)).vector
            minus = bloch_evolve(init, EvolutionParams(1.7, g - h, b_over_a)).vector
            np.testing.assert_allclose(state.dvector, dg * (plus - minus) / (2 * h), atol=1e-8)


def test_from_kossakowski():
    params = EvolutionParams.from_kossakowski(KossakowskiCoeffs(0.3, 0.1), tau_tilde=2.0)
    assert params.gamma_total == pytest.approx(1.2)
    assert params.b_over_a == pytest.approx(1.0 / 3.0)


def test_bloch_state_from_vectors():
    state = BlochState.from_vectors([0.1, 0.2, 0.3], [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(state.dvector, [1.0, 2.0, 3.0])


@pytest.mark.parametrize("b_over_a", [1.0, 1.0 / 3.0])
def test_master_equation_matches_closed_form(b_over_a):
    for theta in THETAS:
        for g in RATES:
            for tau in TAUS:
                init = InitialState(theta, 0.3)
                params = EvolutionParams(tau_tilde=tau, gamma_total=g, b_over_a=b_over_a)
                steps = max(1, math.ceil(tau / 0.0025))
                numeric = lindblad_integrate(init, params, steps).vector
                exact = bloch_evolve(init, params).vector
                assert np.max(np.abs(numeric - exact)) <= 1e-8


def test_master_equation_step_count_validation():
    with pytest.raises(DomainError):
        lindblad_integrate(InitialState(0.0), EvolutionParams(1.0, 1.0), steps=0)
