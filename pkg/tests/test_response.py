from __future__ import annotations

import math

import pytest

from stringqfi.core.config import Polarization, QuadratureConfig, ResponseConfig
from stringqfi.core.errors import ConvergenceError, DomainError, UsageError
from stringqfi.response import (
    KossakowskiCoeffs,
    ResponseCache,
    ResponseEvaluator,
    ResponseValue,
    ThermalParams,
    deficit_from_mass_density,
    get_component,
    kossakowski_from_temperature,
    kossakowski_thermal,
    kossakowski_vacuum,
    response_asymptotic_dnu,
    response_asymptotic_small_r,
    response_table,
    thermal_occupation,
)

COMPONENTS = ("radial", "tangential", "parallel")


@pytest.mark.parametrize("component", COMPONENTS)
@pytest.mark.parametrize("r_tilde", [0.1, 0.5, 1.0, 3.0, 10.0])
def test_flat_space_limit(evaluator, component, r_tilde):
    value = evaluator.evaluate(component, r_tilde, 1.0)
    assert value.value == pytest.approx(1.0, abs=1e-6)
    assert value.error <= 2e-8


@pytest.mark.parametrize("r_tilde", [0.05, 0.5, 2.0, 7.0, 20.0])
def test_transverse_components_coincide_in_flat_space(evaluator, r_tilde):
    radial = evaluator.evaluate("radial", r_tilde, 1.0).value
    tangential = evaluator.evaluate("tangential", r_tilde, 1.0).value
    assert radial == pytest.approx(tangential, rel=0.0, abs=1e-10)


@pytest.mark.parametrize("component", ["radial", "tangential"])
@pytest.mark.parametrize("nu", [1.2, 1.5])
def test_transverse_small_r_matches_leading_band(evaluator, component, nu):
    r_tilde = 1e-3
    full = evaluator.evaluate(component, r_tilde, nu).value
    assert full == pytest.approx(response_asymptotic_small_r(component, r_tilde, nu), rel=1e-2)


@pytest.mark.parametrize("component, ratio", [("radial", 4.0 / 3.0), ("tangential", 8.0 / 3.0)])
def test_transverse_small_r_at_nu_two_needs_zero_mode(evaluator, component, ratio):
    r_tilde = 1e-3
    full = evaluator.evaluate(component, r_tilde, 2.0).value
    plain = response_asymptotic_small_r(component, r_tilde, 2.0)
    with_zero = response_asymptotic_small_r(component, r_tilde, 2.0, with_zero_mode=True)
    assert full == pytest.approx(with_zero, rel=1e-2)
    assert full / plain == pytest.approx(ratio, rel=1e-2)


@pytest.mark.parametrize("nu", [1.2, 1.5, 2.0])
def test_parallel_small_r_is_nu(evaluator, nu):
    value = evaluator.evaluate("parallel", 1e-3, nu).value
    assert value == pytest.approx(nu, rel=1e-2)
    assert response_asymptotic_small_r("z", 1e-3, nu) == nu


def test_parallel_example_value(evaluator):
    assert evaluator.evaluate("z", 0.001, 1.5).value == pytest.approx(1.5, rel=1e-3)


@pytest.mark.parametrize("component", ["radial", "tangential", "parallel"])
@pytest.mark.parametrize("nu", [1.2, 1.5])
def test_derivative_matches_small_r_formula(evaluator, component, nu):
    r_tilde = 1e-3
    numeric = evaluator.derivative(component, r_tilde, nu)
    analytic = response_asymptotic_dnu(component, r_tilde, nu)
    assert numeric == pytest.approx(analytic, rel=1e-2)


def test_asymptotic_derivative_matches_finite_difference():
    h = 1e-6
    for component in COMPONENTS:
        for nu in (1.3, 1.7, 2.2):
            fd = (
                response_asymptotic_small_r(component, 0.05, nu + h)
                - response_asymptotic_small_r(component, 0.05, nu - h)
            ) / (2 * h)
            assert response_asymptotic_dnu(component, 0.05, nu) == pytest.approx(fd, rel=1e-6)


def test_richardson_levels_agree(evaluator):
    coarse, fine = evaluator.derivative_pair("radial", 0.5, 1.5)
    assert coarse == pytest.approx(fine, rel=1e-4)
    assert evaluator.derivative("radial", 0.5, 1.5) == pytest.approx(fine, rel=1e-4)


@pytest.mark.parametrize("nu", [1.0, 3.0])
def test_derivative_at_range_bounds_is_finite(evaluator, nu):
    value = evaluator.evaluate("tangential", 0.5, nu, with_derivative=True)
    assert value.has_derivative
    assert math.isfinite(value.dvalue_dnu)


def test_values_are_positive_in_range(evaluator):
    for component in COMPONENTS:
        for r_tilde in (0.01, 0.3, 2.29, 8.0, 30.0):
            for nu in (1.0, 1.8, 2.5, 3.0):
                assert evaluator.evaluate(component, r_tilde, nu).value > 0.0


def test_combined_is_weighted_sum(evaluator):
    pol = Polarization(0.25, 0.5, 0.25)
    combined = evaluator.combined(pol, 0.7, 1.6, with_derivative=True)
    parts = [evaluator.evaluate(c, 0.7, 1.6, with_derivative=True) for c in COMPONENTS]
    assert combined.value == pytest.approx(sum(w * p.value for w, p in zip(pol.weights, parts)), rel=1e-14)
    assert combined.dvalue_dnu == pytest.approx(
        sum(w * p.dvalue_dnu for w, p in zip(pol.weights, parts)), rel=1e-12
    )


@pytest.mark.parametrize("r_tilde, nu", [(0.0, 1.5), (-1.0, 1.5), (31.0, 1.5), (1.0, 0.9), (1.0, 3.5), (math.nan, 1.5)])
def test_out_of_range_inputs(evaluator, r_tilde, nu):
    with pytest.raises(DomainError):
        evaluator.evaluate("radial", r_tilde, nu)


def test_node_budget_exhaustion_raises_convergence_error():
    config = ResponseConfig(quadrature=QuadratureConfig(min_nodes=16, max_nodes=16))
    with pytest.raises(ConvergenceError) as info:
        ResponseEvaluator(config).evaluate("radial", 5.0, 1.5)
    assert math.isfinite(info.value.partial_value)


def test_component_aliases():
    assert get_component("r").name == "radial"
    assert get_component("alpha").name == "tangential"
    assert get_component("Z").name == "parallel"
    with pytest.raises(UsageError):
        get_component("x")


def test_response_table_columns(evaluator):
    table = response_table("radial", [0.1, 0.2], [1.2, 1.4, 1.6], evaluator=evaluator)
    assert list(table.columns) == ["component", "r_tilde", "nu", "f", "df_dnu", "trunc_error", "quad_error"]
    assert len(table) == 6
    assert list(table["nu"][:3]) == [1.2, 1.4, 1.6]


def test_cache_is_transparent(evaluator, cached_evaluator):
    plain = evaluator.evaluate("tangential", 0.4, 1.7, with_derivative=True)
    first = cached_evaluator.evaluate("tangential", 0.4, 1.7, with_derivative=True)
    second = cached_evaluator.evaluate("tangential", 0.4, 1.7, with_derivative=True)
    assert plain == first == second
    assert cached_evaluator.cache.hits >= 1


def test_cache_file_round_trip(tmp_path, cached_evaluator):
    values = [cached_evaluator.evaluate(c, 0.4, 1.7, with_derivative=True) for c in COMPONENTS]
    cached_evaluator.cache.save()
    reloaded = ResponseCache(tmp_path / "responses.tsv")
    assert len(reloaded) == len(cached_evaluator.cache)
    scheme = cached_evaluator.config.scheme_version
    for component, value in zip(COMPONENTS, values):
        assert reloaded.get(ResponseCache.key(component, 0.4, 1.7, scheme), need_derivative=True) == value


def test_cache_keeps_derivative_entries():
    cache = ResponseCache()
    key = ResponseCache.key("radial", 1.0, 1.5, "v")
    full = ResponseValue(0.5, -0.1, has_derivative=True)
    cache.put(key, full)
    cache.put(key, ResponseValue(0.5))
    assert cache.get(key, need_derivative=True) == full


def test_cache_ignores_unknown_file_version(tmp_path):
    path = tmp_path / "old.tsv"
    path.write_text("# some other cache\ncomponent\tr_tilde\n", encoding="utf-8")
    assert len(ResponseCache(path)) == 0


def test_deficit_from_mass_density():
    assert deficit_from_mass_density(0.0) == 1.0
    assert deficit_from_mass_density(0.125) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        deficit_from_mass_density(0.25)


def test_cold_bath_has_no_thermal_occupation():
    assert thermal_occupation(ThermalParams(omega0=1e15, temperature=2.76)) == 0.0
    assert thermal_occupation(ThermalParams(omega0=1e15, temperature=0.0)) == 0.0


def test_occupation_is_bose_einstein():
    params = ThermalParams(omega0=1e13, temperature=300.0)
    x = 1.0546e-34 * 1e13 / (1.38e-23 * 300.0)
    assert thermal_occupation(params) == pytest.approx(1.0 / math.expm1(x), rel=1e-14)


def test_thermal_coefficients(evaluator, radial):
    vacuum = kossakowski_vacuum(radial, 0.3, 1.5, evaluator=evaluator)
    assert vacuum.a_coeff == vacuum.b_coeff
    n_zero = thermal_occupation(ThermalParams(omega0=1e15, temperature=2.76))
    assert kossakowski_thermal(radial, 0.3, 1.5, n_zero, evaluator=evaluator) == vacuum
    hot = kossakowski_thermal(radial, 0.3, 1.5, 1.0, evaluator=evaluator)
    assert hot.a_coeff == 3.0 * hot.b_coeff
    assert hot.b_coeff == vacuum.b_coeff
    cold = kossakowski_from_temperature(radial, 0.3, 1.5, ThermalParams(1e15, 2.76), evaluator=evaluator)
    assert cold == vacuum


def test_kossakowski_ordering_is_validated():
    with pytest.raises(DomainError):
        KossakowskiCoeffs(a_coeff=0.1, b_coeff=0.2)
