"""
Numerical evaluation of the response functions f_r, f_alpha, f_z.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
import pandas as pd

from stringqfi.core import math as smath
from stringqfi.core.config import Polarization, ResponseConfig
from stringqfi.core.errors import ConvergenceError, DomainError
from stringqfi.response.base import ResponseComponent, mode_cutoff
from stringqfi.response.cache import ResponseCache, ResponseValue
from stringqfi.response.components import RESPONSE_COMPONENTS, get_component

logger = logging.getLogger(__name__)


class ResponseEvaluator:
    """
    Evaluates response values and their nu-derivatives.

    Parameters
    ----------
    config
        Quadrature, derivative and range settings.
    cache
        Optional ResponseCache shared between evaluations (and threads).
    """

    def __init__(self, config: ResponseConfig | None = None, cache: ResponseCache | None = None):
        self.config = config or ResponseConfig()
        self.cache = cache

    def check_inputs(self, r_tilde: float, nu: float) -> None:
        cfg = self.config
        if not (math.isfinite(r_tilde) and 0.0 < r_tilde <= cfg.r_max):
            raise DomainError(f"r_tilde must lie in (0, {cfg.r_max}], got {r_tilde!r}.")
        if not (math.isfinite(nu) and cfg.nu_min <= nu <= cfg.nu_max):
            raise DomainError(f"nu must lie in [{cfg.nu_min}, {cfg.nu_max}], got {nu!r}.")

    def evaluate(
        self,
        component: str | ResponseComponent,
        r_tilde: float,
        nu: float,
        with_derivative: bool = False,
    ) -> ResponseValue:
        """
        f_i(r_tilde, nu) with error estimates; d f_i / d nu only when requested.
        """
        comp = get_component(component)
        r_tilde, nu = float(r_tilde), float(nu)
        self.check_inputs(r_tilde, nu)
        key = ResponseCache.key(comp.name, r_tilde, nu, self.config.scheme_version)
        if self.cache is not None:
            hit = self.cache.get(key, need_derivative=with_derivative)
            if hit is not None:
                return hit

        result = self._cached_value(comp, r_tilde, nu)
        if with_derivative:
            dvalue = self.derivative(comp, r_tilde, nu)
            result = ResponseValue(
                value=result.value,
                dvalue_dnu=dvalue,
                trunc_error=result.trunc_error,
                quad_error=result.quad_error,
                has_derivative=True,
            )
            if self.cache is not None:
                self.cache.put(key, result)
        return result

    def _cached_value(self, comp: ResponseComponent, r_tilde: float, nu: float) -> ResponseValue:
        if self.cache is None:
            return self._integrate(comp, r_tilde, nu)
        key = ResponseCache.key(comp.name, r_tilde, nu, self.config.scheme_version)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        result = self._integrate(comp, r_tilde, nu)
        self.cache.put(key, result)
        return result

    def _integrate(self, comp: ResponseComponent, r_tilde: float, nu: float) -> ResponseValue:
        qcfg = self.config.quadrature
        big_m = mode_cutoff(r_tilde, nu, qcfg.mode_padding)
        m = np.arange(-big_m, big_m + 1, dtype=float)
        prefactor = comp.prefactor(nu)

        n_nodes = qcfg.min_nodes
        previous = None
        quad_error = math.inf
        while True:
            phi, weights = smath.gauss_legendre(n_nodes, 0.0, 0.5 * math.pi)
            s = np.sin(phi)
            per_mode = prefactor * (comp.mode_terms(m, nu, s, r_tilde * s) @ weights)
            total = float(np.sum(per_mode))
            if previous is not None:
                quad_error = abs(total - previous)
                if quad_error <= qcfg.rtol * max(1.0, abs(total)):
                    break
            if n_nodes >= qcfg.max_nodes:
                break
            previous = total
            n_nodes *= 2

        trunc_error = float(abs(per_mode[0]) + abs(per_mode[-1]))
        budget = qcfg.contract_tol * max(1.0, abs(total))
        logger.debug(
            "%s r=%.6g nu=%.6g: M=%d nodes=%d value=%.17g quad=%.3g trunc=%.3g",
            comp.name, r_tilde, nu, big_m, n_nodes, total, quad_error, trunc_error,
        )
        if quad_error > budget or trunc_error > budget:
            raise ConvergenceError(
                f"{comp.name} response at r_tilde={r_tilde}, nu={nu} missed the error budget "
                f"{budget:.3g} (quad={quad_error:.3g}, trunc={trunc_error:.3g}).",
                partial_value=total,
                achieved_error=quad_error + trunc_error,
            )
        if total <= 0.0:
            raise ConvergenceError(
                f"{comp.name} response at r_tilde={r_tilde}, nu={nu} is not positive ({total!r}).",
                partial_value=total,
                achieved_error=quad_error + trunc_error,
            )
        return ResponseValue(value=total, trunc_error=trunc_error, quad_error=quad_error)

    def derivative(self, component: str | ResponseComponent, r_tilde: float, nu: float) -> float:
        """
        d f_i / d nu by finite differences with one Richardson level (steps h, h / 2).

        Central differences in the interior; second-order one-sided stencils
        within a step of the validated nu bounds (the m = -1 order |nu - 1| has a
        kink at nu = 1, so nothing below nu_min is sampled).
        """
        comp = get_component(component)
        self.check_inputs(r_tilde, nu)
        h = self.config.derivative.step

        def f(v: float) -> float:
            return self._cached_value(comp, r_tilde, v).value

        stencil = self._stencil(nu, h)
        coarse = stencil(f, nu, h)
        if not self.config.derivative.richardson:
            return coarse
        fine = stencil(f, nu, 0.5 * h)
        return smath.richardson_extrapolate(coarse, fine, order=2)

    def derivative_pair(self, component: str | ResponseComponent, r_tilde: float, nu: float) -> tuple[float, float]:
        """The un-extrapolated step-h and step-h/2 estimates, for consistency checks."""
        comp = get_component(component)
        self.check_inputs(r_tilde, nu)
        h = self.config.derivative.step

        def f(v: float) -> float:
            return self._cached_value(comp, r_tilde, v).value

        stencil = self._stencil(nu, h)
        return stencil(f, nu, h), stencil(f, nu, 0.5 * h)

    def _stencil(self, nu: float, h: float):
        cfg = self.config
        if nu - h < cfg.nu_min:
            return smath.forward_difference
        if nu + h > cfg.nu_max:
            return smath.backward_difference
        return smath.central_difference

    def combined(
        self,
        pol: Polarization,
        r_tilde: float,
        nu: float,
        with_derivative: bool = False,
    ) -> ResponseValue:
        """Weighted sum f = sum_i zeta_i f_i; error estimates add with the same weights."""
        self.check_inputs(r_tilde, nu)
        value = dvalue = trunc = quad = 0.0
        for comp in RESPONSE_COMPONENTS.values():
            zeta = comp.weight(pol.weights)
            if zeta == 0.0:
                continue
            part = self.evaluate(comp, r_tilde, nu, with_derivative=with_derivative)
            value += zeta * part.value
            dvalue += zeta * part.dvalue_dnu
            trunc += zeta * part.trunc_error
            quad += zeta * part.quad_error
        return ResponseValue(value, dvalue, trunc, quad, has_derivative=with_derivative)


_default_evaluator = ResponseEvaluator()


def default_evaluator() -> ResponseEvaluator:
    return _default_evaluator


def response_f(
    pol_component: str | ResponseComponent,
    r_tilde: float,
    nu: float,
    with_derivative: bool = False,
    evaluator: ResponseEvaluator | None = None,
) -> ResponseValue:
    return (evaluator or _default_evaluator).evaluate(pol_component, r_tilde, nu, with_derivative)


def response_f_combined(
    pol: Polarization,
    r_tilde: float,
    nu: float,
    with_derivative: bool = False,
    evaluator: ResponseEvaluator | None = None,
) -> ResponseValue:
    return (evaluator or _default_evaluator).combined(pol, r_tilde, nu, with_derivative)


def derivative_dnu(
    pol_component: str | ResponseComponent,
    r_tilde: float,
    nu: float,
    evaluator: ResponseEvaluator | None = None,
) -> float:
    return (evaluator or _default_evaluator).derivative(pol_component, r_tilde, nu)


def response_table(
    component: str | ResponseComponent,
    r_values: Sequence[float],
    nu_values: Sequence[float],
    with_derivative: bool = True,
    evaluator: ResponseEvaluator | None = None,
) -> pd.DataFrame:
    """
    Tabulate response values over every (r_tilde, nu) pair, r-major.

    Columns: component, r_tilde, nu, f, df_dnu, trunc_error, quad_error.
    """
    comp = get_component(component)
    ev = evaluator or _default_evaluator
    rows = []
    for r in r_values:
        for nu in nu_values:
            val = ev.evaluate(comp, r, nu, with_derivative=with_derivative)
            rows.append({
                "component": comp.name,
                "r_tilde": float(r),
                "nu": float(nu),
                "f": val.value,
                "df_dnu": val.dvalue_dnu,
                "trunc_error": val.trunc_error,
                "quad_error": val.quad_error,
            })
    return pd.DataFrame(rows, columns=["component", "r_tilde", "nu", "f", "df_dnu", "trunc_error", "quad_error"])
