"""
Closed-form small-r behaviour of the response functions (r_tilde << 1):

    f_r ~ f_alpha ~ 3 nu^2 (nu + 1) / Gamma(2 nu + 2) * r^(2 (nu - 1)),    f_z ~ nu.

The transverse formula is the m = -1 mode band alone; it dominates for
1 <= nu < 2. At nu >= 2 the m = 0 band (of order r^2) is comparable or larger,
and ``with_zero_mode=True`` adds its leading term (nu r^2 / 20 radial,
nu r^2 / 4 tangential).
"""
from __future__ import annotations

import math

from stringqfi.core.errors import DomainError
from stringqfi.response.base import ResponseComponent
from stringqfi.response.components import get_component


def _check(r_tilde: float, nu: float) -> None:
    if not (math.isfinite(r_tilde) and r_tilde > 0.0):
        raise DomainError(f"r_tilde must be finite and > 0, got {r_tilde!r}.")
    if not (math.isfinite(nu) and nu >= 1.0):
        raise DomainError(f"nu must be finite and >= 1, got {nu!r}.")


def response_asymptotic_small_r(
    pol_component: str | ResponseComponent,
    r_tilde: float,
    nu: float,
    with_zero_mode: bool = False,
) -> float:
    _check(r_tilde, nu)
    return get_component(pol_component).asymptotic(r_tilde, nu, with_zero_mode)


def response_asymptotic_dnu(
    pol_component: str | ResponseComponent,
    r_tilde: float,
    nu: float,
    with_zero_mode: bool = False,
) -> float:
    _check(r_tilde, nu)
    return get_component(pol_component).asymptotic_dnu(r_tilde, nu, with_zero_mode)
