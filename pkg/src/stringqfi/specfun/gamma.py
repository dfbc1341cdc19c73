from __future__ import annotations

import math

from scipy import special

from stringqfi.core.errors import DomainError


def _check_positive(x: float, name: str) -> float:
    value = float(x)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} requires a finite argument > 0, got {x!r}.")
    return value


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0 (negative arguments never occur since nu >= 1)."""
    return float(special.gamma(_check_positive(x, "gamma_fn")))


def digamma_fn(x: float) -> float:
    """psi(x) = Gamma'(x) / Gamma(x) for x > 0."""
    return float(special.digamma(_check_positive(x, "digamma_fn")))
