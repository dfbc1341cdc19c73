"""
Bessel functions of the first kind at real non-negative order.

Working range: x <= 50, a <= 200 (relative error <= 1e-10, or absolute error
<= 1e-12 where |J_a(x)| < 1e-2). Beyond the uniform tail bound
a > x + 40 (x^(1/3) + 1) the value is returned as exactly 0; there |J_a(x)| < 1e-15.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import special

from stringqfi.core.errors import DomainError


def tail_cutoff_order(x):
    """Order above which J_a(x) is treated as 0 (works on scalars and arrays)."""
    return x + 40.0 * (np.cbrt(x) + 1.0)


def _check_order(order: float) -> float:
    a = float(order)
    if not np.isfinite(a) or a < 0.0:
        raise DomainError(f"Bessel order must be finite and >= 0, got {order!r}.")
    return a


def _evaluate(a, x: np.ndarray) -> np.ndarray:
    values = special.jv(a, x)
    return np.where(a > tail_cutoff_order(x), 0.0, values)


def bessel_j_batch(order: float, xs: Sequence[float] | np.ndarray) -> np.ndarray:
    """
    Evaluate J_order at every point of ``xs``.

    Parameters
    ----------
    order
        Non-negative real order.
    xs
        Non-negative, finite arguments (any shape; an empty input gives an empty array).

    Returns
    -------
    np.ndarray
        Array of the same shape as ``xs``.
    """
    a = _check_order(order)
    x = np.asarray(xs, dtype=float)
    if x.size == 0:
        return np.zeros(x.shape)
    if not np.all(np.isfinite(x)) or np.any(x < 0.0):
        raise DomainError("Bessel arguments must be finite and >= 0.")
    return _evaluate(a, x)


def bessel_j(order: float, x: float) -> float:
    """J_order(x) for order >= 0, x >= 0."""
    return float(bessel_j_batch(order, np.asarray([x], dtype=float))[0])


def bessel_j_grid(orders: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    J over the outer product of ``orders`` (rows) and ``x`` (columns).

    Used by the mode sums, where every order shares the same quadrature nodes.
    Inputs are trusted to be validated by the caller.
    """
    a = np.asarray(orders, dtype=float)[:, None]
    return _evaluate(a, np.asarray(x, dtype=float)[None, :])
