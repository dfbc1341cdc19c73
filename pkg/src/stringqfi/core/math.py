from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

GOLDEN_RATIO = (np.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=32)
def _legendre_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped onto [a, b]."""
    x, w = _legendre_nodes(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def richardson_extrapolate(coarse: float, fine: float, order: int, ratio: float = 2.0) -> float:
    # coarse uses step h, fine uses h / ratio; leading error term O(h**order)
    factor = ratio ** order
    return (factor * fine - coarse) / (factor - 1.0)


def central_difference(fn: Callable[[float], float], x: float, h: float) -> float:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def forward_difference(fn: Callable[[float], float], x: float, h: float) -> float:
    # second-order one-sided stencil
    return (-3.0 * fn(x) + 4.0 * fn(x + h) - fn(x + 2.0 * h)) / (2.0 * h)


def backward_difference(fn: Callable[[float], float], x: float, h: float) -> float:
    return (3.0 * fn(x) - 4.0 * fn(x - h) + fn(x - 2.0 * h)) / (2.0 * h)


def axis_values(lo: float, hi: float, count: int, spacing: str = "linear") -> np.ndarray:
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def is_unimodal(values: Sequence[float], slack: float = 1e-12) -> tuple[bool, int]:
    """
    Check that a sampled curve rises to a single peak and then falls.

    Returns
    -------
    tuple[bool, int]
        Whether the samples are unimodal within ``slack`` and the index of the peak.
    """
    y = np.asarray(values, dtype=float)
    peak = int(np.argmax(y))
    rising = np.all(np.diff(y[: peak + 1]) >= -slack)
    falling = np.all(np.diff(y[peak:]) <= slack)
    return bool(rising and falling), peak


def golden_section_max(
    fn: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_iter: int = 200,
) -> tuple[float, float, float, int]:
    """
    Golden-section search for the maximum of a unimodal ``fn`` on [a, b].

    Returns
    -------
    tuple[float, float, float, int]
        Best abscissa, its value, final bracket width and iterations used.
        The search stops when the bracket is narrower than ``tol`` or after
        ``max_iter`` shrink steps.
    """
    c = b - GOLDEN_RATIO * (b - a)
    d = a + GOLDEN_RATIO * (b - a)
    fc, fd = fn(c), fn(d)
    iterations = 0
    while (b - a) > tol and iterations < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN_RATIO * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN_RATIO * (b - a)
            fd = fn(d)
        iterations += 1
    if fc >= fd:
        return float(c), float(fc), float(b - a), iterations
    return float(d), float(fd), float(b - a), iterations
