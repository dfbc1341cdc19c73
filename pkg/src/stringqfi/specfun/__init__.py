from __future__ import annotations

from stringqfi.specfun.bessel import bessel_j, bessel_j_batch, tail_cutoff_order
from stringqfi.specfun.gamma import digamma_fn, gamma_fn

__all__ = ["bessel_j", "bessel_j_batch", "digamma_fn", "gamma_fn", "tail_cutoff_order"]
