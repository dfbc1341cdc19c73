from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np

from stringqfi.specfun.bessel import bessel_j_grid


class ResponseComponent(ABC):
    """
    Base class for the polarization-resolved response functions f_i.

    Each f_i has the form

        f_i = c_i(nu) * sum_m  int_0^{pi/2} dphi  g_i(m, sin phi)

    after substituting eta = sin(phi) in the eta-integral, which removes the
    1 / sqrt(1 - eta^2) endpoint singularity.

    Subclasses should:
      - set ``name`` (the polarization preset it belongs to) and ``weight_index``
      - implement ``prefactor(nu)`` and ``mode_terms(m, nu, s, x)``
      - implement the small-r asymptotics ``asymptotic`` / ``asymptotic_dnu``
    """

    name: ClassVar[str]
    weight_index: ClassVar[int]

    @abstractmethod
    def prefactor(self, nu: float) -> float:
        """Constant in front of the mode sum."""
        raise NotImplementedError

    @abstractmethod
    def mode_terms(self, m: np.ndarray, nu: float, s: np.ndarray, x: np.ndarray) -> np.ndarray:
        """
        Integrand of every mode at every node.

        Parameters
        ----------
        m
            Integer mode numbers, shape (n_modes,).
        nu
            Deficit-angle parameter.
        s
            sin(phi) at the quadrature nodes, shape (n_nodes,).
        x
            Bessel arguments r_tilde * s, shape (n_nodes,).

        Returns
        -------
        np.ndarray
            Shape (n_modes, n_nodes); the Jacobian of eta = sin(phi) is already folded in.
        """
        raise NotImplementedError

    @abstractmethod
    def asymptotic(self, r_tilde: float, nu: float, with_zero_mode: bool = False) -> float:
        """Leading small-r behaviour of f_i."""
        raise NotImplementedError

    @abstractmethod
    def asymptotic_dnu(self, r_tilde: float, nu: float, with_zero_mode: bool = False) -> float:
        """Analytic nu-derivative of ``asymptotic``."""
        raise NotImplementedError

    def weight(self, weights: tuple[float, float, float]) -> float:
        return weights[self.weight_index]

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def squared_bessel(orders: np.ndarray, x: np.ndarray) -> np.ndarray:
    j = bessel_j_grid(orders, x)
    return j * j


def cross_bessel(center: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    J_{c-1}(x) * J_{c+1}(x) for non-negative centers c = |nu m|.

    Only c = 0 (the m = 0 mode) produces a negative lower order; it is mapped
    through the integer reflection J_{-1} = -J_1. For nu >= 1 and m != 0 the
    lower order |nu m| - 1 is already non-negative.
    """
    lower = center - 1.0
    sign = np.where(lower < 0.0, -1.0, 1.0)[:, None]
    j_lo = bessel_j_grid(np.abs(lower), x)
    j_hi = bessel_j_grid(center + 1.0, x)
    return sign * j_lo * j_hi


def mode_cutoff(r_tilde: float, nu: float, padding: float) -> int:
    """Symmetric truncation M of the mode sum m = -M..M."""
    return int(math.ceil((r_tilde + 10.0 * r_tilde ** (1.0 / 3.0) + padding) / nu))
