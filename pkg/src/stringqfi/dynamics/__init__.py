from __future__ import annotations

from stringqfi.dynamics.bloch import (
    BlochState,
    EvolutionParams,
    InitialState,
    bloch_evolve,
    bloch_evolve_with_dnu,
    purity,
)
from stringqfi.dynamics.lindblad import lindblad_integrate

__all__ = [
    "BlochState",
    "EvolutionParams",
    "InitialState",
    "bloch_evolve",
    "bloch_evolve_with_dnu",
    "lindblad_integrate",
    "purity",
]
