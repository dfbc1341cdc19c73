from __future__ import annotations

from stringqfi.core.config import Polarization
from stringqfi.response.asymptotic import response_asymptotic_dnu, response_asymptotic_small_r
from stringqfi.response.base import ResponseComponent
from stringqfi.response.cache import ResponseCache, ResponseValue
from stringqfi.response.components import RESPONSE_COMPONENTS, get_component
from stringqfi.response.evaluator import (
    ResponseEvaluator,
    default_evaluator,
    derivative_dnu,
    response_f,
    response_f_combined,
    response_table,
)
from stringqfi.response.kossakowski import (
    KossakowskiCoeffs,
    ThermalParams,
    deficit_from_mass_density,
    kossakowski_from_temperature,
    kossakowski_thermal,
    kossakowski_vacuum,
    thermal_occupation,
)

__all__ = [
    "KossakowskiCoeffs",
    "Polarization",
    "RESPONSE_COMPONENTS",
    "ResponseCache",
    "ResponseComponent",
    "ResponseEvaluator",
    "ResponseValue",
    "ThermalParams",
    "deficit_from_mass_density",
    "default_evaluator",
    "derivative_dnu",
    "get_component",
    "kossakowski_from_temperature",
    "kossakowski_thermal",
    "kossakowski_vacuum",
    "response_asymptotic_dnu",
    "response_asymptotic_small_r",
    "response_f",
    "response_f_combined",
    "response_table",
    "thermal_occupation",
]
