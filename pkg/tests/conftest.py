from __future__ import annotations

import pytest

from stringqfi.core.config import DetectorConfig, Polarization, ResponseConfig
from stringqfi.response.cache import ResponseCache
from stringqfi.response.evaluator import ResponseEvaluator


@pytest.fixture
def evaluator() -> ResponseEvaluator:
    return ResponseEvaluator(ResponseConfig())


@pytest.fixture
def cached_evaluator(tmp_path) -> ResponseEvaluator:
    return ResponseEvaluator(ResponseConfig(), ResponseCache(tmp_path / "responses.tsv"))


@pytest.fixture
def radial() -> Polarization:
    return Polarization.preset("radial")


@pytest.fixture
def radial_point(radial) -> DetectorConfig:
    return DetectorConfig(polarization=radial, r_tilde=0.14, nu=1.5, tau_tilde=4.0, theta=0.0)
