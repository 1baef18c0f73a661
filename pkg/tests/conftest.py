import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from src.config.settings import get_settings, reset_settings

settings.register_profile(
    "toolkit",
    derandomize=True,
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
settings.register_profile("ci", parent=settings.get_profile("toolkit"), max_examples=1000)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "toolkit"))


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for key in list(os.environ):
        if key.startswith("TROPICAL_"):
            monkeypatch.delenv(key)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(get_settings().seed)
