from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from app.deferred_pairs import IndexRule, natural_pair, validate_pair
from app.index_sets import PowerImage, complement
from app.theorems import cube_decrease_cert

settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile("ci")

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def natural():
    return natural_pair()


@pytest.fixture
def doubling_pair():
    return validate_pair(IndexRule(2), IndexRule(4))


@pytest.fixture
def cube_cert():
    return cube_decrease_cert()


@pytest.fixture
def off_cubes():
    return complement(PowerImage(3))


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR
