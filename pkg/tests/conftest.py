import random

import pytest
from hypothesis import HealthCheck, settings

from flatangle.corpus import STRUCTURED, figure_eight, structured

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def fig8():
    return figure_eight()


@pytest.fixture
def rng():
    return random.Random(20240531)


@pytest.fixture(params=sorted(STRUCTURED))
def structured_tri(request):
    return request.param, structured(request.param)
