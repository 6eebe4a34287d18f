import pytest
from hypothesis import HealthCheck, settings

from dgkernels.linalg import Field

settings.register_profile(
    "fast", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("fast")

FIELDS = [Field(2), Field(7), Field(0)]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param


@pytest.fixture
def F2():
    return Field(2)


@pytest.fixture
def Q():
    return Field(0)
