from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from stabgrid.backend import set_backend

settings.register_profile(
    "ci", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Run the decorated test once per kernel backend."""
    set_backend(request.param)
    yield request.param
    set_backend("auto")
