import numpy as np
import pytest

from caputo_l1.testbed import HolderFunction, TestFunctionSpec, make_test_function


@pytest.fixture
def linear():
    return HolderFunction(
        lambda t: np.asarray(t, dtype=np.float64) * 1.0,
        1,
        1.0,
        known_seminorm=0.0,
        derivative_eval=lambda t: np.ones(np.shape(t)),
    )


@pytest.fixture(params=[(0, 0.25), (0, 0.5), (0, 1.0), (1, 0.25), (1, 0.5), (1, 1.0)],
                ids=lambda p: f"k{p[0]}-b{p[1]}")
def test_function(request):
    return make_test_function(TestFunctionSpec(*request.param))
