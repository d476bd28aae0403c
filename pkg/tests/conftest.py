import numpy as np
import pytest

from curveproj import SurfaceModel

HYPERBOLIC = SurfaceModel(-1.0, 2.0)
EUCLIDEAN = SurfaceModel(0.0, 2.0)
SPHERICAL = SurfaceModel(1.0, 1.3)


@pytest.fixture(
    params=[HYPERBOLIC, EUCLIDEAN, SPHERICAL],
    ids=["hyperbolic", "euclidean", "spherical"],
)
def model(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
