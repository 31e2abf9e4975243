import numpy as np
import pytest

from dgsuper.mesh import interval_mesh, split_mesh, uniform_mesh


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ref_cell():
    """The single cell [-1, 1], where x and s coincide."""
    return interval_mesh(-1.0, 1.0, 1)


@pytest.fixture(params=["uniform", "split"])
def mesh8(request):
    return uniform_mesh(8) if request.param == "uniform" else split_mesh(8)
