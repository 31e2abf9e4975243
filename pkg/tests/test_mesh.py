import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsuper.mesh import Mesh1D, from_reference, interval_mesh, split_mesh, to_reference, uniform_mesh


def test_uniform_two_cells():
    np.testing.assert_allclose(uniform_mesh(2).breakpoints, [0, math.pi, 2 * math.pi])


def test_uniform_sizes_and_centers():
    np.testing.assert_allclose(uniform_mesh(4).cell_sizes, math.pi / 2)
    np.testing.assert_allclose(uniform_mesh(3).centers, [math.pi / 3, math.pi, 5 * math.pi / 3])


def test_split_two_cells():
    np.testing.assert_allclose(split_mesh(2).breakpoints, [0, math.pi / 2, 2 * math.pi])


def test_split_four_cells():
    q = math.pi / 4
    np.testing.assert_allclose(split_mesh(4).cell_sizes, [q, q, 3 * q, 3 * q])


@pytest.mark.parametrize("n", [2, 4, 8, 16, 64, 256])
def test_split_h_min(n):
    mesh = split_mesh(n)
    assert mesh.h_min == pytest.approx(math.pi / n, rel=1e-14)
    assert mesh.h_max == pytest.approx(3 * math.pi / n, rel=1e-14)


def test_split_requires_even():
    with pytest.raises(ValueError):
        split_mesh(5)


@pytest.mark.parametrize("bad", [[0.0], [0.0, 0.0, 1.0], [1.0, 0.0], [0.0, np.nan, 1.0]])
def test_rejects_bad_breakpoints(bad):
    with pytest.raises(ValueError):
        Mesh1D(np.array(bad))


def test_rejects_excessive_ratio():
    with pytest.raises(ValueError):
        Mesh1D(np.array([0.0, 1.0, 101.0]))


def test_endpoints_and_length():
    mesh = interval_mesh(-2.0, 3.0, 5)
    assert (mesh.left, mesh.right, mesh.length, mesh.n_cells) == (-2.0, 3.0, 5.0, 5)
    assert mesh.cell_sizes.sum() == pytest.approx(5.0)


@pytest.mark.parametrize("j", [0, 3, 7])
def test_to_reference_examples(mesh8, j):
    b = mesh8.breakpoints
    assert to_reference(mesh8, j, b[j]) == -1.0
    assert to_reference(mesh8, j, mesh8.centers[j]) == pytest.approx(0.0, abs=1e-14)
    assert to_reference(mesh8, j, b[j + 1]) == 1.0


def test_to_reference_rejects_outside(mesh8):
    with pytest.raises(ValueError):
        to_reference(mesh8, 0, mesh8.breakpoints[2])
    with pytest.raises(ValueError):
        from_reference(mesh8, 0, 1.5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.floats(-1, 1))
def test_reference_round_trip(j, s):
    mesh = split_mesh(8)
    assert to_reference(mesh, j, from_reference(mesh, j, s)) == pytest.approx(s, abs=1e-12)


def test_physical_points_shape():
    mesh = uniform_mesh(5)
    pts = mesh.physical_points(np.array([-1.0, 0.0, 1.0]))
    assert pts.shape == (5, 3)
    np.testing.assert_allclose(pts[:, 0], mesh.breakpoints[:-1])
    np.testing.assert_allclose(pts[:, 2], mesh.breakpoints[1:])


def test_equality_and_hash():
    assert uniform_mesh(4) == uniform_mesh(4)
    assert hash(uniform_mesh(4)) == hash(uniform_mesh(4))
    assert uniform_mesh(4) != split_mesh(4)
