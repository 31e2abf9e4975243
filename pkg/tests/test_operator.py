import math

import numpy as np
import pytest

from dgsuper.field import ModalField, bilinear_form
from dgsuper.mesh import interval_mesh, split_mesh, uniform_mesh
from dgsuper.operator import (BCKind, BoundaryCondition, dg_rhs, energy_identity, energy_rate, jumps,
                              upstream_traces)

PERIODIC = BoundaryCondition.periodic()


def test_two_cell_piecewise_constant():
    a, b = 1.3, -0.4
    state = ModalField(uniform_mesh(2), [[a], [b]])
    np.testing.assert_allclose(dg_rhs(state, PERIODIC, 0.0).coeffs[:, 0],
                               [(b - a) / math.pi, (a - b) / math.pi], rtol=1e-14)


@pytest.mark.parametrize("k", [0, 1, 3, 5])
def test_constants_are_steady(k):
    c = np.zeros((7, k + 1))
    c[:, 0] = 2.75
    out = dg_rhs(ModalField(uniform_mesh(7), c), PERIODIC, 0.3)
    assert np.max(np.abs(out.coeffs)) <= 1e-14


@pytest.mark.parametrize("k", [0, 1, 2, 4])
def test_conservation(k, rng):
    mesh = split_mesh(10)
    state = ModalField(mesh, rng.standard_normal((10, k + 1)))
    out = dg_rhs(state, PERIODIC, 0.0)
    assert abs(mesh.cell_sizes @ out.coeffs[:, 0]) <= 1e-13


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_rhs_is_galerkin_solution(k, rng):
    """a(u_h, v) = 0 for every v when u_ht = dg_rhs(u_h)."""
    mesh = split_mesh(6)
    bc = BoundaryCondition.dirichlet(lambda t: math.cos(t))
    state = ModalField(mesh, rng.standard_normal((6, k + 1)))
    u_t = dg_rhs(state, bc, 0.4)
    for _ in range(3):
        v = ModalField(mesh, rng.standard_normal((6, k + 1)))
        assert abs(bilinear_form(state, u_t, v, inflow=math.cos(0.4))) <= 1e-12
        assert abs(bilinear_form(state, dg_rhs(state, PERIODIC, 0.0), v)) <= 1e-12


def test_continuous_periodic_state_has_zero_energy_rate():
    mesh = uniform_mesh(6)
    nodal = np.cos(mesh.breakpoints)
    # piecewise linear interpolant: c0 = mean of end values, c1 = half difference
    state = ModalField(mesh, np.column_stack([(nodal[:-1] + nodal[1:]) / 2, (nodal[1:] - nodal[:-1]) / 2]))
    np.testing.assert_allclose(jumps(state, PERIODIC, 0.0), 0.0, atol=1e-15)
    assert abs(energy_rate(state, PERIODIC, 0.0)) <= 1e-12


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_periodic_energy_is_non_increasing(k, rng):
    mesh = split_mesh(8)
    for _ in range(20):
        state = ModalField(mesh, rng.standard_normal((8, k + 1)))
        assert energy_rate(state, PERIODIC, 0.0) <= 1e-12


@pytest.mark.parametrize("bc", [PERIODIC, BoundaryCondition.dirichlet(lambda t: 0.5 + t)])
def test_energy_identity(bc, rng):
    mesh = split_mesh(8)
    state = ModalField(mesh, rng.standard_normal((8, 4)))
    assert energy_rate(state, bc, 0.2) == pytest.approx(energy_identity(state, bc, 0.2), rel=1e-12)


def test_single_jump():
    """k=0 with one jump of size delta; Dirichlet inflow continuous at the left boundary."""
    delta = 0.3
    state = ModalField(uniform_mesh(4), [[1.0], [1.0], [1.0 + delta], [1.0 + delta]])
    bc = BoundaryCondition.dirichlet(lambda t: 1.0)
    np.testing.assert_allclose(jumps(state, bc, 0.0), [0, 0, delta, 0], atol=1e-15)
    jump_part = energy_identity(state, bc, 0.0) - (-0.5 * (1 + delta) ** 2 + 0.5)
    assert jump_part == pytest.approx(-delta**2 / 2, rel=1e-13)


def test_sawtooth_single_periodic_jump():
    mesh = uniform_mesh(4)
    # u = x is continuous inside [0, 2pi] and jumps by -2pi across the periodic seam
    state = ModalField(mesh, np.column_stack([mesh.centers, mesh.half_sizes]))
    assert energy_rate(state, PERIODIC, 0.0) == pytest.approx(-0.5 * (2 * math.pi) ** 2, rel=1e-13)


def test_linearity(rng):
    mesh = uniform_mesh(5)
    a = ModalField(mesh, rng.standard_normal((5, 3)))
    b = ModalField(mesh, rng.standard_normal((5, 3)))
    lhs = dg_rhs(2.0 * a + b, PERIODIC, 0.0)
    rhs = 2.0 * dg_rhs(a, PERIODIC, 0.0) + dg_rhs(b, PERIODIC, 0.0)
    np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)


@pytest.mark.parametrize("j", [0, 3, 5])
def test_upwind_locality(j, rng):
    n = 6
    mesh = uniform_mesh(n)
    base = ModalField(mesh, rng.standard_normal((n, 3)))
    bump = np.zeros((n, 3))
    bump[j] = rng.standard_normal(3)
    diff = dg_rhs(base + ModalField(mesh, bump), PERIODIC, 0.0).coeffs - dg_rhs(base, PERIODIC, 0.0).coeffs
    touched = {j, (j + 1) % n}
    for i in range(n):
        if i not in touched:
            np.testing.assert_array_equal(diff[i], 0.0)
    assert np.any(diff[j] != 0)


def test_dirichlet_inflow_only_enters_first_cell():
    mesh = uniform_mesh(4)
    state = ModalField.zeros(mesh, 2)
    bc = BoundaryCondition.dirichlet(lambda t: t)
    assert upstream_traces(state, bc, 0.7)[0] == 0.7
    out = dg_rhs(state, bc, 0.7).coeffs
    assert np.any(out[0] != 0)
    np.testing.assert_array_equal(out[1:], 0.0)


def test_boundary_condition_validation():
    assert PERIODIC.kind is BCKind.PERIODIC
    with pytest.raises(ValueError):
        BoundaryCondition(BCKind.DIRICHLET, None)


def test_single_cell_mesh():
    state = ModalField(interval_mesh(0, 1, 1), [[1.0, 0.5]])
    assert np.all(np.isfinite(dg_rhs(state, PERIODIC, 0.0).coeffs))
