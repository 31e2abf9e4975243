import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsuper.correction import initialize
from dgsuper.field import ModalField, gauss_radau_project, l2_project
from dgsuper.metrics import (CSV_HEADER, NOISE_FLOOR, ErrorReport, all_errors, cell_average_error,
                             domain_average_error, downwind_errors, radau_errors, rates, refinement_rate)
from dgsuper.operator import make_rhs
from dgsuper.problems import get_problem
from dgsuper.smooth import SmoothFunction, polynomial
from dgsuper.timestep import integrate


def test_downwind_errors_vanish_for_radau_projection(mesh8):
    u = get_problem("example1").u0
    e1, e2 = downwind_errors(gauss_radau_project(u, mesh8, 3), u)
    assert e1 <= 1e-13 and e2 <= 1e-13


def test_single_downwind_mismatch(mesh8):
    u = get_problem("example2").u0
    proj = gauss_radau_project(u, mesh8, 2)
    delta = 3e-4
    c = proj.coeffs.copy()
    c[5, 0] += delta
    e1, e2 = downwind_errors(ModalField(mesh8, c), u)
    assert e1 == pytest.approx(delta, rel=1e-9)
    assert e2 == pytest.approx(delta / math.sqrt(8), rel=1e-9)


@pytest.mark.parametrize("k", [0, 1, 3])
def test_l2_projection_has_no_mean_errors(k, mesh8):
    u = get_problem("example1").u0
    proj = l2_project(u, mesh8, k)
    assert domain_average_error(proj, u) <= 1e-13
    assert cell_average_error(proj, u) <= 1e-13


@pytest.mark.parametrize("k", [1, 2, 4])
def test_radau_errors_vanish_for_exact_polynomial(k, mesh8, rng):
    # written in (x - pi) / pi so values and slopes stay O(1) on [0, 2pi]
    c = rng.standard_normal(k + 1)
    u = SmoothFunction(lambda x: sum(cn * ((x - math.pi) / math.pi) ** n for n, cn in enumerate(c)))
    e4, e5 = radau_errors(l2_project(u, mesh8, k), u)
    assert e4 <= 1e-12 and e5 <= 1e-12


def test_radau_errors_need_k1(mesh8):
    with pytest.raises(ValueError):
        radau_errors(ModalField.zeros(mesh8, 0), polynomial([0.0]))


def test_constant_offset(mesh8):
    u = get_problem("example1").u0
    delta = 2e-5
    proj = l2_project(u, mesh8, 2)
    c = proj.coeffs.copy()
    c[:, 0] += delta
    shifted = ModalField(mesh8, c)
    assert cell_average_error(shifted, u) == pytest.approx(delta, rel=1e-8)
    assert domain_average_error(shifted, u) == pytest.approx(delta, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=8, max_size=8))
def test_max_and_rms_bounds(perturbation):
    mesh = get_problem("example1").mesh_builder(8)
    u = get_problem("example1").u0
    c = gauss_radau_project(u, mesh, 1).coeffs.copy()
    c[:, 0] += np.array(perturbation)
    e1, e2 = downwind_errors(ModalField(mesh, c), u)
    assert e2 <= e1 * (1 + 1e-12)
    assert e1 <= math.sqrt(8) * e2 * (1 + 1e-12) + 1e-15


def test_domain_average_is_conserved_in_periodic_run():
    prob = get_problem("example1")
    mesh = prob.mesh_builder(8)
    state0 = initialize(4, prob, mesh, 2)
    final = integrate(state0, make_rhs(prob.bc), prob.step_policy(2, 8), h_min=mesh.h_min).state
    before = domain_average_error(state0, prob.exact(0.0))
    after = domain_average_error(final, prob.exact(prob.t_end))
    assert after == pytest.approx(before, abs=1e-12)


def test_all_errors_shape():
    prob = get_problem("example2")
    mesh = prob.mesh_builder(4)
    errs = all_errors(initialize(1, prob, mesh, 2), prob.u0)
    assert errs.shape == (6,) and np.all(errs >= 0)


def test_rate_examples():
    assert refinement_rate(1e-2, 1.25e-3) == pytest.approx(3.0)
    assert math.isnan(refinement_rate(1e-2, 1e-14))
    assert math.isnan(refinement_rate(NOISE_FLOOR, 1e-15))


def test_rates_table():
    ns = [8, 16, 32]
    errs = np.array([[1e-2] * 6, [1.25e-3] * 6, [1.5625e-4] * 6])
    rep = rates(ns, errs)
    assert np.all(np.isnan(rep.rates[0]))
    np.testing.assert_allclose(rep.rates[1:], 3.0)


def test_rates_reject_bad_input():
    with pytest.raises(ValueError):
        rates([8, 12], np.ones((2, 6)))
    with pytest.raises(ValueError):
        rates([8, 16], np.ones((2, 5)))
    with pytest.raises(ValueError):
        ErrorReport([8], -np.ones((1, 6)))


def test_sub_floor_entries_are_flagged():
    errs = np.array([[1e-10] * 6, [1e-12] * 6, [1e-14] * 6, [1e-16] * 6])
    rep = rates([4, 8, 16, 32], errs)
    np.testing.assert_array_equal(rep.unreliable[:, 0], [False, False, True, True])
    assert not math.isnan(rep.rates[1, 0])
    assert np.all(np.isnan(rep.rates[2:, 0]))
    table = rep.to_table()
    assert "*" in table and "noise floor" in table


def test_csv_round_trip(rng):
    ns = [8, 16, 32, 64]
    errs = np.exp(rng.uniform(-30, -2, (4, 6)))
    errs[3, 2] = 1e-15
    rep = rates(ns, errs)
    text = rep.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    back = ErrorReport.from_csv(text)
    assert back.ns == ns
    np.testing.assert_array_equal(back.errors, rep.errors)
    np.testing.assert_array_equal(back.rates, rep.rates)
    assert back.to_csv() == text


def test_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        ErrorReport.from_csv("N,a,b\n1,2,3\n")
