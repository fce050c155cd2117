import numpy as np
import pytest

from opdyn import core, discrete, shapley
from opdyn.errors import InputError, ResourceError


def test_step_sequence_budgets():
    s = discrete.StepSequence([0.5, 0.25, 1.0])
    assert np.allclose(s.sigma, [0.0, 0.5, 0.75, 1.75])
    assert np.allclose(s.tau, [0.0, 0.25, 0.3125, 1.3125])
    assert len(s) == 3


def test_step_sequence_validation():
    with pytest.raises(InputError):
        discrete.StepSequence([0.5, 0.0])
    with pytest.raises(InputError):
        discrete.StepSequence([1.5])
    with pytest.raises(InputError):
        discrete.StepSequence([])


def test_step_sequence_factories():
    h = discrete.StepSequence.harmonic(4)
    assert np.allclose(h.steps, [1.0, 0.5, 1.0 / 3.0, 0.25])
    s = discrete.StepSequence.inverse_sqrt(4)
    assert np.allclose(s.steps, [1.0, 2.0**-0.5, 3.0**-0.5, 0.5])
    c = discrete.StepSequence.constant(0.3, 5)
    assert np.allclose(c.steps, 0.3)


def test_iterate_Vn_translation():
    op = core.Translation([2.0, -1.0])
    orbit, vn = discrete.iterate_Vn(op, 10)
    # V_n = n c, so v_n = c for every n
    assert np.allclose(orbit.points[7], 7.0 * op.c)
    assert np.allclose(vn, np.tile(op.c, (10, 1)))


def test_vn_satisfies_phi_recursion():
    op = core.AffineNonexpansive([[0.5, 0.3], [-0.2, 0.6]], [1.0, -1.0])
    _, vn = discrete.iterate_Vn(op, 30)
    for n in range(2, 31):
        lhs = vn[n - 1]
        rhs = core.apply_Phi(op, 1.0 / n, vn[n - 2])
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_solve_vlambda_translation():
    op = core.Translation([4.0])
    for lam in (1.0, 0.5, 0.01):
        res = discrete.solve_vlambda(op, lam, tol=1e-11, full=True)
        assert res.v[0] == pytest.approx(4.0, abs=1e-10)
        assert res.certified_error <= 1e-11
        # V_lambda = c / lambda
        assert res.V[0] == pytest.approx(4.0 / lam, rel=1e-9)


def test_solve_vlambda_is_fixed_point():
    op = shapley.ShapleyOperator(shapley.random_game(3, 2, 2, seed=7))
    v = discrete.solve_vlambda(op, 0.2, tol=1e-11)
    assert op.norm(core.apply_Phi(op, 0.2, v) - v) <= 1e-11


def test_solve_vlambda_validation():
    op = core.Translation([1.0])
    with pytest.raises(InputError):
        discrete.solve_vlambda(op, 0.0)
    with pytest.raises(InputError):
        discrete.solve_vlambda(op, 0.5, tol=-1.0)


def test_solve_vlambda_iteration_cap(monkeypatch):
    monkeypatch.setattr(discrete, "VLAMBDA_MAX_ITER", 3)
    op = core.Translation([1.0])
    with pytest.raises(ResourceError, match="cap"):
        discrete.solve_vlambda(op, 1e-3, tol=1e-12)


def test_euler_unit_steps_equal_value_iteration():
    op = shapley.ShapleyOperator(shapley.random_game(3, 2, 2, seed=7))
    steps = discrete.StepSequence.constant(1.0, 20)
    orbit = discrete.euler_scheme(op, np.zeros(3), steps)
    viter, _ = discrete.iterate_Vn(op, 20)
    assert np.max(np.abs(orbit.points - viter.points)) <= 1e-12


def test_euler_interpolant_endpoints_and_midpoint():
    op = core.Translation([1.0])
    steps = discrete.StepSequence.constant(0.5, 4)
    orbit = discrete.euler_scheme(op, [0.0], steps)
    assert discrete.euler_interpolant(orbit, 0.0)[0] == 0.0
    assert discrete.euler_interpolant(orbit, 2.0)[0] == pytest.approx(2.0)
    mid = discrete.euler_interpolant(orbit, 0.25)[0]
    assert mid == pytest.approx(0.25)
    with pytest.raises(InputError):
        discrete.euler_interpolant(orbit, 3.0)


def test_phi_recursion_matches_manual():
    op = core.Translation([2.0])
    lam = [0.5, 0.25]
    orbit = discrete.phi_recursion(op, lam)
    w1 = core.apply_Phi(op, 0.5, np.zeros(1))
    w2 = core.apply_Phi(op, 0.25, w1)
    assert np.allclose(orbit.points[1], w1)
    assert np.allclose(orbit.points[2], w2)


def test_resolvent_translation_closed_form():
    # x + lam (x - (x + c)) = y  =>  x = y + lam c
    op = core.Translation([3.0])
    for lam in (0.5, 2.0, 10.0):
        x = discrete.resolvent(op, lam, [1.0], tol=1e-13)
        assert x[0] == pytest.approx(1.0 + 3.0 * lam, abs=1e-12)


def test_resolvent_satisfies_equation():
    op = shapley.ShapleyOperator(shapley.random_game(2, 2, 2, seed=1))
    y = np.array([0.3, -0.8])
    lam = 1.5
    x = discrete.resolvent(op, lam, y, tol=1e-13)
    assert op.norm(x + lam * core.apply_A(op, x) - y) <= 1e-12


def test_proximal_beats_explicit_on_rotation():
    # the implicit scheme contracts to the fixed point 0 for a rotation,
    # while the explicit unit-step scheme only moves along the circle
    op = core.rotation(np.pi / 6.0)
    x0 = np.array([1.0, 0.0])
    steps = discrete.StepSequence.constant(1.0, 50)
    prox = discrete.proximal_orbit(op, x0, steps)
    expl = discrete.euler_scheme(op, x0, steps)
    assert op.norm(prox.points[-1]) < 1e-3
    assert op.norm(expl.points[-1]) == pytest.approx(1.0, abs=1e-9)


def test_kobayashi_rhs_values_and_validation():
    op = core.Translation([1.0])
    s1 = discrete.StepSequence.constant(0.5, 4)
    s2 = discrete.StepSequence.constant(0.25, 8)
    rhs = discrete.kobayashi_rhs(s1, s2, 4, 8, [0.0], [1.0], op)
    # sigma budgets coincide at (4, 8); only the tau terms remain
    want = 1.0 + 1.0 * np.sqrt(4 * 0.25 + 8 * 0.0625)
    assert rhs == pytest.approx(want)
    with pytest.raises(InputError):
        discrete.kobayashi_rhs(s1, s2, 5, 0, [0.0], [1.0], op)


def test_kobayashi_inequality_sampled():
    op = core.rotation(np.pi / 6.0)
    rng = np.random.default_rng(2)
    x0 = np.array([1.0, 0.0])
    xhat0 = np.array([0.0, -1.0])
    for _ in range(10):
        s1 = discrete.StepSequence(rng.uniform(0.05, 1.0, size=30))
        s2 = discrete.StepSequence(rng.uniform(0.05, 1.0, size=30))
        o1 = discrete.euler_scheme(op, x0, s1)
        o2 = discrete.euler_scheme(op, xhat0, s2)
        for k in (0, 10, 30):
            for l in (0, 15, 30):
                lhs = op.norm(o1.points[k] - o2.points[l])
                rhs = discrete.kobayashi_rhs(s1, s2, k, l, x0, xhat0, op)
                assert lhs <= rhs + 1e-9
