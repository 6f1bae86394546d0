"""Constrained minimization, mass curves and crossing analysis vs closed forms.

Pure-power 1D oracle (p = 4): the constrained minimizer is the soliton
sqrt(2 w) sech(sqrt(w) x) with w = c^2/4, giving m(c) = -c^3/12 and
multiplier lambda(c) = -c^2/4.
"""

import math

import numpy as np
import pytest

from nlsbranch import (
    RadialGrid,
    counterexample_crossing,
    frac_power_problem,
    lambda_set_scan,
    m_expression_check,
    mass_curve,
    minimize_on_sphere,
    scaling_exponent,
    two_power_problem,
)
from nlsbranch.massmin import UnboundedEnergyError, _flow_to_minimum, _normalize
from nlsbranch.problems import energy_gradient, eval_mass, nls_potential_problem, operator
from nlsbranch.solve import initial_bump
from nlsbranch.diagnostics import estimate_gn_constant


def exact_m(c):
    return -(c**3) / 12.0


def exact_lam(c):
    return -(c**2) / 4.0


def test_minimizer_closed_form_c1(cubic_problem, curve_grid):
    res = minimize_on_sphere(cubic_problem, curve_grid, 1.0, multistart=3, seed=0)
    assert abs(res.m - exact_m(1.0)) / abs(exact_m(1.0)) < 1e-3
    assert abs(res.lam - exact_lam(1.0)) / abs(exact_lam(1.0)) < 1e-3
    assert res.stationarity < 1e-9
    assert len(res.distinct_minima) == 1
    assert abs(eval_mass(curve_grid, res.u) - 1.0) < 1e-10


def test_minimizer_closed_form_c2(cubic_problem, curve_grid):
    res = minimize_on_sphere(cubic_problem, curve_grid, 2.0, multistart=2, seed=1)
    assert abs(res.m + 2.0 / 3.0) / (2.0 / 3.0) < 1e-3
    assert abs(res.lam + 1.0) < 1e-3


def test_minimizer_multiplier_consistency(cubic_problem, curve_grid):
    res = minimize_on_sphere(cubic_problem, curve_grid, 1.5, multistart=2, seed=2)
    op = operator(cubic_problem, curve_grid)
    g = energy_gradient(cubic_problem, curve_grid, res.u, op)
    lam = curve_grid.inner(g, res.u) / (2.0 * res.c)
    assert abs(lam - res.lam) < 1e-8 * max(1.0, abs(res.lam))


def test_minimizer_positive_and_monotone(cubic_problem, curve_grid):
    res = minimize_on_sphere(cubic_problem, curve_grid, 1.0, multistart=2, seed=3)
    assert np.all(res.u > 0)
    assert np.all(np.diff(res.u) <= 1e-10 * np.max(res.u))


def test_scaling_inequality(pure_power_curve):
    # m(k^2 c) <= k^2 m(c) with k = 2
    m_half = pure_power_curve.interp_m(0.5)
    m_two = pure_power_curve.interp_m(2.0)
    assert m_two <= 4.0 * m_half


def test_supercritical_rejected():
    problem = nls_potential_problem(1, 8.0, depth=0)
    grid = RadialGrid.whole_space(1, 256, 20.0)
    with pytest.raises(UnboundedEnergyError, match="unbounded below"):
        minimize_on_sphere(problem, grid, 1.0)


def test_nonpositive_mass_rejected(cubic_problem, curve_grid):
    with pytest.raises(ValueError):
        minimize_on_sphere(cubic_problem, curve_grid, -1.0)


def test_flow_invariants(cubic_problem, curve_grid):
    op = operator(cubic_problem, curve_grid)
    record = []
    u0 = initial_bump(curve_grid, 2.0)
    _flow_to_minimum(cubic_problem, curve_grid, op, u0, 1.0, record=record, lam_bound=0.0)
    K = np.array([k for k, _, _ in record])
    E = np.array([e for _, e, _ in record])
    Q = np.array([q for _, _, q in record])
    # sphere projection exact after every step
    assert np.max(np.abs(Q - 1.0)) < 1e-12
    # energy never increases between accepted steps
    assert np.all(np.diff(E) <= 1e-13 * np.maximum(1.0, np.abs(E[:-1])))
    # kinetic term bounded by the coercivity level set of the start energy
    p, N, s = 4.0, 1, 1.0
    gamma = N * (p - 2.0) / (4.0 * s)
    C = estimate_gn_constant(s, N, p)
    D = C * (2.0 * 1.0) ** (0.5 * p - gamma) / p
    from scipy.optimize import brentq

    # largest root of the level set 0.5 K - D K^gamma = E0 (right of the dip)
    K_dip = (D * gamma * 2.0) ** (1.0 / (1.0 - gamma))
    K_star = brentq(lambda K_: 0.5 * K_ - D * K_**gamma - E[0], K_dip, 1e9)
    assert K.max() <= 1.01 * K_star


def test_curve_closed_form_and_quotient_order(pure_power_curve):
    c = pure_power_curve.c
    assert np.max(np.abs(pure_power_curve.m - exact_m(c)) / np.abs(exact_m(c))) < 1e-3
    assert np.max(np.abs(pure_power_curve.lam - exact_lam(c)) / np.abs(exact_lam(c))) < 1e-3
    # log-slope of -m(c) is the scaling exponent 3
    slope = np.polyfit(np.log(c), np.log(-pure_power_curve.m), 1)[0]
    assert abs(slope - 3.0) < 1e-3
    # sandwich ordering dq_right <= lambda <= dq_left (concave m)
    mid = slice(1, -1)
    tol = 1e-8 + 3.0 * np.nan_to_num(pure_power_curve.richardson[mid], nan=1.0)
    assert np.all(pure_power_curve.dq_right[mid] <= pure_power_curve.lam[mid] + tol)
    assert np.all(pure_power_curve.lam[mid] <= pure_power_curve.dq_left[mid] + tol)


def test_curve_strict_properties(pure_power_curve):
    assert np.all(pure_power_curve.m < 0)
    assert np.all(np.isfinite(pure_power_curve.m))
    assert np.all(np.diff(pure_power_curve.m) < -1e-9)
    assert np.all(pure_power_curve.lam < 0)
    assert pure_power_curve.kink_indices == []
    assert np.all(pure_power_curve.morse == 1)


def test_curve_centered_difference_matches_multiplier(cubic_problem, curve_grid):
    for c in (0.8, 2.0):
        delta = 0.02 * c
        mp = minimize_on_sphere(cubic_problem, curve_grid, c + delta, 2, seed=4).m
        mm = minimize_on_sphere(cubic_problem, curve_grid, c - delta, 2, seed=5).m
        lam = minimize_on_sphere(cubic_problem, curve_grid, c, 2, seed=6).lam
        assert abs((mp - mm) / (2 * delta) - lam) / abs(lam) < 1e-3


def test_subadditivity_spot_check(pure_power_curve):
    rng = np.random.default_rng(11)
    for _ in range(4):
        c1 = rng.uniform(0.6, 1.8)
        c2 = rng.uniform(0.6, 1.8)
        m_sum = pure_power_curve.interp_m(c1 + c2)
        assert m_sum < pure_power_curve.interp_m(c1) + pure_power_curve.interp_m(c2)


def test_curve_requires_increasing_grid(cubic_problem, curve_grid):
    with pytest.raises(ValueError):
        mass_curve(cubic_problem, curve_grid, np.array([1.0, 0.5]))


def test_lambda_scan_single_cluster(cubic_problem, curve_grid):
    l1, l2 = lambda_set_scan(cubic_problem, curve_grid, 1.0, multistart_budget=4, seed=0)
    assert abs(l1 - l2) < 1e-8
    assert abs(l1 - exact_lam(1.0)) < 1e-3


def test_scaling_exponent_closed_forms():
    # alpha = (2sp - N(p-2)) / (4s - N(p-2))
    assert abs(scaling_exponent(1.0, 1, 4.0) - 3.0) < 1e-14
    assert abs(scaling_exponent(1.0, 1, 3.0) - 5.0 / 3.0) < 1e-14
    with pytest.raises(ValueError):
        scaling_exponent(1.0, 1, 6.0)


def test_crossing_rejects_equal_exponents(curve_grid):
    with pytest.raises(ValueError):
        counterexample_crossing(1.0, 1, 3.0, 3.0, curve_grid)


def test_crossing_against_closed_form(curve_grid):
    cr = counterexample_crossing(1.0, 1, 4.0, 3.0, curve_grid, multistart=2, seed=0)
    # m+(1) = -1/12; m-(1) = -(9/5) 3^(-5/3); crossing of the two power laws
    m_p = -1.0 / 12.0
    m_q = -(9.0 / 5.0) * 3.0 ** (-5.0 / 3.0)
    c_hat = (m_q / m_p) ** (1.0 / (3.0 - 5.0 / 3.0))
    assert abs(cr.m_plus_1 - m_p) / abs(m_p) < 1e-3
    assert abs(cr.m_minus_1 - m_q) / abs(m_q) < 1e-3
    assert abs(cr.c_hat - c_hat) / c_hat < 2e-3
    m_hat = exact_m(cr.c_hat)
    assert abs(cr.dq_left - (5.0 / 3.0) * m_hat / cr.c_hat) < 2e-2
    assert abs(cr.dq_right - 3.0 * m_hat / cr.c_hat) < 2e-2
    gap = abs(cr.dq_left - cr.dq_right)
    assert abs(gap - (3.0 - 5.0 / 3.0) * abs(m_hat) / cr.c_hat) < 3e-2
    assert gap > 10.0 * cr.richardson_error


def test_two_power_scan_far_from_crossing(curve_grid):
    problem = two_power_problem(1.0, 1, 4.0, 3.0)
    l1, l2 = lambda_set_scan(problem, curve_grid, 5.0, multistart_budget=6, energy_tol=1e-8, seed=0)
    assert abs(l1 - l2) < 1e-6  # single achieving cluster away from the crossing


def test_m_expression_pure_power(cubic_problem, pure_power_curve):
    rep = m_expression_check(cubic_problem, pure_power_curve)
    assert not rep.inconclusive
    # h identically 1: the weight integral vanishes and the ODE collapses to 3 m / c
    assert rep.max_ode_residual < 1e-3
    assert rep.max_pohozaev_residual < 1e-3
    assert rep.max_multiplier_residual < 1e-3


def test_m_expression_insufficient_curve(cubic_problem, curve_grid):
    tiny = mass_curve(cubic_problem, curve_grid, np.array([1.0, 1.5, 2.0]), multistart=1, seed=0, with_morse=False)
    rep = m_expression_check(cubic_problem, tiny)
    assert rep.inconclusive


def test_m_expression_requires_classical_operator(curve_grid):
    problem = frac_power_problem(0.5, 1, 3.0)
    grid = RadialGrid.whole_space(1, 512, 60.0)
    curve = mass_curve(problem, grid, np.array([0.8, 1.0, 1.3, 1.7, 2.2]), multistart=1, seed=0, with_morse=False)
    with pytest.raises(ValueError):
        m_expression_check(problem, curve)


def test_normalize_exactness(curve_grid):
    u = initial_bump(curve_grid, 2.0)
    for c in (0.3, 1.0, 7.5):
        v = _normalize(curve_grid, u, c)
        assert abs(eval_mass(curve_grid, v) - c) / c < 1e-12
