"""Grids, quadrature and operator assembly against independent oracles."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma, jn_zeros

import nlsbranch.grids as grids
from nlsbranch.grids import (
    RadialGrid,
    ShiftedSystem,
    build_fractional_laplacian_1d,
    build_radial_laplacian,
    fractional_stencil_weights,
    integrate,
    sphere_area,
)


def test_weights_positive_and_sum_exact():
    for N in (1, 2, 3, 5):
        g = RadialGrid.whole_space(N, 400, 25.0)
        assert np.all(g.weights > 0)
        exact = sphere_area(N) * 25.0**N / N
        assert abs(g.weights.sum() - exact) / exact < 1e-10


def test_nodes_strictly_increasing_inside_domain():
    g = RadialGrid.ball(3, 100)
    assert np.all(np.diff(g.nodes) > 0)
    assert g.nodes[0] > 0 and g.nodes[-1] < 1.0


def test_integrate_ball_volume_and_moment():
    g = RadialGrid.ball(3, 2000)
    vol = integrate(g, np.ones(g.n))
    assert abs(vol - 4 * math.pi / 3) / (4 * math.pi / 3) < 1e-10
    # int_{B_1} r^2 dx = 4 pi / 5
    second = integrate(g, g.nodes**2)
    assert abs(second - 4 * math.pi / 5) / (4 * math.pi / 5) < 5e-6
    assert integrate(g, np.zeros(g.n)) == 0.0


def test_integrate_rejects_length_mismatch():
    g = RadialGrid.ball(3, 50)
    with pytest.raises(ValueError):
        integrate(g, np.ones(49))


def test_grid_rejects_bad_sizes():
    with pytest.raises(ValueError):
        RadialGrid.ball(3, 2)
    with pytest.raises(ValueError):
        RadialGrid.whole_space(0, 100, 10.0)


@pytest.mark.parametrize(
    "N,exact",
    [(3, math.pi**2), (2, jn_zeros(0, 1)[0] ** 2), (1, (math.pi / 2) ** 2)],
)
def test_ball_dirichlet_eigenvalue(N, exact):
    g = RadialGrid.ball(N, 2000)
    op = build_radial_laplacian(g)
    vals, _ = ShiftedSystem(op).lowest_eigs(1)
    assert abs(vals[0] - exact) / exact < 1e-5


def test_eigenvalue_refinement_order():
    exact = math.pi**2
    errs = []
    for n in (500, 1000):
        g = RadialGrid.ball(3, n)
        vals, _ = ShiftedSystem(build_radial_laplacian(g)).lowest_eigs(1)
        errs.append(abs(vals[0] - exact))
    assert errs[0] / errs[1] > 2.0  # at least first order under n -> 2n


def test_laplacian_of_constant_vanishes_inside():
    g = RadialGrid.whole_space(3, 500, 20.0)
    op = build_radial_laplacian(g)
    res = op.apply(np.ones(g.n))
    assert np.max(np.abs(res[:-1])) < 1e-10  # only the Dirichlet row sees the boundary


def test_laplacian_rejects_tiny_grid():
    with pytest.raises(ValueError):
        RadialGrid.ball(3, 2)


def test_operator_symmetry_weighted_inner_product():
    rng = np.random.default_rng(3)
    g = RadialGrid.whole_space(1, 400, 15.0)
    for op in (build_radial_laplacian(g), build_fractional_laplacian_1d(g, 0.6)):
        u, w = rng.standard_normal(g.n), rng.standard_normal(g.n)
        defect = abs(op.quadratic_form(u, w) - op.quadratic_form(w, u))
        assert defect < 1e-10 * g.norm(u) * g.norm(w)


def test_operator_positive_semidefinite():
    g = RadialGrid.whole_space(1, 300, 15.0)
    for op in (build_radial_laplacian(g), build_fractional_laplacian_1d(g, 0.4)):
        vals, _ = ShiftedSystem(op).lowest_eigs(1)
        assert vals[0] >= -1e-10
    gb = RadialGrid.ball(3, 300)
    vals, _ = ShiftedSystem(build_radial_laplacian(gb)).lowest_eigs(1)
    assert vals[0] > 0


# -- fractional kernel ---------------------------------------------------------


def _exact_weight(s, m):
    """50-digit evaluation of the 4th-difference kernel weight."""
    from mpmath import mp

    with mp.workdps(50):
        if abs(s - 0.5) < 1e-15:
            g = lambda x: mp.mpf(x) ** 2 * mp.log(x) if x > 0 else mp.mpf(0)  # noqa: E731
            d4 = g(abs(m - 2)) - 4 * g(abs(m - 1)) + 6 * g(m) - 4 * g(m + 1) + g(m + 2)
            return float(d4 / (2 * mp.pi))
        beta = mp.mpf(3 - 2 * s)
        g = lambda x: mp.mpf(abs(x)) ** beta  # noqa: E731
        d4 = g(m - 2) - 4 * g(m - 1) + 6 * g(m) - 4 * g(m + 1) + g(m + 2)
        return float(-mp.gamma(2 * s - 3) * mp.sin(mp.pi * s) / mp.pi * d4)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75, 0.9])
def test_fractional_weights_match_high_precision(s):
    w = fractional_stencil_weights(s, 2000)
    for m in (0, 1, 2, 47, 48, 100, 1000, 2000):
        exact = _exact_weight(s, m)
        assert abs(w[m] - exact) <= 1e-8 * max(abs(exact), 1e-12)


def test_fractional_weights_classical_limit():
    w = fractional_stencil_weights(1.0 - 1e-9, 10)
    assert abs(w[0] - 2.0) < 1e-6
    assert abs(w[1] + 1.0) < 1e-6
    assert abs(w[2]) < 1e-6


def _pv_oracle(x0, s, u, u2, u4, u6):
    """Symmetrized principal-value integral with a series patch near 0."""
    C = 4**s * gamma(0.5 + s) * s / (math.sqrt(math.pi) * gamma(1 - s))
    delta = 0.05
    # 2u(x0) - u(x0+z) - u(x0-z) = -u'' z^2 - u'''' z^4/12 - u^(6) z^6/360 + ...
    series = (
        -u2(x0) * delta ** (2 - 2 * s) / (2 - 2 * s)
        - u4(x0) / 12.0 * delta ** (4 - 2 * s) / (4 - 2 * s)
        - u6(x0) / 360.0 * delta ** (6 - 2 * s) / (6 - 2 * s)
    )
    f = lambda z: (2 * u(x0) - u(x0 + z) - u(x0 - z)) / z ** (1 + 2 * s)  # noqa: E731
    tail1, _ = quad(f, delta, 10.0, limit=300)
    tail2, _ = quad(f, 10.0, 400.0, limit=300)
    # beyond Z the integrand is 2 u(x0) z^(-1-2s) exactly (u has decayed)
    tail3 = 2 * u(x0) * 400.0 ** (-2 * s) / (2 * s)
    return C * (series + tail1 + tail2 + tail3)


@pytest.mark.parametrize("s", [0.3, 0.5, 0.75])
def test_fractional_gaussian_vs_pv_integral(s):
    g = RadialGrid.whole_space(1, 2048, 20.0)
    op = build_fractional_laplacian_1d(g, s)
    u = np.exp(-(g.nodes**2))
    Au = op.apply(u)
    x0 = g.nodes[0]
    uf = lambda x: math.exp(-x * x)  # noqa: E731
    u2 = lambda x: (4 * x * x - 2) * math.exp(-x * x)  # noqa: E731
    u4 = lambda x: (16 * x**4 - 48 * x**2 + 12) * math.exp(-x * x)  # noqa: E731
    u6 = lambda x: (64 * x**6 - 480 * x**4 + 720 * x**2 - 120) * math.exp(-x * x)  # noqa: E731
    oracle = _pv_oracle(x0, s, uf, u2, u4, u6)
    # cross-check the oracle against the spectral closed form at x ~ 0
    spectral0 = 4**s * gamma(s + 0.5) / math.sqrt(math.pi)
    if x0 < 0.01:
        assert abs(oracle - spectral0) / spectral0 < 5e-3
    assert abs(Au[0] - oracle) / abs(oracle) < 1e-3


def test_fractional_classical_limit_on_smooth_bump():
    g = RadialGrid.whole_space(1, 2048, 10.0)
    lap = build_radial_laplacian(g)
    u = np.cos(math.pi * g.nodes / (2 * g.R)) ** 2
    frac = build_fractional_laplacian_1d(g, 0.999)
    a, b = frac.apply(u), lap.apply(u)
    inner = g.nodes < g.R / 2
    assert np.linalg.norm((a - b)[inner]) / np.linalg.norm(b[inner]) < 1e-2


def test_fractional_s_continuity_rate():
    g = RadialGrid.whole_space(1, 1024, 10.0)
    lap = build_radial_laplacian(g)
    u = np.cos(math.pi * g.nodes / (2 * g.R)) ** 2
    inner = g.nodes < g.R / 2
    diffs = []
    for eps in (1e-2, 1e-3):
        frac = build_fractional_laplacian_1d(g, 1.0 - eps)
        d = np.linalg.norm((frac.apply(u) - lap.apply(u))[inner]) / np.linalg.norm(lap.apply(u)[inner])
        diffs.append(d)
    assert diffs[1] < 0.3 * diffs[0]  # O(eps) shrinkage


def test_fractional_zero_input_and_contracts():
    g = RadialGrid.whole_space(1, 200, 10.0)
    op = build_fractional_laplacian_1d(g, 0.5)
    assert np.all(op.apply(np.zeros(g.n)) == 0.0)
    with pytest.raises(ValueError):
        build_fractional_laplacian_1d(g, 1.2)
    with pytest.raises(ValueError):
        build_fractional_laplacian_1d(g, 0.0)
    with pytest.raises(ValueError):
        build_fractional_laplacian_1d(RadialGrid.ball(3, 100), 0.5)
    g2 = RadialGrid.whole_space(2, 100, 10.0)
    with pytest.raises(ValueError):
        build_fractional_laplacian_1d(g2, 0.5)


def test_fractional_fft_path_matches_dense(monkeypatch):
    g = RadialGrid.whole_space(1, 512, 20.0)
    dense_op = build_fractional_laplacian_1d(g, 0.6)
    monkeypatch.setattr(grids, "DENSE_LIMIT", 64)
    fft_op = grids.Fractional1D(g, 0.6)
    assert fft_op._dense is None
    rng = np.random.default_rng(0)
    u = rng.standard_normal(g.n)
    assert np.allclose(fft_op.apply(u), dense_op.apply(u), rtol=1e-12, atol=1e-12)


def test_minres_solve_matches_dense():
    g = RadialGrid.whole_space(1, 700, 20.0)
    op = build_fractional_laplacian_1d(g, 0.5)
    d = np.full(g.n, 0.7)
    sys = ShiftedSystem(op, d)
    rng = np.random.default_rng(1)
    rhs = rng.standard_normal(g.n)
    x_direct = sys.solve(rhs)
    x_minres = sys._solve_minres(rhs, rtol=1e-13)
    assert np.linalg.norm(x_direct - x_minres) / np.linalg.norm(x_direct) < 1e-9


def test_sturm_inertia_matches_eigvalsh():
    g = RadialGrid.ball(3, 300)
    op = build_radial_laplacian(g)
    rng = np.random.default_rng(2)
    d = -80.0 + 5.0 * rng.standard_normal(g.n)
    sys = ShiftedSystem(op, d)
    from scipy.linalg import eigvalsh

    S = sys.sym_dense()
    for sigma in (-5.0, 0.0, 12.0):
        assert sys.inertia(sigma) == int(np.count_nonzero(eigvalsh(S) < sigma))
