"""Morse index and linearization spectra against spectral oracles."""

import math

import numpy as np
import pytest

from nlsbranch import (
    RadialGrid,
    ball_hardy_problem,
    frac_power_problem,
    linearized_operator,
    morse_index,
    solve_from_bump,
)
from nlsbranch.grids import ShiftedSystem, integrate
from nlsbranch.problems import operator
from nlsbranch.spectrum import quadratic_form_at_state


def test_soliton_morse_index_and_even_sector_spectrum(soliton, cubic_problem, soliton_grid):
    rep = morse_index(cubic_problem, soliton_grid, soliton)
    assert rep.morse_index == 1
    assert rep.nondegenerate
    # even-sector spectrum of -d2 + 1 - 6 sech^2: ground level -3, continuum edge 1
    assert abs(rep.eigenvalues[0] + 3.0) < 1e-3
    assert rep.eigenvalues[1] > 0.9
    assert np.all(np.diff(rep.eigenvalues) >= 0)


def test_quadratic_form_identity(soliton, cubic_problem, soliton_grid):
    qf = quadratic_form_at_state(cubic_problem, soliton_grid, soliton)
    expected = (2.0 - 4.0) * integrate(soliton_grid, np.abs(soliton.u) ** 4)
    assert expected < 0
    assert abs(qf - expected) / abs(expected) < 1e-8


def test_ball_ground_state_morse_one():
    problem = ball_hardy_problem(3, 1.0, 2.5)
    grid = RadialGrid.ball(3, 1000)
    sol = solve_from_bump(problem, grid, 2.0)
    rep = morse_index(problem, grid, sol)
    assert rep.morse_index == 1
    assert rep.nondegenerate
    qf = quadratic_form_at_state(problem, grid, sol)
    expected = (2.0 - 2.5) * integrate(grid, grid.nodes ** (-1.0) * np.abs(sol.u) ** 2.5)
    assert abs(qf - expected) / abs(expected) < 1e-8


def test_tiny_amplitude_state_near_bifurcation_morse_one():
    problem = ball_hardy_problem(3, 1.0, 2.5)
    grid = RadialGrid.ball(3, 1000)
    sol = solve_from_bump(problem, grid, math.pi**2 - 0.1)
    rep = morse_index(problem, grid, sol)
    assert rep.morse_index == 1


def test_linear_limit_positive_definite_below_lambda1():
    problem = ball_hardy_problem(3, 1.0, 2.5)
    grid = RadialGrid.ball(3, 800)
    op = operator(problem, grid)
    # with the nonlinear term absent, L = A - lambda is PD for lambda < lambda_1
    for lam in (-10.0, 0.0, 9.0):
        sys = ShiftedSystem(op, -lam)
        assert sys.inertia(0.0) == 0
        vals, _ = sys.lowest_eigs(1)
        assert vals[0] > 0


def test_linearized_operator_symmetry(soliton, cubic_problem, soliton_grid):
    lin = linearized_operator(cubic_problem, soliton_grid, soliton)
    rng = np.random.default_rng(5)
    u, w = rng.standard_normal(soliton_grid.n), rng.standard_normal(soliton_grid.n)
    a = np.dot(soliton_grid.weights * w, lin.apply(u))
    b = np.dot(soliton_grid.weights * u, lin.apply(w))
    assert abs(a - b) < 1e-12 * soliton_grid.norm(u) * soliton_grid.norm(w) * lin.system.norm_estimate()


def test_linearized_operator_requires_converged(cubic_problem, soliton_grid):
    from nlsbranch import Solution

    bad = Solution(lam=-1.0, u=np.ones(soliton_grid.n), residual_norm=1.0, mass=1.0, energy=0.0, converged=False)
    with pytest.raises(ValueError):
        linearized_operator(cubic_problem, soliton_grid, bad)


def test_fractional_minimizer_morse_one():
    problem = frac_power_problem(0.5, 1, 3.0)
    grid = RadialGrid.whole_space(1, 1024, 60.0)
    sol = solve_from_bump(problem, grid, -1.0)
    rep = morse_index(problem, grid, sol)
    assert rep.morse_index == 1
    assert rep.nondegenerate


def test_index_stability_along_branch(branch_subcritical, cubic_problem, branch_grid):
    idx = {morse_index(cubic_problem, branch_grid, s).morse_index for s in branch_subcritical.solutions[::7]}
    assert idx == {1}
