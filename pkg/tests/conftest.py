"""Shared fixtures; the expensive sweeps are session-scoped and reused."""

from __future__ import annotations

import numpy as np
import pytest

from nlsbranch import (
    RadialGrid,
    StepControl,
    ball_hardy_problem,
    continue_branch,
    frac_power_problem,
    mass_curve,
    nls_potential_problem,
    solve_from_bump,
)
from nlsbranch.problems import inverse_poly_weight


@pytest.fixture(scope="session")
def cubic_problem():
    return frac_power_problem(1.0, 1, 4.0)


@pytest.fixture(scope="session")
def soliton_grid():
    return RadialGrid.whole_space(1, 4096, 30.0)


@pytest.fixture(scope="session")
def soliton(cubic_problem, soliton_grid):
    return solve_from_bump(cubic_problem, soliton_grid, -1.0)


@pytest.fixture(scope="session")
def branch_grid():
    return RadialGrid.whole_space(1, 3000, 36.0)


@pytest.fixture(scope="session")
def branch_subcritical(cubic_problem, branch_grid):
    return continue_branch(
        cubic_problem, branch_grid, -4.0, -0.25, StepControl(initial=0.05, max_step=0.05)
    )


@pytest.fixture(scope="session")
def branch_supercritical():
    problem = nls_potential_problem(1, 8.0, depth=0)
    grid = RadialGrid.whole_space(1, 4096, 30.0)
    branch = continue_branch(problem, grid, -50.0, -0.5, StepControl(initial=0.2, max_step=1.0))
    return problem, grid, branch

@pytest.fixture(scope="session")
def branch_ball():
    problem = ball_hardy_problem(3, 1.0, 2.5)
    grid = RadialGrid.ball(3, 8192)
    lam_top = np.pi**2 - 0.1
    branch = continue_branch(problem, grid, -50.0, lam_top, StepControl(initial=0.5, max_step=1.0))
    return problem, grid, branch


@pytest.fixture(scope="session")
def curve_grid():
    return RadialGrid.whole_space(1, 1536, 36.0)


@pytest.fixture(scope="session")
def pure_power_curve(cubic_problem, curve_grid):
    c_grid = np.geomspace(0.5, 4.0, 20)
    return mass_curve(cubic_problem, curve_grid, c_grid, multistart=2, seed=0)


@pytest.fixture(scope="session")
def weighted_curve():
    problem = frac_power_problem(1.0, 2, 3.0, weight=inverse_poly_weight(0.25))
    grid = RadialGrid.whole_space(2, 2048, 150.0)
    c_grid = np.geomspace(0.5, 4.0, 20)
    return problem, grid, mass_curve(problem, grid, c_grid, multistart=2, seed=0)
