"""Newton solver, Nehari initialization and branch continuation.

The stationary equation A u + V u = lambda u + f(r, u) is solved by a
damped Newton iteration on its strong-form residual, started from a
Gaussian bump rescaled onto the Nehari set.  Branches are traced in
lambda by a natural-parameter predictor-corrector; each node records the
tangent v (the lambda-derivative of the branch, solving L v = u with L
the linearized operator) and the mass derivative 2 int u v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .grids import DiscreteOperator, RadialGrid, ShiftedSystem, integrate
from .problems import (
    ProblemSpec,
    eval_energy,
    eval_mass,
    eval_action_gradient,
    linear_lambda1,
    operator,
)

__all__ = [
    "Solution",
    "Branch",
    "StepControl",
    "NehariError",
    "DegeneratePointError",
    "TangentError",
    "nehari_project",
    "newton_solve",
    "branch_tangent",
    "continue_branch",
    "sign_changes",
    "initial_bump",
]


class NehariError(ValueError):
    """No positive Nehari scaling exists for the given direction."""


class DegeneratePointError(RuntimeError):
    """The linearization is numerically singular."""


class TangentError(RuntimeError):
    """Tangent unreliable near a degenerate point."""


@dataclass
class Solution:
    """A converged (or flagged) stationary state at fixed lambda.

    mass is int u^2 (twice the constraint functional Q).
    """

    lam: float
    u: np.ndarray = field(repr=False)
    residual_norm: float
    mass: float
    energy: float
    converged: bool
    iterations: int = 0

    def q(self) -> float:
        return 0.5 * self.mass

    def is_positive(self) -> bool:
        return bool(np.all(self.u > 0))

    def is_radially_nonincreasing(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.diff(self.u) <= tol * max(1.0, float(np.max(np.abs(self.u))))))


@dataclass
class StepControl:
    initial: float = 0.05
    min_step: float = 1e-6
    max_step: float = 1.0
    grow: float = 1.5
    shrink: float = 0.5
    fast_iters: int = 4


@dataclass
class Branch:
    """Ordered branch data, lambda strictly increasing along storage order."""

    problem: ProblemSpec
    grid: RadialGrid
    lam: np.ndarray
    mass: np.ndarray
    energy: np.ndarray
    residual: np.ndarray
    mass_derivative: np.ndarray
    v0: np.ndarray  # tangent value at the first grid node
    tangent_sign_changes: np.ndarray
    solutions: list = field(repr=False)
    tangents: list = field(repr=False)
    truncated: bool = False
    reason: str = ""

    def __len__(self) -> int:
        return self.lam.size

    def node(self, i: int) -> Solution:
        return self.solutions[i]


def initial_bump(grid: RadialGrid, width: float, amplitude: float = 1.0) -> np.ndarray:
    """Radially decreasing Gaussian bump, damped to honor the Dirichlet edge."""
    r = grid.nodes
    u = amplitude * np.exp(-((r / width) ** 2))
    return u * (1.0 - (r / grid.R) ** 2)


def default_width(problem: ProblemSpec, lam: float) -> float:
    if problem.domain_kind == "unit_ball":
        return 0.4
    scale = math.sqrt(max(abs(lam), 1e-6))
    return min(2.0 / (max(problem.p - 2.0, 0.5) * scale) * 2.0, 5.0)


def nehari_project(
    problem: ProblemSpec,
    grid: RadialGrid,
    u: np.ndarray,
    lam: float,
    op: DiscreteOperator | None = None,
) -> np.ndarray:
    """Rescale u to t u with <D Phi_lambda(t u), t u> = 0, t > 0.

    For a pure power p the scaling is explicit,
    t^(p-2) = (<A u, u> + int (V - lambda) u^2) / int h |u|^p;
    otherwise t is found by 1D root finding.
    """
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        raise NehariError("cannot project the zero vector")
    if op is None:
        op = operator(problem, grid)
    r = grid.nodes
    quad = op.quadratic_form(u) - lam * integrate(grid, u**2)
    if problem.potential is not None:
        quad += integrate(grid, problem.V_values(r) * u**2)
    if quad <= 0:
        raise NehariError("not in Nehari cone: quadratic part nonpositive")
    if problem.is_pure_power:
        denom = integrate(grid, problem.h_values(r) * np.abs(u) ** problem.p)
        if denom <= 0:
            raise NehariError("not in Nehari cone: nonlinear term vanishes")
        t = (quad / denom) ** (1.0 / (problem.p - 2.0))
        return t * u

    nl = problem.nonlinearity

    def g(t):
        return quad - integrate(grid, nl.f(r, t * u) * u) / t

    t_hi = 1.0
    for _ in range(200):
        if g(t_hi) < 0:
            break
        t_hi *= 2.0
    else:
        raise NehariError("not in Nehari cone: no growth crossing found")
    t_lo = t_hi
    for _ in range(200):
        t_lo *= 0.5
        if g(t_lo) > 0:
            break
    else:
        raise NehariError("not in Nehari cone: nonlinear term dominates at all scales")
    t = brentq(g, t_lo, t_hi, xtol=1e-14, rtol=1e-14)
    return t * u


def _linearization_diag(problem: ProblemSpec, grid: RadialGrid, u: np.ndarray, lam: float) -> np.ndarray:
    d = -lam - problem.nonlinearity.f_t(grid.nodes, u)
    if problem.potential is not None:
        d = d + problem.V_values(grid.nodes)
    return np.asarray(d, dtype=float)


def newton_solve(
    problem: ProblemSpec,
    grid: RadialGrid,
    lam: float,
    u0: np.ndarray,
    op: DiscreteOperator | None = None,
    tol: float = 1e-10,
    max_iter: int = 50,
    enforce_lambda_bound: bool = True,
) -> Solution:
    """Damped Newton iteration on the strong-form residual.

    Armijo backtracking on the squared residual norm; negative undershoots
    are clipped during globalization only.  residual_norm is relative to
    the weighted norm of u.
    """
    if op is None:
        op = operator(problem, grid)
    if enforce_lambda_bound:
        lam1 = linear_lambda1(problem, grid, op)
        if lam >= lam1:
            raise ValueError(f"lambda={lam} is not below the linear bound {lam1:.6f}")
    u = np.asarray(u0, dtype=float).copy()
    res = eval_action_gradient(problem, grid, u, lam, op)

    def norm(v):
        return grid.norm(v)

    rnorm = norm(res)
    it = 0
    tol_eff = tol
    stall_accept = tol
    stalled = False
    for it in range(1, max_iter + 1):
        scale = max(norm(u), 1e-30)
        if rnorm <= tol_eff * scale:
            break
        d = _linearization_diag(problem, grid, u, lam)
        sys = ShiftedSystem(op, d)
        if it == 1:
            # relative residuals below eps * ||L|| are roundoff, not signal
            op_norm = sys.norm_estimate()
            tol_eff = max(tol, 2.0 * np.finfo(float).eps * op_norm)
            stall_accept = max(tol_eff, 50.0 * np.finfo(float).eps * op_norm)
        inner_rtol = float(np.clip(3e-2 * rnorm / scale, 1e-13, 1e-5))
        try:
            step = sys.solve(-res, rtol=inner_rtol)
        except np.linalg.LinAlgError as exc:
            raise DegeneratePointError(f"degenerate point at lambda={lam}") from exc
        if not np.all(np.isfinite(step)):
            raise DegeneratePointError(f"degenerate point at lambda={lam}")
        alpha = 1.0
        accepted = False
        for _ in range(40):
            cand = u + alpha * step
            if alpha < 1.0:
                cand = np.maximum(cand, 0.0) if np.all(u >= 0) else cand
            cand_res = eval_action_gradient(problem, grid, cand, lam, op)
            cand_norm = norm(cand_res)
            if cand_norm <= (1.0 - 1e-4 * alpha) * rnorm:
                u, res, rnorm = cand, cand_res, cand_norm
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            stalled = True
            break
    scale = max(norm(u), 1e-30)
    converged = bool(rnorm <= (stall_accept if stalled else tol_eff) * scale)
    return Solution(
        lam=float(lam),
        u=u,
        residual_norm=float(rnorm / scale),
        mass=integrate(grid, u**2),
        energy=eval_energy(problem, grid, u, op),
        converged=converged,
        iterations=it,
    )


def solve_from_bump(
    problem: ProblemSpec,
    grid: RadialGrid,
    lam: float,
    widths=None,
    op: DiscreteOperator | None = None,
    tol: float = 1e-10,
) -> Solution:
    """Newton from Nehari-projected bumps, first width that converges wins."""
    if op is None:
        op = operator(problem, grid)
    base = default_width(problem, lam)
    if widths is None:
        widths = base * np.array([1.0, 0.5, 2.0, 0.25, 4.0])
    last = None
    for w in np.atleast_1d(widths):
        try:
            u0 = nehari_project(problem, grid, initial_bump(grid, float(w)), lam, op)
            sol = newton_solve(problem, grid, lam, u0, op, tol=tol)
        except (NehariError, DegeneratePointError):
            continue
        last = sol
        if sol.converged and np.all(sol.u >= -1e-13 * np.max(np.abs(sol.u))):
            return sol
    if last is not None:
        return last
    raise DegeneratePointError(f"no converged state found at lambda={lam}")


def branch_tangent(
    problem: ProblemSpec,
    grid: RadialGrid,
    sol: Solution,
    op: DiscreteOperator | None = None,
    cond_limit: float = 1e12,
) -> np.ndarray:
    """Tangent v of the branch: solves L v = u with L = A + V - lambda - f_t(u)."""
    if not sol.converged:
        raise ValueError("tangent requires a converged solution")
    if sol.mass <= 0:
        raise ValueError("tangent requires a nontrivial solution")
    if op is None:
        op = operator(problem, grid)
    d = _linearization_diag(problem, grid, sol.u, sol.lam)
    sys = ShiftedSystem(op, d)
    try:
        v = sys.solve(sol.u)
    except np.linalg.LinAlgError as exc:
        raise TangentError("tangent unreliable near degeneracy") from exc
    # cheap condition proxy: ||L||_inf * ||v|| / ||u||
    cond = sys.norm_estimate() * grid.norm(v) / max(grid.norm(sol.u), 1e-300)
    if not np.all(np.isfinite(v)) or cond > cond_limit:
        raise TangentError("tangent unreliable near degeneracy")
    return v


def sign_changes(grid: RadialGrid, v: np.ndarray, deadband: float = 1e-9) -> int:
    """Strict sign alternations among nodes with |v| above the dead band."""
    v = np.asarray(v, dtype=float)
    vmax = np.max(np.abs(v))
    if vmax == 0:
        return 0
    keep = np.abs(v) > deadband * vmax
    signs = np.sign(v[keep])
    if signs.size == 0:
        return 0
    return int(np.count_nonzero(np.diff(signs) != 0))


def continue_branch(
    problem: ProblemSpec,
    grid: RadialGrid,
    lam_start: float,
    lam_end: float,
    step_ctrl: StepControl | None = None,
    seed: Solution | None = None,
    op: DiscreteOperator | None = None,
    tol: float = 1e-10,
    max_nodes: int = 100000,
) -> Branch:
    """Natural-parameter predictor-corrector sweep from lam_start to lam_end.

    Predictor u + dlam * v, corrector Newton; the step is halved on
    corrector failure and grown after fast convergence.  Folds are not
    traversed: a tangent blow-up truncates the branch with a reason.
    """
    if step_ctrl is None:
        step_ctrl = StepControl()
    if lam_start == lam_end:
        raise ValueError("empty lambda range")
    if op is None:
        op = operator(problem, grid)
    lam1 = linear_lambda1(problem, grid, op)
    if max(lam_start, lam_end) >= lam1:
        raise ValueError(f"lambda range must stay below the linear bound {lam1:.6f}")

    sol = seed if seed is not None else solve_from_bump(problem, grid, lam_start, op=op, tol=tol)
    if not sol.converged:
        raise DegeneratePointError(f"seed solve failed at lambda={lam_start}")

    direction = 1.0 if lam_end > lam_start else -1.0
    nodes: list[Solution] = []
    tangents: list[np.ndarray] = []
    truncated, reason = False, ""

    def record(s: Solution):
        v = branch_tangent(problem, grid, s, op)
        nodes.append(s)
        tangents.append(v)
        return v

    v = record(sol)
    dlam = step_ctrl.initial
    lam = sol.lam
    while direction * (lam_end - lam) > 1e-12 and len(nodes) < max_nodes:
        dlam = min(dlam, abs(lam_end - lam))
        while True:
            lam_next = lam + direction * dlam
            pred = sol.u + direction * dlam * v
            cand = newton_solve(problem, grid, lam_next, pred, op, tol=tol, enforce_lambda_bound=False)
            # a mass crash signals collapse onto the trivial solution, not a
            # branch point: treat it as a corrector failure
            ok = (
                cand.converged
                and cand.mass > 0.05 * sol.mass
                and np.min(cand.u) > -1e-12 * np.max(cand.u)
            )
            if ok:
                break
            dlam *= step_ctrl.shrink
            if dlam < step_ctrl.min_step:
                truncated, reason = True, f"corrector failed near lambda={lam_next:.6g} at minimal step"
                break
        if truncated:
            break
        sol = cand
        lam = sol.lam
        try:
            v = record(sol)
        except TangentError as exc:
            truncated, reason = True, str(exc)
            break
        if sol.iterations <= step_ctrl.fast_iters:
            dlam = min(dlam * step_ctrl.grow, step_ctrl.max_step)

    order = np.argsort([s.lam for s in nodes])
    nodes = [nodes[i] for i in order]
    tangents = [tangents[i] for i in order]
    lam_arr = np.array([s.lam for s in nodes])
    mass_arr = np.array([s.mass for s in nodes])
    energy_arr = np.array([s.energy for s in nodes])
    res_arr = np.array([s.residual_norm for s in nodes])
    mder = np.array([2.0 * integrate(grid, s.u * t) for s, t in zip(nodes, tangents)])
    v0 = np.array([t[0] for t in tangents])
    sc = np.array([sign_changes(grid, t) for t in tangents])
    return Branch(
        problem=problem,
        grid=grid,
        lam=lam_arr,
        mass=mass_arr,
        energy=energy_arr,
        residual=res_arr,
        mass_derivative=mder,
        v0=v0,
        tangent_sign_changes=sc,
        solutions=nodes,
        tangents=tangents,
        truncated=truncated,
        reason=reason,
    )
