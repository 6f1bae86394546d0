"""Problem families: energies, nonlinearities, potentials and hypothesis checks.

A :class:`ProblemSpec` bundles the operator order s, the dimension, the
domain, and callable bundles for the radial weight h(r), the potential
V(r) and the nonlinearity f(r, t) together with its partial derivatives
and primitives.  The stationary equation in strong form is

    A u + V(r) u = lambda u + f(r, u),

with A the (fractional) radial Laplacian, and the associated functionals

    E(u)   = 1/2 <A u, u> + 1/2 int V u^2 - int F(r, u),
    Q(u)   = 1/2 int u^2,
    Phi(u) = E(u) - lambda Q(u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grids import (
    UNIT_BALL,
    WHOLE_SPACE,
    DiscreteOperator,
    RadialGrid,
    ShiftedSystem,
    integrate,
    operator_for,
)

__all__ = [
    "Nonlinearity",
    "RadialWeight",
    "Potential",
    "ProblemSpec",
    "HypothesisReport",
    "problem_preset",
    "eval_energy",
    "eval_mass",
    "eval_action_gradient",
    "check_hypotheses",
    "linear_lambda1",
]

FAMILY_FRACTIONAL = "fractional_power"
FAMILY_POTENTIAL = "potential_general_f"
FAMILY_BALL = "ball_inhomogeneous"
FAMILY_TWO_POWER = "custom_counterexample"

PRESET_IDS = ("frac_power", "nls_potential", "ball_hardy", "appendixA", "cubic_quintic")


@dataclass(frozen=True)
class Nonlinearity:
    """Callable bundle (f, f_t, f_r, F, F_r); all vectorized over (r, t)."""

    f: Callable
    f_t: Callable
    F: Callable
    f_r: Callable | None = None
    F_r: Callable | None = None
    odd: bool = True
    label: str = "custom"

    def fr(self, r, t):
        return self.f_r(r, t) if self.f_r is not None else np.zeros_like(np.asarray(t, dtype=float))

    def Fr(self, r, t):
        return self.F_r(r, t) if self.F_r is not None else np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class RadialWeight:
    """Weight h(r) with derivative; defaults to h identically 1."""

    h: Callable
    hp: Callable
    label: str = "one"


@dataclass(frozen=True)
class Potential:
    """Potential V(r) with derivative."""

    V: Callable
    Vp: Callable
    label: str = "custom"


UNIT_WEIGHT = RadialWeight(
    h=lambda r: np.ones_like(np.asarray(r, dtype=float)),
    hp=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
    label="one",
)


def inverse_poly_weight(a: float) -> RadialWeight:
    """h(r) = (1 + r^2)^(-a); r h'/h -> -2a at infinity."""
    return RadialWeight(
        h=lambda r: (1.0 + np.asarray(r, dtype=float) ** 2) ** (-a),
        hp=lambda r: -2.0 * a * np.asarray(r, dtype=float) * (1.0 + np.asarray(r, dtype=float) ** 2) ** (-a - 1.0),
        label=f"inverse_poly(a={a})",
    )


def lorentz_well(depth: float) -> Potential:
    """V(r) = -depth/(1+r^2): even, vanishing at infinity, 2V + rV' increasing."""
    return Potential(
        V=lambda r: -depth / (1.0 + np.asarray(r, dtype=float) ** 2),
        Vp=lambda r: 2.0 * depth * np.asarray(r, dtype=float) / (1.0 + np.asarray(r, dtype=float) ** 2) ** 2,
        label=f"lorentz_well(depth={depth})",
    )


def power_nonlinearity(p: float, weight: RadialWeight = UNIT_WEIGHT) -> Nonlinearity:
    """f(r, t) = h(r) |t|^(p-2) t, F = h |t|^p / p."""

    def f(r, t):
        t = np.asarray(t, dtype=float)
        return weight.h(r) * np.abs(t) ** (p - 2.0) * t

    def f_t(r, t):
        t = np.asarray(t, dtype=float)
        return (p - 1.0) * weight.h(r) * np.abs(t) ** (p - 2.0)

    def F(r, t):
        t = np.asarray(t, dtype=float)
        return weight.h(r) * np.abs(t) ** p / p

    def f_r(r, t):
        t = np.asarray(t, dtype=float)
        return weight.hp(r) * np.abs(t) ** (p - 2.0) * t

    def F_r(r, t):
        t = np.asarray(t, dtype=float)
        return weight.hp(r) * np.abs(t) ** p / p

    return Nonlinearity(f=f, f_t=f_t, F=F, f_r=f_r, F_r=F_r, odd=True, label=f"power(p={p})")


def hardy_power_nonlinearity(p: float, k: float) -> Nonlinearity:
    """f(r, t) = r^(-k) |t|^(p-2) t on the unit ball."""

    def f(r, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(r, dtype=float) ** (-k) * np.abs(t) ** (p - 2.0) * t

    def f_t(r, t):
        t = np.asarray(t, dtype=float)
        return (p - 1.0) * np.asarray(r, dtype=float) ** (-k) * np.abs(t) ** (p - 2.0)

    def F(r, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(r, dtype=float) ** (-k) * np.abs(t) ** p / p

    def f_r(r, t):
        t = np.asarray(t, dtype=float)
        return -k * np.asarray(r, dtype=float) ** (-k - 1.0) * np.abs(t) ** (p - 2.0) * t

    def F_r(r, t):
        t = np.asarray(t, dtype=float)
        return -k * np.asarray(r, dtype=float) ** (-k - 1.0) * np.abs(t) ** p / p

    return Nonlinearity(f=f, f_t=f_t, F=F, f_r=f_r, F_r=F_r, odd=True, label=f"hardy_power(p={p},k={k})")


def two_power_nonlinearity(p: float, q: float) -> Nonlinearity:
    """Sign-asymmetric pure powers: exponent p on t > 0, q on t < 0.

    f(t) = t^(p-1) for t >= 0 and -|t|^(q-1) for t < 0; not odd, so both
    signs of initial data probe genuinely different minima.
    """

    def f(r, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, np.abs(t) ** (p - 1.0), -np.abs(t) ** (q - 1.0))

    def f_t(r, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, (p - 1.0) * np.abs(t) ** (p - 2.0), (q - 1.0) * np.abs(t) ** (q - 2.0))

    def F(r, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, np.abs(t) ** p / p, np.abs(t) ** q / q)

    return Nonlinearity(f=f, f_t=f_t, F=F, odd=False, label=f"two_power(p={p},q={q})")


def cubic_quintic_nonlinearity() -> Nonlinearity:
    """f(t) = |t|^2 t - |t|^4 t (focusing cubic, defocusing quintic)."""

    def f(r, t):
        t = np.asarray(t, dtype=float)
        return t**3 - t**5

    def f_t(r, t):
        t = np.asarray(t, dtype=float)
        return 3.0 * t**2 - 5.0 * t**4

    def F(r, t):
        t = np.asarray(t, dtype=float)
        return t**4 / 4.0 - t**6 / 6.0

    return Nonlinearity(f=f, f_t=f_t, F=F, odd=True, label="cubic_quintic")


@dataclass(frozen=True)
class ProblemSpec:
    """A stationary problem instance; immutable, handles must be pure."""

    family: str
    s: float
    N: int
    p: float
    nonlinearity: Nonlinearity
    q: float | None = None
    k: float = 0.0
    weight: RadialWeight | None = None
    potential: Potential | None = None
    theta: float = 0.0
    energy_bounded_on_sphere: bool = True
    preset_id: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def domain_kind(self) -> str:
        return UNIT_BALL if self.family == FAMILY_BALL else WHOLE_SPACE

    def h_values(self, r):
        if self.family == FAMILY_BALL:
            return np.asarray(r, dtype=float) ** (-self.k)
        if self.weight is not None:
            return self.weight.h(r)
        return np.ones_like(np.asarray(r, dtype=float))

    def hp_values(self, r):
        if self.family == FAMILY_BALL:
            return -self.k * np.asarray(r, dtype=float) ** (-self.k - 1.0)
        if self.weight is not None:
            return self.weight.hp(r)
        return np.zeros_like(np.asarray(r, dtype=float))

    def V_values(self, r):
        if self.potential is None:
            return np.zeros_like(np.asarray(r, dtype=float))
        return self.potential.V(r)

    def Vp_values(self, r):
        if self.potential is None:
            return np.zeros_like(np.asarray(r, dtype=float))
        return self.potential.Vp(r)

    @property
    def is_pure_power(self) -> bool:
        return self.family in (FAMILY_FRACTIONAL, FAMILY_BALL)


def estimate_theta(weight: RadialWeight, r0: float = 1e6) -> float:
    """Limit of r h'(r)/h(r) via one Richardson step on an O(1/r^2) tail."""
    g = lambda r: float(r * weight.hp(np.asarray([r]))[0] / weight.h(np.asarray([r]))[0])  # noqa: E731
    g1, g2 = g(r0 / 2.0), g(r0)
    return (4.0 * g2 - g1) / 3.0


def _validate_fractional(s, N, p, theta):
    if not 0.0 < s <= 1.0:
        raise ValueError(f"order s must lie in (0, 1], got {s}")
    if s < 1.0 and N != 1:
        raise ValueError("fractional order s < 1 is implemented for N = 1 only")
    upper = 2.0 + (2.0 * theta + 4.0 * s) / N
    if not 2.0 < p < upper:
        raise ValueError(f"power p={p} outside admissible range (2, {upper:.4f}) for s={s}, N={N}, theta={theta:.3f}")


def _validate_ball(N, k, p):
    if N < 3:
        raise ValueError(f"ball family requires N >= 3, got N={N}")
    if not 0.0 < k < 2.0:
        raise ValueError(f"weight exponent k must lie in (0, 2), got {k}")
    upper = 2.0 + 2.0 * (2.0 - k) / N
    if not 2.0 < p < upper:
        raise ValueError(f"power p={p} outside admissible range (2, {upper:.4f}) for N={N}, k={k}")


def frac_power_problem(s: float, N: int, p: float, weight: RadialWeight | None = None) -> ProblemSpec:
    w = weight if weight is not None else UNIT_WEIGHT
    theta = 0.0 if w is UNIT_WEIGHT else estimate_theta(w)
    _validate_fractional(s, N, p, theta)
    return ProblemSpec(
        family=FAMILY_FRACTIONAL,
        s=s,
        N=N,
        p=p,
        nonlinearity=power_nonlinearity(p, w),
        weight=w,
        theta=theta,
        energy_bounded_on_sphere=p < 2.0 + 4.0 * s / N,
        preset_id="frac_power",
        params={"s": s, "N": N, "p": p, "weight": w.label},
    )


def nls_potential_problem(N: int, p: float, depth: float = 1.0) -> ProblemSpec:
    """Whole-space power nonlinearity with an attractive well; depth 0 drops V.

    Any p in (2, 2*) is admitted: with V absent this family carries the
    supercritical branches that the weighted-power family excludes.
    """
    if not 2.0 < p < (math.inf if N <= 2 else 2.0 * N / (N - 2.0)):
        raise ValueError(f"power p={p} outside (2, 2*) for N={N}")
    return ProblemSpec(
        family=FAMILY_POTENTIAL,
        s=1.0,
        N=N,
        p=p,
        nonlinearity=power_nonlinearity(p),
        potential=lorentz_well(depth) if depth != 0 else None,
        energy_bounded_on_sphere=p < 2.0 + 4.0 / N,
        preset_id="nls_potential",
        params={"N": N, "p": p, "depth": depth},
    )


def ball_hardy_problem(N: int, k: float, p: float) -> ProblemSpec:
    _validate_ball(N, k, p)
    return ProblemSpec(
        family=FAMILY_BALL,
        s=1.0,
        N=N,
        p=p,
        k=k,
        nonlinearity=hardy_power_nonlinearity(p, k),
        energy_bounded_on_sphere=p < 2.0 + 2.0 * (2.0 - k) / N,
        preset_id="ball_hardy",
        params={"N": N, "k": k, "p": p},
    )


def two_power_problem(s: float, N: int, p: float, q: float) -> ProblemSpec:
    if p == q:
        raise ValueError("the two exponents must differ")
    for e in (p, q):
        if not 2.0 < e < 2.0 + 4.0 * s / N:
            raise ValueError(f"exponent {e} outside the subcritical range (2, {2 + 4 * s / N:.4f})")
    return ProblemSpec(
        family=FAMILY_TWO_POWER,
        s=s,
        N=N,
        p=p,
        q=q,
        nonlinearity=two_power_nonlinearity(p, q),
        energy_bounded_on_sphere=True,
        preset_id="appendixA",
        params={"s": s, "N": N, "p": p, "q": q},
    )


def cubic_quintic_problem() -> ProblemSpec:
    return ProblemSpec(
        family=FAMILY_POTENTIAL,
        s=1.0,
        N=3,
        p=4.0,
        q=6.0,
        nonlinearity=cubic_quintic_nonlinearity(),
        energy_bounded_on_sphere=True,  # the defocusing quintic dominates
        preset_id="cubic_quintic",
        params={},
    )


def problem_preset(preset: str, **params) -> ProblemSpec:
    """Build a problem from its string id (config-file addressable)."""
    alias = {"asym_power": "appendixA"}
    preset = alias.get(preset, preset)
    if preset == "frac_power":
        a = params.get("weight_a")
        w = inverse_poly_weight(a) if a is not None else None
        return frac_power_problem(params.get("s", 1.0), params.get("N", 1), params["p"], weight=w)
    if preset == "nls_potential":
        return nls_potential_problem(params.get("N", 1), params["p"], params.get("depth", 1.0))
    if preset == "ball_hardy":
        return ball_hardy_problem(params.get("N", 3), params["k"], params["p"])
    if preset == "appendixA":
        return two_power_problem(params.get("s", 1.0), params.get("N", 1), params["p"], params["q"])
    if preset == "cubic_quintic":
        return cubic_quintic_problem()
    raise ValueError(f"unknown preset {preset!r}; known: {PRESET_IDS}")


def make_grid(problem: ProblemSpec, n: int, R: float | None = None) -> RadialGrid:
    """Grid matching the problem's domain; R required for whole space."""
    if problem.domain_kind == UNIT_BALL:
        return RadialGrid.ball(problem.N, n)
    if R is None:
        raise ValueError("whole-space problems need an explicit truncation radius")
    return RadialGrid.whole_space(problem.N, n, R)


def operator(problem: ProblemSpec, grid: RadialGrid) -> DiscreteOperator:
    if grid.domain_kind != problem.domain_kind:
        raise ValueError(f"grid domain {grid.domain_kind!r} does not match problem domain {problem.domain_kind!r}")
    return operator_for(grid, problem.s)


# ---------------------------------------------------------------------------
# Functionals
# ---------------------------------------------------------------------------


def _check_finite(u: np.ndarray):
    if not np.all(np.isfinite(u)):
        raise ValueError("sample vector contains non-finite entries")


def eval_mass(grid: RadialGrid, u: np.ndarray) -> float:
    """Q(u) = 1/2 int u^2."""
    return 0.5 * integrate(grid, np.asarray(u, dtype=float) ** 2)


def eval_energy(problem: ProblemSpec, grid: RadialGrid, u: np.ndarray, op: DiscreteOperator | None = None) -> float:
    """E(u) = 1/2 <A u, u> + 1/2 int V u^2 - int F(r, u)."""
    u = np.asarray(u, dtype=float)
    _check_finite(u)
    if op is None:
        op = operator(problem, grid)
    E = 0.5 * op.quadratic_form(u)
    if problem.potential is not None:
        E += 0.5 * integrate(grid, problem.V_values(grid.nodes) * u**2)
    E -= integrate(grid, problem.nonlinearity.F(grid.nodes, u))
    return E


def eval_action_gradient(
    problem: ProblemSpec,
    grid: RadialGrid,
    u: np.ndarray,
    lam: float,
    op: DiscreteOperator | None = None,
) -> np.ndarray:
    """Strong-form residual A u + V u - lambda u - f(r, u).

    The directional derivative of Phi_lambda at u along w is the weighted
    inner product of this vector with w.
    """
    u = np.asarray(u, dtype=float)
    _check_finite(u)
    if op is None:
        op = operator(problem, grid)
    out = op.apply(u) - lam * u - problem.nonlinearity.f(grid.nodes, u)
    if problem.potential is not None:
        out += problem.V_values(grid.nodes) * u
    return out


def energy_gradient(
    problem: ProblemSpec,
    grid: RadialGrid,
    u: np.ndarray,
    op: DiscreteOperator | None = None,
) -> np.ndarray:
    """Gradient of E alone (no multiplier term)."""
    if op is None:
        op = operator(problem, grid)
    out = op.apply(u) - problem.nonlinearity.f(grid.nodes, u)
    if problem.potential is not None:
        out += problem.V_values(grid.nodes) * u
    return out


def linear_lambda1(problem: ProblemSpec, grid: RadialGrid, op: DiscreteOperator | None = None) -> float:
    """Bottom of the linear part A + V.

    Discrete smallest eigenvalue for the ball / potential families; 0 for
    whole-space problems without potential (the continuum essential
    spectrum starts there regardless of truncation).
    """
    if op is None:
        op = operator(problem, grid)
    if problem.potential is None and problem.domain_kind == WHOLE_SPACE:
        return 0.0
    d = problem.V_values(grid.nodes) if problem.potential is not None else 0.0
    vals, _ = ShiftedSystem(op, d).lowest_eigs(1)
    return float(vals[0])


# ---------------------------------------------------------------------------
# Hypothesis checkers
# ---------------------------------------------------------------------------


@dataclass
class HypothesisReport:
    """Sampled verdicts for the structural hypotheses of a problem.

    verdicts maps condition name -> "pass" | "fail" | "inconclusive";
    a fail always carries a witness (r, t, violation) in `witnesses`.
    Monotonicity is tested on a finite lattice, so "pass" means
    "pass (sampled)", not a proof.
    """

    verdicts: dict
    witnesses: dict
    theta_estimate: float

    def passed(self, name: str) -> bool:
        return self.verdicts.get(name) == "pass"


def _monotone_verdict(values: np.ndarray, axis: int, direction: str, tol: float = 1e-9):
    """direction: 'nonincreasing' | 'increasing' | 'nondecreasing' | 'decreasing'.

    A violation must exceed the local noise floor tol * max(|neighbors|);
    the strictness of a direction can't be resolved below that floor on a
    finite sample, so strict and non-strict collapse to the same test.
    """
    d = np.diff(values, axis=axis)
    lo = np.minimum(np.abs(np.take(values, range(values.shape[axis] - 1), axis=axis)),
                    np.abs(np.take(values, range(1, values.shape[axis]), axis=axis)))
    hi = np.maximum(np.abs(np.take(values, range(values.shape[axis] - 1), axis=axis)),
                    np.abs(np.take(values, range(1, values.shape[axis]), axis=axis)))
    noise = tol * hi + 1e-300 * (1.0 + lo)
    sign = 1.0 if direction in ("increasing", "nondecreasing") else -1.0
    viol = -sign * d
    bad = viol > noise
    if not bad.any():
        return "pass", None
    idx = np.unravel_index(np.argmax(np.where(bad, viol, -np.inf)), d.shape)
    return "fail", idx


def default_sample_box(r_span=(1e-3, 1e3), t_span=(1e-3, 1e2), size=64):
    r = np.geomspace(*r_span, size)
    t = np.geomspace(*t_span, size)
    return r, t


def check_hypotheses(problem: ProblemSpec, sample_box=None) -> HypothesisReport:
    """Evaluate the structural hypotheses on a sample lattice.

    Checks, where the ingredients exist: the weight condition (h), the
    potential condition (V), the nonlinearity conditions (f1), (f2),
    (f2'), and the one-dimensional well conditions (H1)-(H4).  Missing
    derivative handles give "inconclusive", never "pass".
    """
    if sample_box is None:
        r, t = default_sample_box()
    else:
        r, t = sample_box
        r, t = np.asarray(r, dtype=float), np.asarray(t, dtype=float)
    if np.any(r <= 0) or np.any(t <= 0):
        raise ValueError("sample box must be positive in both r and t")
    verdicts, witnesses = {}, {}
    R, T = np.meshgrid(r, t, indexing="ij")
    nl = problem.nonlinearity
    N = problem.N

    # (h): h > 0, h nonincreasing, r h'/h nonincreasing, finite limit
    theta = problem.theta
    if problem.family == FAMILY_BALL:
        theta = -problem.k
        verdicts["h"] = "pass"  # r^-k: positive, decreasing, r h'/h = -k constant
    else:
        w = problem.weight if problem.weight is not None else UNIT_WEIGHT
        hv, hpv = w.h(r), w.hp(r)
        if np.any(hv <= 0):
            verdicts["h"] = "fail"
            i = int(np.argmax(hv <= 0))
            witnesses["h"] = (float(r[i]), None, float(hv[i]))
        else:
            v1, i1 = _monotone_verdict(hv, 0, "nonincreasing")
            ratio = r * hpv / hv
            v2, i2 = _monotone_verdict(ratio, 0, "nonincreasing", tol=1e-7)
            theta = estimate_theta(w)
            if v1 == "fail":
                verdicts["h"], witnesses["h"] = "fail", (float(r[i1[0]]), None, float(np.diff(hv)[i1[0]]))
            elif v2 == "fail":
                verdicts["h"], witnesses["h"] = "fail", (float(r[i2[0]]), None, float(np.diff(ratio)[i2[0]]))
            elif not np.isfinite(theta):
                verdicts["h"] = "fail"
                witnesses["h"] = (float(r[-1]), None, float("inf"))
            else:
                verdicts["h"] = "pass"

    # (V): 2V + rV' increasing
    if problem.potential is not None:
        comb = 2.0 * problem.potential.V(r) + r * problem.potential.Vp(r)
        v, i = _monotone_verdict(comb, 0, "increasing")
        verdicts["V"] = v
        if v == "fail":
            witnesses["V"] = (float(r[i[0]]), None, float(np.diff(comb)[i[0]]))
    else:
        verdicts["V"] = "pass"  # V identically 0

    fv = nl.f(R, T)
    ftv = nl.f_t(R, T)
    Fv = nl.F(R, T)

    # (f1): odd, vanishing at 0, monotone, and (N-2) f t <= 2N F + 2r F_r
    f0 = np.max(np.abs(nl.f(r, np.zeros_like(r))))
    odd_def = 0.0
    if nl.odd:
        odd_def = np.max(np.abs(nl.f(R, T) + nl.f(R, -T)))
    if nl.f_r is None and problem.weight is not None:
        verdicts["f1"] = "inconclusive"
    else:
        lhs = (N - 2.0) * fv * T
        rhs = 2.0 * N * Fv + 2.0 * R * nl.Fr(R, T)
        gap = lhs - rhs
        bad = gap > 1e-9 * np.maximum(1.0, np.abs(rhs))
        if f0 > 1e-12 or odd_def > 1e-9 or bad.any():
            verdicts["f1"] = "fail"
            if bad.any():
                i = np.unravel_index(np.argmax(np.where(bad, gap, -np.inf)), gap.shape)
                witnesses["f1"] = (float(R[i]), float(T[i]), float(gap[i]))
            else:
                witnesses["f1"] = (float(r[0]), 0.0, float(max(f0, odd_def)))
        else:
            v_r, _ = _monotone_verdict(fv, 0, "nonincreasing", tol=1e-7)
            v_t, _ = _monotone_verdict(fv, 1, "increasing")
            verdicts["f1"] = "pass" if (v_r == "pass" and v_t == "pass") else "fail"
            if verdicts["f1"] == "fail":
                witnesses["f1"] = (float(r[0]), float(t[0]), 0.0)

    # (f2)/(f2'): g = (1 + 4/N) f/t + (2/N) r f_r/t - f_t, monotone both ways
    g = (1.0 + 4.0 / N) * fv / T + (2.0 / N) * R * nl.fr(R, T) / T - ftv
    for name, dir_r, dir_t in (("f2", "nonincreasing", "increasing"), ("f2p", "nondecreasing", "decreasing")):
        v_r, i_r = _monotone_verdict(g, 0, dir_r, tol=1e-7)
        v_t, i_t = _monotone_verdict(g, 1, dir_t)
        if v_r == "pass" and v_t == "pass":
            verdicts[name] = "pass"
        else:
            verdicts[name] = "fail"
            i = i_t if v_t == "fail" else i_r
            witnesses[name] = (float(R[i[0], 0]), float(T[0, i[-1]]), float(np.abs(g).max()))

    # (f3): finite small-t and large-t power limits; estimated, not proven
    t_small, t_big = 1e-8, 1e8
    p_small = _local_exponent(nl, r[0], t_small)
    p_big = _local_exponent(nl, r[0], t_big)
    verdicts["f3"] = "pass" if (2.0 < p_small + 1.0 and 2.0 < p_big + 1.0) else "inconclusive"

    # (H1)-(H4): one-dimensional well structure
    if problem.potential is not None and N == 1:
        V0 = float(problem.potential.V(np.asarray([1e-9]))[0])
        Vinf = float(problem.potential.V(np.asarray([1e8]))[0])
        verdicts["H1"] = "pass" if (V0 < 0 and abs(Vinf) < 1e-6) else "fail"
    else:
        verdicts["H1"] = "inconclusive"
    if N == 1:
        ft_small = np.max(np.abs(nl.f_t(r, np.full_like(r, 1e-10))))
        lhs = -fv * T
        rhs = 2.0 * Fv + 2.0 * R * nl.Fr(R, T)
        verdicts["H2"] = "pass" if (nl.odd and f0 < 1e-12 and ft_small < 1e-6 and np.all(lhs <= rhs + 1e-9)) else "fail"
        sup = ftv * T - fv
        verdicts["H3"] = "pass" if np.all(sup > 0) and np.all(fv > 0) else "fail"
        verdicts["H4"] = "pass" if p_small + 1.0 > 2.0 else "inconclusive"
    else:
        verdicts["H2"] = verdicts["H3"] = verdicts["H4"] = "inconclusive"

    return HypothesisReport(verdicts=verdicts, witnesses=witnesses, theta_estimate=float(theta))


def _local_exponent(nl: Nonlinearity, r: float, t: float) -> float:
    """d log f / d log t at (r, t); the local power of the nonlinearity."""
    ra = np.asarray([r])
    f1 = float(nl.f(ra, np.asarray([t]))[0])
    f2 = float(nl.f(ra, np.asarray([t * 1.01]))[0])
    if f1 <= 0 or f2 <= 0:
        return math.nan
    return math.log(f2 / f1) / math.log(1.01)
