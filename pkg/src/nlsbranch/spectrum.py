"""Linearized operators, Morse index and non-degeneracy certification.

The linearization at a state u is L = A + V - lambda - f_t(r, u), a
symmetric operator in the weighted inner product.  The Morse index is
counted in the radial (even) sector that the discretization spans; the
translation mode u' is odd and therefore absent, which is what makes the
radial index of a ground state equal to 1 with a clean spectral gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import DiscreteOperator, RadialGrid, ShiftedSystem, integrate
from .problems import ProblemSpec, operator
from .solve import Solution

__all__ = ["SpectrumReport", "LinearizedOperator", "linearized_operator", "morse_index"]


class LinearizedOperator(DiscreteOperator):
    """L = A + diag(V - lambda - f_t(r, u)); shares the base operator."""

    def __init__(self, base: DiscreteOperator, d: np.ndarray, lam: float):
        super().__init__(base.grid, base.s, base.boundary)
        self.base = base
        self.d = d
        self.lam = float(lam)
        self.system = ShiftedSystem(base, d)

    def apply(self, u: np.ndarray) -> np.ndarray:
        return self.base.apply(u) + self.d * u

    @property
    def is_tridiagonal(self) -> bool:
        return self.base.is_tridiagonal

    def strong_tridiag(self):
        tri = self.base.strong_tridiag()
        if tri is None:
            return None
        lower, diag, upper = tri
        return lower, diag + self.d, upper

    @property
    def matrix(self) -> np.ndarray:
        return self.base.matrix + np.diag(self.d)


@dataclass
class SpectrumReport:
    """Low spectrum of the linearization in the radial sector.

    morse_index counts eigenvalues below -tol_eig; nondegenerate means the
    eigenvalue nearest zero is safely away from it relative to the
    operator scale.  The count is a radial-sector statement only.
    """

    morse_index: int
    smallest_abs_eig: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    nondegenerate: bool
    tol_eig: float
    scale: float


def linearized_operator(
    problem: ProblemSpec,
    grid: RadialGrid,
    sol: Solution,
    op: DiscreteOperator | None = None,
) -> LinearizedOperator:
    """Assemble L at a converged solution."""
    if not sol.converged:
        raise ValueError("linearization requires a converged solution")
    if op is None:
        op = operator(problem, grid)
    d = -sol.lam - problem.nonlinearity.f_t(grid.nodes, sol.u)
    if problem.potential is not None:
        d = d + problem.V_values(grid.nodes)
    return LinearizedOperator(op, np.asarray(d, dtype=float), sol.lam)


def morse_index(
    problem: ProblemSpec,
    grid: RadialGrid,
    sol: Solution,
    op: DiscreteOperator | None = None,
    k: int = 6,
    tol_factor: float = 1e-9,
    nondegeneracy_factor: float = 1e-8,
) -> SpectrumReport:
    """Count negative eigenvalues of the linearization at sol.

    Eigenvalues below -tol_eig with tol_eig = tol_factor * ||L|| count as
    negative; nondegenerate requires the eigenvalue nearest zero to exceed
    nondegeneracy_factor * ||L||.
    """
    lin = linearized_operator(problem, grid, sol, op)
    sys = lin.system
    scale = sys.norm_estimate()
    tol_eig = tol_factor * scale
    vals, vecs = sys.lowest_eigs(k)
    index = sys.inertia(-tol_eig)
    small = sys.smallest_abs_eig()
    return SpectrumReport(
        morse_index=int(index),
        smallest_abs_eig=float(small),
        eigenvalues=vals,
        eigenvectors=vecs,
        nondegenerate=bool(small > nondegeneracy_factor * scale),
        tol_eig=float(tol_eig),
        scale=float(scale),
    )


def quadratic_form_at_state(
    problem: ProblemSpec,
    grid: RadialGrid,
    sol: Solution,
    op: DiscreteOperator | None = None,
) -> float:
    """<L u, u> at the state itself; equals (2-p) int h |u|^p for pure powers."""
    lin = linearized_operator(problem, grid, sol, op)
    return float(integrate(grid, sol.u * lin.apply(sol.u)))
