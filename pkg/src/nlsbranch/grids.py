"""Radial grids, quadrature and discrete radial operators.

Grids are uniform and cell-centered: node i sits at (i - 1/2)h with
h = R/n, and the quadrature weight of node i is the exact measure of its
cell under omega_N r^{N-1} dr, so the weights sum to the exact volume
omega_N R^N / N.

Two operators are provided:

* the classical radial Laplacian -u'' - (N-1)/r u' in conservation
  (finite-volume) form, with the natural zero-flux condition at the
  origin and a Dirichlet condition at the outer radius;
* the 1D fractional Laplacian (-d^2/dx^2)^s for 0 < s < 1, assembled as
  the lumped-mass piecewise-linear Galerkin operator of the singular
  integral on the evenly reflected line grid, with zero extension beyond
  the truncation radius.

Both are symmetric and positive semidefinite with respect to the
weighted inner product <u, v> = sum_i w_i u_i v_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded
from scipy.special import gamma

__all__ = [
    "RadialGrid",
    "DiscreteOperator",
    "ShiftedSystem",
    "build_radial_laplacian",
    "build_fractional_laplacian_1d",
    "integrate",
    "sphere_area",
]

WHOLE_SPACE = "whole_space_truncated"
UNIT_BALL = "unit_ball"

#: n above which fractional operators are applied via FFT instead of a
#: dense matrix.
DENSE_LIMIT = 4096


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere in R^N (2 for N=1, 2*pi, 4*pi, ...)."""
    return 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Uniform cell-centered radial mesh with exact cell-mass quadrature weights.

    Attributes
    ----------
    domain_kind : "whole_space_truncated" or "unit_ball"
    N : spatial dimension (>= 1)
    n : number of interior nodes
    R : outer radius (1.0 for the unit ball)
    nodes : radii (i - 1/2) h, strictly increasing in (0, R)
    weights : omega_N * ((i h)^N - ((i-1) h)^N) / N
    """

    domain_kind: str
    N: int
    n: int
    R: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def h(self) -> float:
        return self.R / self.n

    @staticmethod
    def _build(domain_kind: str, N: int, n: int, R: float) -> "RadialGrid":
        if N < 1:
            raise ValueError(f"dimension N must be >= 1, got {N}")
        if n < 3:
            raise ValueError(f"need at least 3 nodes, got n={n}")
        if R <= 0:
            raise ValueError(f"outer radius must be positive, got {R}")
        h = R / n
        nodes = (np.arange(1, n + 1) - 0.5) * h
        edges = np.arange(0, n + 1) * h
        weights = sphere_area(N) * np.diff(edges**N) / N
        return RadialGrid(domain_kind, N, n, float(R), nodes, weights)

    @staticmethod
    def whole_space(N: int, n: int, R: float) -> "RadialGrid":
        """Truncated whole-space grid on (0, R) with decay (Dirichlet) at R."""
        return RadialGrid._build(WHOLE_SPACE, N, n, R)

    @staticmethod
    def ball(N: int, n: int) -> "RadialGrid":
        """Unit-ball grid; the value at r = 1 is implicitly 0 (Dirichlet)."""
        return RadialGrid._build(UNIT_BALL, N, n, 1.0)

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.dot(self.weights * u, v))

    def norm(self, u: np.ndarray) -> float:
        return math.sqrt(max(self.inner(u, u), 0.0))


def truncation_radius(lam_min_abs: float, s: float = 1.0) -> float:
    """Default outer radius for whole-space problems.

    R = 30/sqrt(|lambda|) clamped to [20, 200]; quadrupled for s < 1/2
    where the far-field decay is slower.
    """
    R = 30.0 / math.sqrt(max(lam_min_abs, 1e-12))
    R = min(max(R, 20.0), 200.0)
    if s < 0.5:
        R = min(4.0 * R, 800.0)
    return R


def integrate(grid: RadialGrid, samples: np.ndarray) -> float:
    """Integral over the domain of a radial sample vector.

    Returns omega_N * sum_i weights_i * samples_i, i.e. the quadrature of
    int f(|x|) dx with the volume measure already folded into the weights.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.n,):
        raise ValueError(
            f"sample vector has shape {samples.shape}, expected ({grid.n},)"
        )
    return float(np.dot(grid.weights, samples))


# ---------------------------------------------------------------------------
# Fractional kernel weights
# ---------------------------------------------------------------------------

# (2 sinh(x/2))^4 = x^4 + x^6/6 + x^8/80 + 17 x^10/30240 + 31 x^12/1814400 + ...
_DIFF4_SERIES = (1.0, 1.0 / 6.0, 1.0 / 80.0, 17.0 / 30240.0, 31.0 / 1814400.0)
_SERIES_CROSSOVER = 48


def _falling(beta: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= beta - j
    return out


def _diff4_power(m: np.ndarray, beta: float) -> np.ndarray:
    """4th central difference of |x|^beta at integers, cancellation-safe.

    Exact differences below the crossover, asymptotic series in the
    derivatives above it (the exact form loses ~m^4 digits to cancellation).
    """
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=float)
    small = m < _SERIES_CROSSOVER
    ms = m[small].astype(float)
    g = lambda x: np.abs(x) ** beta  # noqa: E731
    out[small] = g(ms - 2) - 4 * g(ms - 1) + 6 * g(ms) - 4 * g(ms + 1) + g(ms + 2)
    mb = m[~small].astype(float)
    acc = np.zeros_like(mb)
    for j, cj in enumerate(_DIFF4_SERIES):
        k = 4 + 2 * j
        acc += cj * _falling(beta, k) * mb ** (beta - k)
    out[~small] = acc
    return out


def _diff4_sqlog(m: np.ndarray) -> np.ndarray:
    """4th central difference of x^2 ln|x| at integers (0 ln 0 := 0)."""
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=float)
    small = m < _SERIES_CROSSOVER

    def g(x):
        x = np.abs(x).astype(float)
        return np.where(x > 0, x * x * np.log(np.where(x > 0, x, 1.0)), 0.0)

    ms = m[small]
    out[small] = g(ms - 2) - 4 * g(ms - 1) + 6 * g(ms) - 4 * g(ms + 1) + g(ms + 2)
    mb = m[~small].astype(float)
    acc = np.zeros_like(mb)
    for j, cj in enumerate(_DIFF4_SERIES):
        k = 4 + 2 * j
        # d^k/dx^k (x^2 ln x) = 2 (-1)^(k-3) (k-3)! / x^(k-2) for k >= 3
        acc += cj * (2.0 * (-1.0) ** (k - 3) * math.factorial(k - 3)) * mb ** (2 - k)
    out[~small] = acc
    return out


_weight_cache: dict[tuple[float, int], np.ndarray] = {}


def fractional_stencil_weights(s: float, m_max: int) -> np.ndarray:
    """Bilinear-form weights W_s(m), m = 0..m_max, of the 1D fractional kernel.

    The piecewise-linear Galerkin form of (-d^2/dx^2)^s on a uniform line
    grid of spacing h is Toeplitz with entries h^{1-2s} W_s(|i-j|).
    W_s(m) -> {2, -1, 0, ...} as s -> 1 (classical stiffness).
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"fractional order s must lie in (0, 1), got {s}")
    key = (float(s), int(m_max))
    cached = _weight_cache.get(key)
    if cached is not None:
        return cached
    m = np.arange(m_max + 1)
    if abs(s - 0.5) < 1e-12:
        w = _diff4_sqlog(m) / (2.0 * math.pi)
    else:
        coef = -gamma(2.0 * s - 3.0) * math.sin(math.pi * s) / math.pi
        w = coef * _diff4_power(m, 3.0 - 2.0 * s)
    w.setflags(write=False)
    _weight_cache[key] = w
    return w


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


class DiscreteOperator:
    """Base class: a symmetric-in-weights, PSD discrete operator.

    Subclasses implement ``apply``; everything else (quadratic form, dense
    matrix, symmetric eigen-representations) derives from it plus grid
    weights.
    """

    def __init__(self, grid: RadialGrid, s: float, boundary: str):
        self.grid = grid
        self.s = float(s)
        self.boundary = boundary

    def apply(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_tridiagonal(self) -> bool:
        return False

    def quadratic_form(self, u: np.ndarray, v: np.ndarray | None = None) -> float:
        """<A u, v> in the weighted inner product (v defaults to u)."""
        if v is None:
            v = u
        return float(np.dot(self.grid.weights * v, self.apply(u)))

    @property
    def matrix(self) -> np.ndarray:
        """Dense strong-form matrix (symmetric w.r.t. the grid weights)."""
        n = self.grid.n
        if n > DENSE_LIMIT:
            raise ValueError(f"dense matrix not materialized for n={n}")
        eye = np.eye(n)
        cols = [self.apply(eye[:, j]) for j in range(n)]
        return np.column_stack(cols)

    def strong_tridiag(self):
        """(lower, diag, upper) strong-form bands, or None if not tridiagonal."""
        return None


class RadialLaplacian(DiscreteOperator):
    """Conservation-form radial Laplacian; tridiagonal strong form."""

    def __init__(self, grid: RadialGrid):
        super().__init__(grid, 1.0, "dirichlet" if grid.domain_kind == UNIT_BALL else "decay_at_R")
        n, h, N = grid.n, grid.h, grid.N
        area = sphere_area(N)
        # face conductances: interior faces at r = i h, Dirichlet face at R
        g = np.zeros(n + 1)
        faces = np.arange(1, n) * h
        g[1:n] = area * faces ** (N - 1) / h
        g[n] = area * grid.R ** (N - 1) / (h / 2.0)
        self._g = g
        w = grid.weights
        self._diag = (g[:n] + g[1 : n + 1]) / w
        self._lower = -g[1:n] / w[1:]  # coefficient of u[i-1] in row i
        self._upper = -g[1:n] / w[:-1]  # coefficient of u[i+1] in row i

    @property
    def is_tridiagonal(self) -> bool:
        return True

    def strong_tridiag(self):
        return self._lower, self._diag, self._upper

    def apply(self, u: np.ndarray) -> np.ndarray:
        out = self._diag * u
        out[:-1] += self._upper * u[1:]
        out[1:] += self._lower * u[:-1]
        return out


class Fractional1D(DiscreteOperator):
    """1D fractional Laplacian on an even, zero-extended line grid.

    Strong form: (A u)_i = h^{-2s} sum_j (W(|i-j|) + W(i+j+1)) u_j, the
    Toeplitz part from the direct interaction and the Hankel part from the
    mirror nodes of the even reflection.
    """

    def __init__(self, grid: RadialGrid, s: float):
        super().__init__(grid, s, "decay_at_R")
        n = grid.n
        self._w = fractional_stencil_weights(s, 2 * n)
        self._scale = grid.h ** (-2.0 * s)
        if n <= DENSE_LIMIT:
            m = np.arange(n)
            idx = np.abs(m[:, None] - m[None, :])
            hidx = m[:, None] + m[None, :] + 1
            self._dense = self._scale * (self._w[idx] + self._w[hidx])
        else:
            self._dense = None

    def apply(self, u: np.ndarray) -> np.ndarray:
        if self._dense is not None:
            return self._dense @ u
        from scipy.linalg import matmul_toeplitz

        n = self.grid.n
        w = self._w
        t = matmul_toeplitz((w[:n], w[:n]), u)
        hk = matmul_toeplitz((w[n : 2 * n], w[n:0:-1]), u[::-1])
        return self._scale * (t + hk)

    @property
    def matrix(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        return super().matrix


def build_radial_laplacian(grid: RadialGrid) -> DiscreteOperator:
    """Second-order discretization of -Laplace on radial functions.

    Zero-flux regularity at the origin (u'(0) = 0), Dirichlet at the outer
    radius, symmetric in the quadrature inner product.
    """
    if grid.n < 3:
        raise ValueError("grid too coarse for a Laplacian stencil")
    return RadialLaplacian(grid)


def build_fractional_laplacian_1d(grid: RadialGrid, s: float) -> DiscreteOperator:
    """Fractional Laplacian (-d^2/dx^2)^s, 0 < s < 1, on a 1D even grid.

    The far-field tail is handled by zero extension beyond R; the operator
    converges to the 3-point Laplacian as s -> 1.
    """
    if grid.domain_kind != WHOLE_SPACE:
        raise ValueError("fractional operator is only available on truncated whole space")
    if grid.N != 1:
        raise ValueError("fractional operator is implemented for N = 1 only")
    if not 0.0 < s < 1.0:
        raise ValueError(f"fractional order s must lie in (0, 1), got {s}")
    return Fractional1D(grid, s)


@lru_cache(maxsize=64)
def operator_for(grid: RadialGrid, s: float) -> DiscreteOperator:
    """Cached operator for (grid, order): classical at s = 1, fractional below."""
    if s == 1.0:
        return build_radial_laplacian(grid)
    return build_fractional_laplacian_1d(grid, s)


# ---------------------------------------------------------------------------
# Shifted linear systems  (A + diag(d))
# ---------------------------------------------------------------------------


class ShiftedSystem:
    """Linear algebra around L = A + diag(d) in the weighted inner product.

    Provides solves, inertia (eigenvalue counts), extremal eigenpairs and a
    cheap condition estimate, choosing tridiagonal, dense or matrix-free
    paths based on the operator.
    """

    def __init__(self, op: DiscreteOperator, d: np.ndarray | float = 0.0):
        self.op = op
        self.grid = op.grid
        n = self.grid.n
        self.d = np.broadcast_to(np.asarray(d, dtype=float), (n,)).copy()
        self._sqrtw = np.sqrt(self.grid.weights)
        self._bands = None
        self._dense_sym = None

    # -- representations ----------------------------------------------------

    def sym_bands(self):
        """(diag, offdiag) of W^{1/2} L W^{-1/2} when L is tridiagonal."""
        if self._bands is None:
            tri = self.op.strong_tridiag()
            if tri is None:
                raise ValueError("operator is not tridiagonal")
            lower, diag, upper = tri
            off = np.sign(lower) * np.sqrt(lower * upper)
            self._bands = (diag + self.d, off)
        return self._bands

    def sym_dense(self) -> np.ndarray:
        if self._dense_sym is None:
            A = self.op.matrix
            S = (self._sqrtw[:, None] * A) / self._sqrtw[None, :]
            S = 0.5 * (S + S.T) + np.diag(self.d)
            self._dense_sym = S
        return self._dense_sym

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.op.apply(v) + self.d * v

    def _sym_matvec(self, y: np.ndarray) -> np.ndarray:
        return self._sqrtw * self.op.apply(y / self._sqrtw) + self.d * y

    # -- solves ---------------------------------------------------------------

    #: above this size, non-tridiagonal solves go through MINRES with the
    #: FFT matvec instead of a dense factorization per solve.
    MINRES_THRESHOLD = 1024

    def solve(self, rhs: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
        n = self.grid.n
        if self.op.is_tridiagonal:
            lower, diag, upper = self.op.strong_tridiag()
            ab = np.zeros((3, n))
            ab[0, 1:] = upper
            ab[1] = diag + self.d
            ab[2, :-1] = lower
            return solve_banded((1, 1), ab, rhs)
        if n <= self.MINRES_THRESHOLD:
            from scipy.linalg import solve as dense_solve

            A = self.op.matrix + np.diag(self.d)
            return dense_solve(A, rhs)
        return self._solve_minres(rhs, rtol)

    def _solve_minres(self, rhs: np.ndarray, rtol: float) -> np.ndarray:
        from scipy.sparse.linalg import LinearOperator, minres

        n = self.grid.n
        lin = LinearOperator((n, n), matvec=self._sym_matvec, dtype=float)
        b = self._sqrtw * rhs
        try:
            y, info = minres(lin, b, rtol=rtol, maxiter=20 * n)
        except TypeError:  # older scipy spells the kwarg 'tol'
            y, info = minres(lin, b, tol=rtol, maxiter=20 * n)
        if info != 0:
            raise np.linalg.LinAlgError(f"minres did not converge (info={info})")
        return y / self._sqrtw

    # -- spectral queries -----------------------------------------------------

    def inertia(self, sigma: float = 0.0) -> int:
        """Number of eigenvalues strictly below sigma."""
        if self.op.is_tridiagonal:
            a, b = self.sym_bands()
            return _sturm_count(a, b, sigma)
        n = self.grid.n
        if n <= DENSE_LIMIT:
            from scipy.linalg import eigvalsh

            return int(np.count_nonzero(eigvalsh(self.sym_dense()) < sigma))
        vals, _ = self.lowest_eigs(8)
        return int(np.count_nonzero(vals < sigma))

    def lowest_eigs(self, k: int = 6):
        """Smallest k eigenpairs; eigenvectors normalized in the weighted norm."""
        n = self.grid.n
        k = min(k, n - 1)
        if self.op.is_tridiagonal:
            a, b = self.sym_bands()
            vals, vecs = eigh_tridiagonal(a, b, select="i", select_range=(0, k - 1))
        elif n <= DENSE_LIMIT:
            from scipy.linalg import eigh

            vals, vecs = eigh(self.sym_dense(), subset_by_index=(0, k - 1))
        else:
            from scipy.sparse.linalg import LinearOperator, eigsh

            lin = LinearOperator((n, n), matvec=self._sym_matvec, dtype=float)
            vals, vecs = eigsh(lin, k=k, which="SA", maxiter=50 * n)
            order = np.argsort(vals)
            vals, vecs = vals[order], vecs[:, order]
        u = vecs / self._sqrtw[:, None]
        for j in range(u.shape[1]):
            u[:, j] /= self.grid.norm(u[:, j])
        return vals, u

    def smallest_abs_eig(self) -> float:
        """|eigenvalue| nearest zero."""
        if self.op.is_tridiagonal:
            a, b = self.sym_bands()
            lo = float(np.min(a) - 2 * np.max(np.abs(b)))
            hi = float(np.max(a) + 2 * np.max(np.abs(b)))
            below = _sturm_count(a, b, 0.0)
            left = _sturm_bisect(a, b, below - 1, lo, hi) if below > 0 else None
            right = _sturm_bisect(a, b, below, lo, hi)
            cands = [abs(x) for x in (left, right) if x is not None]
            return min(cands)
        vals, _ = self.lowest_eigs(8)
        pos = vals[vals >= 0]
        neg = vals[vals < 0]
        cands = []
        if pos.size:
            cands.append(float(pos.min()))
        if neg.size:
            cands.append(float(-neg.max()))
        return min(cands) if cands else 0.0

    def norm_estimate(self) -> float:
        if self.op.is_tridiagonal:
            lower, diag, upper = self.op.strong_tridiag()
            row = np.abs(diag + self.d)
            row[1:] += np.abs(lower)
            row[:-1] += np.abs(upper)
            return float(row.max())
        rng = np.random.default_rng(0)
        v = rng.standard_normal(self.grid.n)
        for _ in range(8):
            v = self._sym_matvec(v)
            v /= np.linalg.norm(v)
        return float(np.linalg.norm(self._sym_matvec(v)))

    def cond_estimate(self) -> float:
        small = self.smallest_abs_eig()
        if small <= 0:
            return np.inf
        return self.norm_estimate() / small


def _sturm_count(a: np.ndarray, b: np.ndarray, sigma: float) -> int:
    """Eigenvalues of the symmetric tridiagonal (a, b) strictly below sigma."""
    n = a.size
    count = 0
    q = a[0] - sigma
    if q < 0:
        count += 1
    tiny = 1e-300
    for i in range(1, n):
        if q == 0.0:
            q = tiny
        q = a[i] - sigma - b[i - 1] * b[i - 1] / q
        if q < 0:
            count += 1
    return count


def _sturm_bisect(a, b, index: int, lo: float, hi: float, iters: int = 80):
    """Eigenvalue number `index` (0-based ascending) by Sturm bisection."""
    n = a.size
    if index < 0 or index >= n:
        return None
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _sturm_count(a, b, mid) <= index:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)
