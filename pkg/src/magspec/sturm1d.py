"""Finite-difference eigensolver for 1D Schrodinger operators in Liouville form.

Solves ``-f'' + W(x) f = lambda f`` on a finite interval with Dirichlet or
Robin endpoint conditions (``f' = kappa f``, the derivative always taken with
respect to increasing ``x``).  Second-order central differences; a Robin
endpoint keeps the boundary value as an unknown through ghost-node
elimination, and the resulting half-weight boundary row is rescaled so the
matrix stays symmetric tridiagonal.  Eigenvalues come from LAPACK's
Sturm-sequence bisection, eigenvectors from inverse iteration, and each
eigenvalue is refined by Richardson extrapolation over the aligned grid pair
``(n, 2n+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .errors import NonConvergence, SingularSystem

__all__ = [
    "Interval",
    "EndpointKind",
    "EndpointCondition",
    "RadialEigenProblem",
    "EigenSolution",
    "solve",
    "solve_with_orthogonality_constraint",
]

# Adjacent eigenvalues closer than this are treated as a numerical multiplicity.
MULTIPLICITY_GAP = 1e-11
TAIL_MASS_TOL = 1e-8


class EndpointKind(Enum):
    DIRICHLET = "dirichlet"
    ROBIN = "robin"


@dataclass(frozen=True)
class EndpointCondition:
    """Boundary condition at one endpoint.

    Robin means ``f'(x0) = coefficient * f(x0)`` with the derivative taken
    along increasing coordinate; Dirichlet ignores the coefficient.
    """

    kind: EndpointKind
    coefficient: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.coefficient):
            raise ValueError("Robin coefficient must be finite")

    @staticmethod
    def dirichlet() -> "EndpointCondition":
        return EndpointCondition(EndpointKind.DIRICHLET)

    @staticmethod
    def robin(coefficient: float) -> "EndpointCondition":
        return EndpointCondition(EndpointKind.ROBIN, float(coefficient))


@dataclass(frozen=True)
class Interval:
    """Uniform grid on [lo, hi] with ``n`` interior nodes (spacing ``h = (hi-lo)/(n+1)``)."""

    lo: float
    hi: float
    n: int

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 16:
            raise ValueError(f"need at least 16 interior nodes, got {self.n}")

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n + 1)

    def nodes(self) -> np.ndarray:
        """Full closed grid including both endpoints (n+2 points)."""
        return self.lo + self.h * np.arange(self.n + 2)

    def refined(self) -> "Interval":
        """The aligned Richardson partner grid (2n+1 interior nodes, h/2)."""
        return Interval(self.lo, self.hi, 2 * self.n + 1)


@dataclass(frozen=True)
class RadialEigenProblem:
    """A 1D problem ``-f'' + W(x) f`` with two endpoint conditions.

    ``potential`` is a vectorized callable sampled on grid nodes; a singular
    potential is only ever evaluated at interior nodes (a singular endpoint
    must carry a Dirichlet condition, so its node never enters the matrix).
    """

    interval: Interval
    potential: Callable[[np.ndarray], np.ndarray]
    left: EndpointCondition
    right: EndpointCondition


@dataclass
class EigenSolution:
    """Ascending eigenvalues with grid-sampled eigenfunctions and error data.

    Eigenfunctions are sampled on the full closed grid of the problem interval
    and L2-normalized with the trapezoid weight; ``richardson_error[i]`` is
    ``|lambda_fine - lambda_coarse| / 3``; ``tail_mass`` is the largest
    fraction of eigenfunction mass in the last 10% of the interval.
    """

    eigenvalues: np.ndarray
    eigenfunctions: list[np.ndarray]
    residual_norms: np.ndarray
    richardson_error: np.ndarray
    tail_mass: float
    truncation_warning: bool = field(default=False)


def trapezoid_weights(interval: Interval) -> np.ndarray:
    """Trapezoid quadrature weights on the full closed grid (include the h factor)."""
    w = np.full(interval.n + 2, interval.h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def grid_inner(interval: Interval, u: np.ndarray, v: np.ndarray) -> float:
    """Trapezoid inner product of two full-grid vectors."""
    return float(np.dot(trapezoid_weights(interval) * u, v))


def _assemble(problem: RadialEigenProblem, n: int) -> tuple[np.ndarray, np.ndarray, Interval]:
    """Symmetric tridiagonal matrix (diagonal, off-diagonal) for n interior nodes.

    Unknowns run over interior nodes plus each Robin endpoint.  A Robin row is
    the ghost-eliminated equation with half trapezoid mass, rescaled by the
    substitution g = f/sqrt(2) at that node, which restores symmetry.
    """
    grid = Interval(problem.interval.lo, problem.interval.hi, n)
    h = grid.h
    x = grid.nodes()
    li = 0 if problem.left.kind is EndpointKind.ROBIN else 1
    ri = n + 1 if problem.right.kind is EndpointKind.ROBIN else n
    xs = x[li : ri + 1]
    w = np.asarray(problem.potential(xs), dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("potential must be finite at all sampled nodes")
    d = 2.0 / h**2 + w
    e = np.full(len(xs) - 1, -1.0 / h**2)
    if problem.left.kind is EndpointKind.ROBIN:
        d[0] = (2.0 + 2.0 * h * problem.left.coefficient) / h**2 + w[0]
        e[0] = -np.sqrt(2.0) / h**2
    if problem.right.kind is EndpointKind.ROBIN:
        d[-1] = (2.0 - 2.0 * h * problem.right.coefficient) / h**2 + w[-1]
        e[-1] = -np.sqrt(2.0) / h**2
    return d, e, grid


def _unknown_slice(problem: RadialEigenProblem, n: int) -> slice:
    li = 0 if problem.left.kind is EndpointKind.ROBIN else 1
    ri = n + 1 if problem.right.kind is EndpointKind.ROBIN else n
    return slice(li, ri + 1)


def _to_physical(problem: RadialEigenProblem, grid: Interval, vec: np.ndarray) -> np.ndarray:
    """Map a unit symmetric-coordinate eigenvector to the trapezoid-normalized full grid."""
    full = np.zeros(grid.n + 2)
    sl = _unknown_slice(problem, grid.n)
    f = vec / np.sqrt(grid.h)
    if problem.left.kind is EndpointKind.ROBIN:
        f[0] *= np.sqrt(2.0)
    if problem.right.kind is EndpointKind.ROBIN:
        f[-1] *= np.sqrt(2.0)
    full[sl] = f
    return full


def _to_symmetric(problem: RadialEigenProblem, grid: Interval, full: np.ndarray) -> np.ndarray:
    """Inverse of :func:`_to_physical` up to normalization (drops Dirichlet nodes)."""
    sl = _unknown_slice(problem, grid.n)
    g = full[sl] * np.sqrt(grid.h)
    if problem.left.kind is EndpointKind.ROBIN:
        g[0] /= np.sqrt(2.0)
    if problem.right.kind is EndpointKind.ROBIN:
        g[-1] /= np.sqrt(2.0)
    return g


def _eig_grid(
    problem: RadialEigenProblem, n: int, count: int, vectors: bool = False
) -> tuple[np.ndarray, np.ndarray | None, Interval, tuple[np.ndarray, np.ndarray]]:
    d, e, grid = _assemble(problem, n)
    try:
        if vectors:
            vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1))
        else:
            vals = eigh_tridiagonal(
                d, e, select="i", select_range=(0, count - 1), eigvals_only=True
            )
            vecs = None
    except (np.linalg.LinAlgError, ValueError) as exc:  # pragma: no cover - LAPACK failure
        raise NonConvergence(f"tridiagonal eigensolve failed at n={n}: {exc}") from exc
    return np.asarray(vals), vecs, grid, (d, e)


def solve(problem: RadialEigenProblem, count: int) -> EigenSolution:
    """Lowest ``count`` eigenpairs, Richardson-refined over the (n, 2n+1) grid pair."""
    n = problem.interval.n
    if count < 1:
        raise ValueError("count must be positive")
    if count > n // 4:
        raise ValueError(f"count={count} exceeds n/4={n // 4}")

    coarse, _, _, _ = _eig_grid(problem, n, count)
    fine, vecs, fgrid, (d, e) = _eig_grid(problem, 2 * n + 1, count, vectors=True)
    lam = fine + (fine - coarse) / 3.0
    rich = np.abs(fine - coarse) / 3.0

    if count > 1 and np.min(np.diff(fine)) < MULTIPLICITY_GAP:
        raise SingularSystem("numerically multiple eigenvalue detected")

    residuals = np.empty(count)
    funcs: list[np.ndarray] = []
    tail = 0.0
    lo, hi = problem.interval.lo, problem.interval.hi
    cut = lo + 0.9 * (hi - lo)
    coarse_nodes = problem.interval.nodes()
    wq = trapezoid_weights(problem.interval)
    for i in range(count):
        v = vecs[:, i]
        top = np.empty_like(v)
        top[:] = d * v
        top[:-1] += e * v[1:]
        top[1:] += e * v[:-1]
        residuals[i] = float(np.linalg.norm(top - fine[i] * v) / max(1.0, abs(fine[i])))
        full_fine = _to_physical(problem, fgrid, v)
        f = full_fine[::2]  # aligned restriction to the coarse grid
        f = f / np.sqrt(np.dot(wq * f, f))
        funcs.append(f)
        mass = wq * f * f
        tail = max(tail, float(np.sum(mass[coarse_nodes >= cut])))

    return EigenSolution(
        eigenvalues=lam,
        eigenfunctions=funcs,
        residual_norms=residuals,
        richardson_error=rich,
        tail_mass=tail,
        truncation_warning=tail > TAIL_MASS_TOL,
    )


def solve_with_orthogonality_constraint(
    problem: RadialEigenProblem,
    shift: float,
    rhs: np.ndarray,
    kernel: np.ndarray,
) -> np.ndarray:
    """Apply the regularized resolvent of the discretized operator.

    Returns the full-grid vector ``f`` with ``(A - shift) f = rhs - <kernel, rhs> kernel``
    and ``<f, kernel> = 0``, where ``shift`` must be an eigenvalue of the
    discretization of ``problem`` on its own grid with trapezoid-normalized
    eigenvector ``kernel``.  Solved as a bordered sparse system.
    """
    n = problem.interval.n
    d, e, grid = _assemble(problem, n)
    k = _to_symmetric(problem, grid, np.asarray(kernel, dtype=float))
    knorm = np.linalg.norm(k)
    if abs(knorm - 1.0) > 1e-6:
        raise ValueError("kernel must be trapezoid-normalized on the problem grid")
    k = k / knorm
    g = _to_symmetric(problem, grid, np.asarray(rhs, dtype=float))
    g -= np.dot(k, g) * k

    m = len(d)
    rows = np.concatenate(
        [np.arange(m), np.arange(m - 1), np.arange(1, m), np.arange(m), np.full(m, m)]
    )
    cols = np.concatenate(
        [np.arange(m), np.arange(1, m), np.arange(m - 1), np.full(m, m), np.arange(m)]
    )
    vals = np.concatenate([d - shift, e, e, k, k])
    mat = csc_matrix((vals, (rows, cols)), shape=(m + 1, m + 1))
    try:
        lu = splu(mat)
        sol = lu.solve(np.concatenate([g, [0.0]]))
    except RuntimeError as exc:
        raise SingularSystem(f"bordered resolvent system is singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("bordered resolvent solve produced non-finite values")
    out = sol[:m]

    full = np.zeros(n + 2)
    sl = _unknown_slice(problem, n)
    f = out / np.sqrt(grid.h)
    if problem.left.kind is EndpointKind.ROBIN:
        f[0] *= np.sqrt(2.0)
    if problem.right.kind is EndpointKind.ROBIN:
        f[-1] *= np.sqrt(2.0)
    full[sl] = f
    return full
