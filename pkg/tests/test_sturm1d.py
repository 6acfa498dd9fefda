"""Solver-level tests: exact spectra, convergence order, resolvent properties."""

import numpy as np
import pytest

from magspec import sturm1d
from magspec.errors import SingularSystem
from magspec.sturm1d import EndpointCondition, Interval, RadialEigenProblem


def oscillator(n=2000, *, xi=0.0, robin=None, domain=20.0):
    left = EndpointCondition.dirichlet() if robin is None else EndpointCondition.robin(robin)
    return RadialEigenProblem(
        interval=Interval(0.0, domain, n),
        potential=lambda t: (t - xi) ** 2,
        left=left,
        right=EndpointCondition.dirichlet(),
    )


def test_neumann_half_line_oscillator_ground_state():
    # exp(-t^2/2) satisfies f'(0) = 0 exactly: eigenvalue 1
    sol = sturm1d.solve(oscillator(robin=0.0), 1)
    assert abs(sol.eigenvalues[0] - 1.0) < 1e-8


@pytest.mark.parametrize("xi", [0.3, 0.7, 1.2])
def test_robin_shifted_gaussian_ground_state(xi):
    # exp(-(t-xi)^2/2) satisfies f'(0) = xi f(0) exactly and is positive
    sol = sturm1d.solve(oscillator(xi=xi, robin=xi), 1)
    assert abs(sol.eigenvalues[0] - 1.0) < 1e-8


def test_dirichlet_half_line_oscillator_spectrum():
    # odd Hermite levels 3, 7
    sol = sturm1d.solve(oscillator(), 2)
    assert abs(sol.eigenvalues[0] - 3.0) < 1e-7
    assert abs(sol.eigenvalues[1] - 7.0) < 1e-7


def test_h2_order_of_accuracy():
    # unextrapolated eigenvalue error shrinks by ~4 when n doubles
    for kwargs, exact in [
        (dict(robin=0.0), 1.0),
        (dict(xi=0.7, robin=0.7), 1.0),
        (dict(), 3.0),
    ]:
        errs = []
        for n in (500, 1000):
            prob = oscillator(n, **kwargs)
            vals, _, _, _ = sturm1d._eig_grid(prob, n, 1)
            errs.append(vals[0] - exact)
        ratio = errs[0] / errs[1]
        assert 3.6 <= ratio <= 4.4


def test_richardson_error_bounds_true_error():
    prob = oscillator(1000, xi=0.7, robin=0.7)
    sol = sturm1d.solve(prob, 1)
    fine, _, _, _ = sturm1d._eig_grid(prob, 2 * 1000 + 1, 1)
    assert abs(sol.eigenvalues[0] - fine[0]) <= sol.richardson_error[0] * (1 + 1e-9)


def test_robin_monotonicity_in_coefficient():
    rng = np.random.default_rng(3)
    kappas = np.sort(rng.uniform(-1.0, 1.5, size=4))
    prev = None
    for kappa in kappas:
        sol = sturm1d.solve(oscillator(800, xi=0.5, robin=kappa), 3)
        if prev is not None:
            assert np.all(sol.eigenvalues > prev)
        prev = sol.eigenvalues


def test_dirichlet_dominates_neumann():
    dir_sol = sturm1d.solve(oscillator(800), 3)
    neu_sol = sturm1d.solve(oscillator(800, robin=0.0), 3)
    assert np.all(dir_sol.eigenvalues > neu_sol.eigenvalues)


def test_eigenfunction_normalization_and_residuals():
    sol = sturm1d.solve(oscillator(1200, xi=0.3, robin=0.3), 2)
    w = sturm1d.trapezoid_weights(Interval(0.0, 20.0, 1200))
    for f in sol.eigenfunctions:
        assert abs(np.dot(w * f, f) - 1.0) < 1e-12
    assert np.all(sol.residual_norms < 1e-8)
    assert np.all(np.diff(sol.eigenvalues) > 0)
    assert sol.tail_mass < 1e-8 and not sol.truncation_warning


def test_truncation_flag_on_short_domain():
    sol = sturm1d.solve(oscillator(600, xi=1.2, robin=1.2, domain=3.0), 1)
    assert sol.tail_mass > 1e-8
    assert sol.truncation_warning


class TestOrthogonalityConstraint:
    def setup_method(self):
        self.prob = oscillator(1500, xi=0.7, robin=0.7)
        n = self.prob.interval.n
        vals, vecs, grid, _ = sturm1d._eig_grid(self.prob, n, 1, vectors=True)
        self.shift = float(vals[0])
        phi = sturm1d._to_physical(self.prob, grid, vecs[:, 0])
        self.w = sturm1d.trapezoid_weights(self.prob.interval)
        self.phi = phi / np.sqrt(np.dot(self.w * phi, phi))
        self.grid = grid

    def inner(self, u, v):
        return float(np.dot(self.w * u, v))

    def test_kernel_maps_to_zero(self):
        f = sturm1d.solve_with_orthogonality_constraint(
            self.prob, self.shift, self.phi, self.phi
        )
        assert np.max(np.abs(f)) < 1e-12

    def test_defining_property_on_orthogonal_rhs(self):
        t = self.grid.nodes()
        rhs = (t - 0.7) * self.phi
        rhs = rhs - self.inner(rhs, self.phi) * self.phi
        f = sturm1d.solve_with_orthogonality_constraint(self.prob, self.shift, rhs, self.phi)
        assert abs(self.inner(f, self.phi)) < 1e-12
        # residual of (A - shift) f against rhs, computed with the same stencil
        h = self.grid.h
        res = np.empty_like(f)
        res[1:-1] = (-f[:-2] + 2.0 * f[1:-1] - f[2:]) / h**2 + (
            (t[1:-1] - 0.7) ** 2 - self.shift
        ) * f[1:-1] - rhs[1:-1]
        assert np.max(np.abs(res[1:-1])) < 1e-7

    def test_unnormalized_kernel_rejected(self):
        with pytest.raises(ValueError):
            sturm1d.solve_with_orthogonality_constraint(
                self.prob, self.shift, self.phi, 2.0 * self.phi
            )


def test_multiplicity_raises_singular_system():
    # two decoupled identical wells separated by a huge barrier: even/odd pair
    # is degenerate to machine precision
    def double_well(t):
        return (np.minimum(np.abs(t - 5.0), np.abs(t - 15.0)) * 4.0) ** 2

    prob = RadialEigenProblem(
        interval=Interval(0.0, 20.0, 2200),
        potential=double_well,
        left=EndpointCondition.dirichlet(),
        right=EndpointCondition.dirichlet(),
    )
    with pytest.raises(SingularSystem):
        sturm1d.solve(prob, 2)
