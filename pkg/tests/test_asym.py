"""Predictor tests: closed forms, symmetries, sequence machinery, corrections."""

import math

import numpy as np
import pytest

from magspec import asym, degennes, fiber, specfun
from magspec.errors import DomainError, NoPositiveRoot


@pytest.fixture(scope="module")
def K0():
    return degennes.constants(0.0)


@pytest.fixture(scope="module")
def Ka():
    return degennes.constants(-degennes.hat_alpha())


class TestDeltaM:
    def test_vanishing_square(self, K0):
        b = 100.0
        m_exact = 0.3 + b / 2.0 + math.sqrt(b) * K0.xi + K0.c0
        val = asym.delta_m(m_exact, b, 0.3, K0)  # real m makes the square vanish
        assert val == pytest.approx(K0.c1, abs=1e-14)

    def test_integer_shift_identity(self, K0):
        for m, b, nu in [(5, 30.0, 0.2), (60, 100.0, -0.4)]:
            assert asym.delta_m(m + 1, b, nu, K0) == asym.delta_m(m, b, nu - 1.0, K0)

    def test_argmin_matches_brute_force(self, K0):
        rng = np.random.default_rng(2)
        for _ in range(25):
            b = float(rng.uniform(1.0, 500.0))
            nu = float(rng.uniform(-0.5, 0.5))
            center = asym.eta_value(b, nu, K0)
            m0 = round(center)
            brute = min(
                range(m0 - 5, m0 + 6), key=lambda m: (asym.delta_m(m, b, nu, K0), m)
            )
            pred = asym.predict_strong(b, nu, K0)
            assert pred.m_star == brute


class TestPredictStrong:
    def test_total_is_sum_of_terms(self, K0):
        p = asym.predict_strong(200.0, 0.3, K0)
        assert p.total == p.term_theta_b + p.term_c_sqrtb + p.term_osc
        assert p.delta_min >= K0.c1

    def test_flux_periodicity(self, K0):
        t1 = asym.predict_strong(123.0, 0.3, K0)
        t2 = asym.predict_strong(123.0, 0.3 - 1.0, K0)
        assert t1.total == t2.total
        assert t2.m_star == t1.m_star - 1

    def test_oscillation_band(self, K0):
        # the integer-minimized square stays within [0, 1/4] to the left of c1
        rng = np.random.default_rng(8)
        scale = K0.xi * K0.theta_prime
        for _ in range(20):
            b = float(rng.uniform(4.0, 900.0))
            nu = float(rng.uniform(-0.5, 0.5))
            p = asym.predict_strong(b, nu, K0)
            osc = p.total - p.term_theta_b - p.term_c_sqrtb
            assert scale * K0.c1 - 1e-12 <= osc <= scale * (K0.c1 + 0.25) + 1e-12

    def test_neumann_zero_flux_reduces_to_classic_form(self, K0):
        # at gamma = 0, nu = 0 the first two terms are Theta0 b + C(0) sqrt(b)
        p = asym.predict_strong(400.0, 0.0, K0)
        assert p.term_theta_b == pytest.approx(K0.theta * 400.0, rel=1e-15)
        assert p.term_c_sqrtb == pytest.approx(K0.c_upper * 20.0, rel=1e-15)


class TestEta:
    def test_strictly_increasing_in_b(self, K0):
        bs = np.linspace(1.0, 50.0, 25)
        vals = [asym.eta_value(float(b), 0.2, K0) for b in bs]
        assert all(y > x for x, y in zip(vals, vals[1:]))

    def test_additive_in_nu(self, K0):
        assert asym.eta_value(10.0, 0.3, K0) - asym.eta_value(10.0, 0.1, K0) == pytest.approx(
            0.2, abs=1e-12
        )

    def test_steklov_point_form(self, Ka):
        # at gamma = -hat_alpha the center is b/2 + sqrt(b) hat_alpha + c0 + nu
        # xi(-hat_alpha) = hat_alpha holds to the minimizer tolerance 1e-6
        a = degennes.hat_alpha()
        b = 50.0
        expected = 0.1 + b / 2.0 + math.sqrt(b) * a + Ka.c0
        assert asym.eta_value(b, 0.1, Ka) == pytest.approx(expected, abs=1e-5)


class TestE0Sequence:
    def test_construction_pins_fractional_part(self, K0):
        seq = asym.build_e0_sequence(0.3, 0.2, K0, range(50, 55))
        for _, p, b in seq.entries:
            assert abs(asym.eta_value(b, 0.2, K0) - p - 0.3) < 1e-10
        bs = [b for _, _, b in seq.entries]
        assert all(y > x for x, y in zip(bs, bs[1:]))

    def test_large_index_expansion(self, Ka):
        # b_n = 2n - 2^(3/2) a sqrt(n) + 2(a^2 - A + e0 - nu) + o(1), where A
        # is the effective eta constant of the shifted sequence
        a = degennes.hat_alpha()
        e0, nu = 0.25, 0.1
        a_term = (a * a + 1.0) * (Ka.theta_prime - 2.0 * a) / (6.0 * a)
        seq = asym.build_e0_sequence(e0, nu, Ka, range(10000, 10001), center_shift=a_term)
        _, p, b = seq.entries[0]
        A_eff = a_term + Ka.c0
        approx = 2 * p - 2**1.5 * a * math.sqrt(p) + 2 * (a * a - A_eff + e0 - nu)
        assert abs(b - approx) <= 0.05

    def test_nu_shift_relabels_indices(self, K0):
        s1 = asym.build_e0_sequence(0.2, 0.3, K0, range(40, 43))
        s2 = asym.build_e0_sequence(0.2, 0.3 - 1.0, K0, range(39, 42))
        for (_, p1, b1), (_, p2, b2) in zip(s1.entries, s2.entries):
            assert p1 - p2 == 1
            assert b1 == pytest.approx(b2, abs=1e-12)

    def test_no_positive_root(self, K0):
        with pytest.raises(NoPositiveRoot):
            asym.build_e0_sequence(0.3, 0.2, K0, range(0, 1))


class TestPredictLevels:
    def test_e0_zero_doublet(self, K0):
        lo, mid, hi = asym.predict_levels_on_sequence(100.0, 0.0, 0.2, K0)
        assert mid == hi
        assert lo < mid

    def test_e0_half_ground_doublet(self, K0):
        lo, mid, hi = asym.predict_levels_on_sequence(100.0, 0.5, 0.2, K0)
        assert lo == mid
        assert mid < hi

    def test_ordering_and_sign_symmetry(self, K0):
        for e0 in (0.1, 0.35, 0.5):
            plus = asym.predict_levels_on_sequence(80.0, e0, 0.2, K0)
            minus = asym.predict_levels_on_sequence(80.0, -e0, 0.2, K0)
            assert plus == minus
            assert plus[0] <= plus[1] <= plus[2]


class TestPredictWeak:
    def test_zero_flux(self):
        b = 0.01
        assert asym.predict_weak(0, 0.0, b) == pytest.approx(b - b * b, rel=1e-12)

    def test_half_flux_continuity(self):
        b = 0.02
        ref = b - math.sqrt(2.0 / math.pi) * b**1.5
        assert asym.predict_weak(0, 0.5, b) == pytest.approx(ref, rel=1e-12)
        assert asym.predict_weak(0, -0.5, b) == pytest.approx(ref, rel=1e-12)

    def test_correction_factor_matches_exact_equation(self):
        # the truncated-expansion factor reproduces the exact characteristic
        # root to a few parts in 1e8 on the fit window
        for (m, nu) in [(1, 0.25), (0, -0.25)]:
            mtil = m - nu
            lead = 2.0 ** (1.0 - mtil) / specfun.gamma_fn(mtil)
            for b in (1e-3, 1e-2):
                gap = b - fiber.implicit_eig_U(m, nu, b)
                model = lead * b ** (1.0 + mtil) * asym.weak_splitting_correction(m, nu, b)
                assert abs(model - gap) <= 1e-6 * gap


class TestLandauFamily:
    def test_quoted_values(self):
        assert asym.ab_landau_level(0, 0, 0.25) == pytest.approx(3.0)
        assert asym.ab_landau_level(0, 0, -0.25) == pytest.approx(5.0)
        assert asym.ab_landau_level(2, 0, 0.25) == pytest.approx(2.0)
        assert asym.ab_landau_level(2, 1, 0.25) == pytest.approx(6.0)

    def test_zero_flux_rejected(self):
        with pytest.raises(DomainError):
            asym.ab_landau_level(0, 0, 0.0)


class TestOrderingThreshold:
    def test_arithmetic(self):
        assert asym.ordering_threshold(3, 0.0) == pytest.approx(2.0)
        assert asym.ordering_threshold(3, 0.5) == pytest.approx(6.0 - math.sqrt(21.0))

    def test_increasing(self):
        vals = [asym.ordering_threshold(m, 0.25) for m in range(3, 9)]
        assert all(y > x for x, y in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            asym.ordering_threshold(2, 0.25)


class TestWeakSteklovBeta:
    def test_leading_constant(self):
        assert asym.weak_steklov_beta(0.25, 1e-8) == pytest.approx(-0.25, abs=1e-2)

    def test_depends_on_flux_magnitude(self):
        assert asym.weak_steklov_beta(0.25, 0.01) == asym.weak_steklov_beta(-0.25, 0.01)

    def test_log_branch(self):
        assert asym.weak_steklov_beta(0.0, math.exp(-10.0)) == pytest.approx(-0.2)


class TestSteklovConstants:
    def test_center_shift_value(self, Ka):
        a = degennes.hat_alpha()
        xi_prime = (Ka.theta_prime - 2.0 * a) / (2.0 * a)
        assert asym.steklov_center_shift() == pytest.approx(
            -(a * a + 1.0) / 3.0 * xi_prime, abs=1e-9
        )

    def test_feedback_constant_reproducible(self):
        g1 = asym.steklov_feedback_constant()
        assert g1 == pytest.approx(0.1452, abs=2e-3)

    def test_predict_steklov_structure(self):
        a = degennes.hat_alpha()
        val, f_term = asym.predict_steklov(400.0, 0.25)
        # leading term dominates and the dispersion part stays O(1)
        assert val / (a * 20.0) == pytest.approx(1.0, abs=0.05)
        assert abs(f_term) < 0.5
        # second term of the prediction
        assert (a * a + 1.0) / 3.0 == pytest.approx(0.430858, abs=5e-6)
