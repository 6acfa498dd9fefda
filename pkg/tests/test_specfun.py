"""Special function tests: classical values, identities, quadrature consistency."""

import math

import mpmath as mp
import numpy as np
import pytest

from magspec import specfun
from magspec.errors import DomainError, PoleError


class TestGamma:
    def test_half_integer(self):
        assert abs(specfun.gamma_fn(0.5) - math.sqrt(math.pi)) < 1e-15

    def test_factorial(self):
        assert specfun.gamma_fn(5.0) == pytest.approx(24.0, rel=1e-13)

    def test_negative_argument_recurrence(self):
        # Gamma(1 - nu) = -nu Gamma(-nu)
        nu = 0.3
        assert abs(specfun.gamma_fn(1 - nu) + nu * specfun.gamma_fn(-nu)) < 1e-13

    def test_recurrence_sweep(self):
        for x in np.arange(0.1, 5.05, 0.35):
            lhs = specfun.gamma_fn(x + 1.0)
            rhs = x * specfun.gamma_fn(x)
            assert abs(lhs - rhs) <= 1e-13 * abs(rhs)

    def test_accuracy_against_math_gamma(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            x = rng.uniform(-29.9, 30.0)
            if abs(x - round(x)) < 1e-3 and x < 0.5:
                continue
            ref = math.gamma(x)
            assert abs(specfun.gamma_fn(x) - ref) <= 2e-13 * abs(ref)

    def test_pole(self):
        with pytest.raises(PoleError):
            specfun.gamma_fn(-3.0)


class TestDigamma:
    def test_euler_mascheroni(self):
        assert abs(specfun.digamma(1.0) + specfun.EULER_GAMMA) < 1e-14

    def test_small_argument_pole_behaviour(self):
        a = 1e-4
        assert abs(specfun.digamma(a) + 1.0 / a + specfun.EULER_GAMMA) <= 1e-3

    def test_recurrence(self):
        x = 2.7
        assert abs(specfun.digamma(x + 1) - specfun.digamma(x) - 1.0 / x) < 1e-13

    def test_accuracy_sweep(self):
        for x in np.geomspace(0.05, 30.0, 40):
            ref = float(mp.digamma(x))
            assert abs(specfun.digamma(float(x)) - ref) <= 1e-12


class TestHyperU:
    def test_collapses_to_power(self):
        a, z = 0.75, 0.3
        assert specfun.hyperU(a, a + 1.0, z) == pytest.approx(z**-a, rel=1e-12)

    def test_small_z_regime_1_2(self):
        # U(0.3, 1.7, z) minus its two leading terms decays like z^0.3
        exp = specfun.u_small_z(0.3, 1.7)
        rems = []
        for z in (1e-3, 1e-4):
            rems.append(abs(specfun.hyperU(0.3, 1.7, z) - exp.evaluate(z)))
        ratio = rems[0] / rems[1]
        assert 10 ** (0.3 - 0.15) < ratio < 10 ** (0.3 + 0.15)

    def test_small_z_regime_gt_2(self):
        z = 1e-4
        val = specfun.hyperU(0.4, 3.5, z) * z**2.5 * specfun.gamma_fn(0.4) / specfun.gamma_fn(2.5)
        assert abs(val - 1.0) < 1e-2

    def test_log_regime_constant_empirically(self):
        # c = 2: second term is (log z + psi(a) + 2 euler - 1)/Gamma(a-1);
        # verified against quadrature, pinning the constant convention.
        a = 0.35
        exp = specfun.u_small_z(a, 2.0)
        for z in (1e-4, 1e-5):
            second = specfun.hyperU(a, 2.0, z) - 1.0 / (specfun.gamma_fn(a) * z)
            predicted = (math.log(z) + specfun.digamma(a) + 2 * specfun.EULER_GAMMA - 1.0) / (
                specfun.gamma_fn(a - 1.0)
            )
            assert abs(second - predicted) < 30.0 * z * abs(math.log(z))
            assert exp.evaluate(z) == pytest.approx(
                1.0 / (specfun.gamma_fn(a) * z) + predicted, rel=1e-12
            )

    def test_against_mpmath_grid(self):
        mp.mp.dps = 25
        rng = np.random.default_rng(5)
        for _ in range(40):
            a = rng.uniform(0.05, 5.0)
            c = rng.uniform(-6.0, 6.0)
            z = 10 ** rng.uniform(-6, math.log10(50.0))
            ref = float(mp.hyperu(a, c, z))
            assert abs(specfun.hyperU(a, c, z) - ref) <= 1e-10 * abs(ref)

    def test_positive_and_decreasing_in_z(self):
        rng = np.random.default_rng(17)
        a = rng.uniform(0.1, 4.0)
        c = rng.uniform(-5.0, 5.0)
        zs = np.geomspace(1e-4, 40.0, 12)
        vals = [specfun.hyperU(a, c, z) for z in zs]
        assert all(v > 0 for v in vals)
        assert all(v1 > v2 for v1, v2 in zip(vals, vals[1:]))

    def test_quadrature_self_consistency(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a = rng.uniform(0.05, 5.0)
            c = rng.uniform(-6.0, 6.0)
            z = 10 ** rng.uniform(-6, math.log10(50.0))
            coarse = specfun.hyperU(a, c, z, tol=1e-11)
            fine = specfun.hyperU(a, c, z, tol=1e-13)
            assert abs(coarse - fine) <= 1e-10 * abs(fine)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.hyperU(-0.5, 1.0, 1.0)
        with pytest.raises(DomainError):
            specfun.hyperU(0.5, 1.0, -1.0)


class TestHyperUDz:
    def test_definition(self):
        val = specfun.hyperU_dz(0.5, 2.0, 1.0)
        assert val + 0.5 * specfun.hyperU(1.5, 3.0, 1.0) == 0.0

    def test_finite_difference_oracle(self):
        a, c, z, h = 0.5, 2.0, 1.0, 1e-5
        fd = (specfun.hyperU(a, c, z + h) - specfun.hyperU(a, c, z - h)) / (2 * h)
        val = specfun.hyperU_dz(a, c, z)
        assert abs(val - fd) <= 1e-6 * abs(val)

    def test_sign(self):
        assert specfun.hyperU_dz(0.75, 1.75, 0.3) < 0.0


class TestParabolicCylinder:
    def test_positive_decaying_tail(self):
        d5 = specfun.parabolic_D_half(5.0)
        d3 = specfun.parabolic_D_half(3.0)
        assert d5 > 0.0
        assert abs(d5) < abs(d3)

    def test_unique_negative_zero_location(self):
        vals = [specfun.parabolic_D_half(z) for z in (-1.0, -0.5)]
        assert vals[0] * vals[1] < 0.0

    def test_no_zero_on_positive_axis(self):
        zs = np.linspace(0.0, 10.0, 60)
        assert all(specfun.parabolic_D_half(z) > 0.0 for z in zs)

    def test_negative_zero_value(self):
        alpha = specfun.neg_zero_D_half()
        assert 0.76 < alpha < 0.77
        assert abs(alpha / math.sqrt(2.0) - 0.5409019) < 1e-6
        assert abs(specfun.parabolic_D_half(-alpha)) < 1e-9

    def test_zero_stable_under_tolerance(self):
        a1 = specfun.neg_zero_D_half()
        a2 = specfun.neg_zero_D_half(rtol=5e-12)
        assert abs(a1 - a2) <= 1e-9
