import math
import random

import pytest

from twistheights import exactmath as xm
from twistheights.errors import PrecisionError


class TestValuation:
    def test_basic(self):
        assert xm.valuation(12, 2) == 2

    def test_reference_discriminant(self):
        assert xm.valuation(-2169968112, 13) == 3

    def test_squared_prime(self):
        # 245 = 5 * 7^2
        assert xm.valuation(245, 7) == 2

    def test_zero_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            xm.valuation(0, 5)

    def test_divisibility_property(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 10**9)
            p = rng.choice([2, 3, 5, 7, 11, 13])
            e = xm.valuation(n, p)
            assert n % p**e == 0
            assert n % p ** (e + 1) != 0


class TestSquareFree:
    def test_examples(self):
        assert xm.square_free_test(339).status == "square_free"
        verdict = xm.square_free_test(245)
        assert verdict.status == "not_square_free" and verdict.witness == 7
        assert xm.square_free_test(1).status == "square_free"

    def test_unknown_residual(self):
        # product of two primes above the trial bound: not resolvable
        n = 1000003 * 1000033 * 1000037 * 1000039
        verdict = xm.square_free_test(n, trial_bound=1000)
        assert verdict.status == "unknown"
        assert verdict.residual == n

    def test_perfect_square_residual(self):
        n = 1000003**2
        verdict = xm.square_free_test(n, trial_bound=1000)
        assert verdict.status == "not_square_free" and verdict.witness == 1000003

    def test_prime_residual_is_definite(self):
        n = 6 * 962116970650109  # large prime residual appears once
        assert xm.square_free_test(n, trial_bound=10**6).status == "square_free"

    def test_never_contradicts_brute_force(self):
        rng = random.Random(11)
        for _ in range(80):
            n = rng.randint(2, 10**9)
            verdict = xm.square_free_test(n, trial_bound=10**5)
            if not verdict.definite:
                continue
            brute_square_free = True
            m = n
            d = 2
            while d * d <= m:
                if m % (d * d) == 0:
                    brute_square_free = False
                    break
                if m % d == 0:
                    m //= d
                else:
                    d += 1
            assert bool(verdict) == brute_square_free


class TestFactorize:
    def test_reference(self):
        assert xm.factorize(-2169968112) == {2: 4, 3: 2, 13: 3, 19: 3}

    def test_large_cofactor(self):
        n = 118418318864586065829  # needs a primality call on the residual
        assert xm.factorize(n) == {3: 1, 7: 1, 5861: 1, 962116970650109: 1}


P = xm.IntPolynomial


class TestIntPolynomial:
    def test_derivative_reference(self):
        F = P([0, 12, 2, 0, 1])  # t^4 + 2t^2 + 12t
        assert F.derivative() == P([12, 4, 0, 4])
        assert F.derivative() == 4 * P([3, 1, 0, 1])

    def test_compose(self):
        assert P([0, 0, 1]).compose(P([1, 1])) == P([1, 2, 1])

    def test_exact_divide_family_quotient(self):
        f = P([3, 1, 0, 1])
        F = P([0, 12, 2, 0, 1])
        f1 = P([2205, 163, 2, 1])
        D = f1.compose(F).exact_divide(f * f)
        assert D == P([245, 54, 5, 30, 4, 0, 1])

    def test_inexact_divide_raises(self):
        with pytest.raises(ValueError, match="remainder"):
            P([1, 0, 1]).exact_divide(P([1, 1]))

    def test_exact_divide_roundtrip_random(self):
        rng = random.Random(3)
        for _ in range(100):
            a = P([rng.randint(-100, 100) for _ in range(rng.randint(1, 9))])
            b = P([rng.randint(-100, 100) for _ in range(rng.randint(1, 9))])
            if a.is_zero or b.is_zero:
                continue
            assert (a * b).exact_divide(b) == a

    def test_eval_horner(self):
        D = P([245, 54, 5, 30, 4, 0, 1])
        assert D(1) == 339
        assert D(0) == 245


class TestResultantDiscriminant:
    def test_disc_depressed_cubic(self):
        assert xm.poly_discriminant(P([3, 1, 0, 1])) == -247
        # sign convention: disc(t^3 + At + B) = -4A^3 - 27B^2
        for A, B in [(1, 3), (-2, 5), (0, 1), (4, -3)]:
            expected = -4 * A**3 - 27 * B**2
            assert xm.poly_discriminant(P([B, A, 0, 1])) == expected

    def test_disc_quadratic(self):
        assert xm.poly_discriminant(P([-1, 0, 1])) == 4

    def test_disc_f1_via_identity(self):
        # disc(f1) = B^2 disc(f)^3 with disc(f) = -247 for the worked family
        assert xm.poly_discriminant(P([2205, 163, 2, 1])) == 9 * (-247) ** 3 == -135623007

    def test_disc_against_root_products(self):
        rng = random.Random(5)
        for _ in range(40):
            roots = rng.sample(range(-12, 13), rng.randint(2, 4))
            poly = P([1])
            for r in roots:
                poly = poly * P([-r, 1])
            expected = 1
            for i in range(len(roots)):
                for j in range(i + 1, len(roots)):
                    expected *= (roots[i] - roots[j]) ** 2
            assert xm.poly_discriminant(poly) == expected

    def test_resultant_multiplicativity(self):
        rng = random.Random(9)
        for _ in range(30):
            a = P([rng.randint(-9, 9) for _ in range(3)] + [rng.randint(1, 9)])
            b = P([rng.randint(-9, 9) for _ in range(2)] + [rng.randint(1, 9)])
            c = P([rng.randint(-9, 9) for _ in range(2)] + [rng.randint(1, 9)])
            assert xm.poly_resultant(a, b * c) == xm.poly_resultant(a, b) * xm.poly_resultant(a, c)


class TestAgm:
    def test_fixed_points(self):
        ctx = xm.context(128)
        assert xm.agm(ctx, 1, 1) == 1
        x = ctx.mpf("2.75")
        assert abs(xm.agm(ctx, x, x) - x) < xm.error_estimate(ctx)

    def test_lemniscate_constant(self):
        # agm(sqrt 2, 1) = pi / lemniscate-constant; the constant computed
        # independently as 2 * int_0^1 dt / sqrt(1 - t^4)
        ctx = xm.context(160)
        value = xm.agm(ctx, ctx.sqrt(2), 1)
        lemniscate = 2 * ctx.quad(lambda t: 1 / ctx.sqrt(1 - t**4), [0, 1], maxdegree=8)
        # quadrature limits the comparison (endpoint singularity), not agm
        assert abs(value - ctx.pi / lemniscate) < ctx.mpf(2) ** (-80)
        assert ctx.nstr(value, 11) == "1.1981402347"

    def test_functional_equation(self):
        ctx = xm.context(128)
        rng = random.Random(13)
        for _ in range(20):
            a = ctx.mpf(rng.randint(1, 50)) / rng.randint(1, 7)
            b = ctx.mpf(rng.randint(1, 50)) / rng.randint(1, 7)
            left = xm.agm(ctx, a, b)
            right = xm.agm(ctx, (a + b) / 2, ctx.sqrt(a * b))
            assert abs(left - right) < xm.error_estimate(ctx) * max(abs(left), 1)

    def test_conjugate_pair(self):
        # complex conjugate inputs converge to a real limit under the
        # right-choice square root
        ctx = xm.context(128)
        z = ctx.mpc(3, 2)
        value = xm.agm(ctx, z, ctx.conj(z))
        assert abs(ctx.im(value)) < xm.error_estimate(ctx) * abs(value)

    def test_zero_rejected(self):
        ctx = xm.context(128)
        with pytest.raises(ValueError):
            xm.agm(ctx, 0, 1)


class TestContext:
    def test_minimum_precision(self):
        with pytest.raises(ValueError):
            xm.context(32)

    def test_contexts_independent(self):
        a = xm.context(128)
        b = xm.context(256)
        assert a.prec == 128 and b.prec == 256

    def test_xgcd_constant(self):
        u, v, r = xm.rational_poly_xgcd_constant([1, 0, 1], [2, 1])
        # u*(x^2+1) + v*(x+2) = r
        ux = P(u)
        vx = P(v)
        combo = ux * P([1, 0, 1]) + vx * P([2, 1])
        assert combo == P([r]) and r != 0

    def test_xgcd_common_factor_rejected(self):
        with pytest.raises(ValueError):
            xm.rational_poly_xgcd_constant([1, 2, 1], [1, 1])
