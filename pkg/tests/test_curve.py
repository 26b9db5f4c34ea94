import random
from fractions import Fraction

import pytest

import twistheights as th
from twistheights import IntPolynomial as P
from twistheights.errors import CurveError, HypothesisError, PointError


class TestMakeModel:
    def test_reference_curve_quantities(self, e163):
        assert e163.disc == -2169968112
        assert th.factorize(e163.disc) == {2: 4, 3: 2, 13: 3, 19: 3}
        assert e163.c4 == -7760
        assert e163.c6 == -1811744

    def test_c_identity_always(self):
        rng = random.Random(21)
        for _ in range(60):
            coeffs = [rng.randint(-20, 20) for _ in range(5)]
            try:
                model = th.make_model(*coeffs)
            except CurveError:
                continue
            assert 1728 * model.disc == model.c4**3 - model.c6**2

    def test_singular_rejected(self):
        with pytest.raises(CurveError, match="singular"):
            th.make_model(0, 0, 0, 0, 0)

    def test_general_model_quantities(self):
        model = th.make_model(0, -1, 1, -10, -20)  # a well-known conductor-11 curve
        assert model.disc == -161051  # = -11^5
        assert not model.is_short


class TestTwist:
    def test_coefficients(self, e163):
        twisted = th.twist(e163, 5)
        assert twisted.coefficients() == [0, 2 * 5, 0, 163 * 25, 2205 * 125]

    def test_identity_twist(self, e163):
        assert th.twist(e163, 1) == e163

    def test_disc_scaling(self, e163):
        assert th.twist(e163, 339).disc == e163.disc * 339**6

    def test_quantities_scale_with_twist(self, e163):
        for d in (5, -7, 339):
            twisted = th.twist(e163, d)
            assert twisted.b2 == e163.b2 * d
            assert twisted.b4 == e163.b4 * d**2
            assert twisted.b6 == e163.b6 * d**3
            assert twisted.b8 == e163.b8 * d**4
            assert twisted.c4 == e163.c4 * d**2
            assert twisted.c6 == e163.c6 * d**3
            assert twisted.disc == e163.disc * d**6

    def test_not_square_free_rejected(self, e163):
        with pytest.raises(HypothesisError, match="square-free"):
            th.twist(e163, 245)

    def test_zero_rejected(self, e163):
        with pytest.raises(HypothesisError):
            th.twist(e163, 0)

    def test_non_short_rejected(self):
        model = th.make_model(1, -1, 1, -10, -20)
        with pytest.raises(CurveError, match="short"):
            th.twist(model, 5)


class TestPoints:
    def test_canonical_form_enforced(self):
        pt = th.CurvePoint.from_xy(Fraction(9, 4), Fraction(-21, 8))
        assert (pt.alpha, pt.beta, pt.delta) == (9, -21, 2)

    def test_bad_denominator_rejected(self):
        with pytest.raises(PointError, match="square"):
            th.CurvePoint.from_xy(Fraction(1, 3), Fraction(1, 3))

    def test_mismatched_denominators_rejected(self):
        with pytest.raises(PointError):
            th.CurvePoint.from_xy(Fraction(1, 4), Fraction(1, 4))

    def test_serialization_roundtrip(self):
        pt = th.CurvePoint.from_xy(Fraction(9, 4), Fraction(-21, 8))
        assert th.CurvePoint.deserialize(pt.serialize()) == pt
        inf = th.CurvePoint.infinity()
        assert th.CurvePoint.deserialize(inf.serialize()).is_infinity


class TestGroupLaw:
    def test_identity(self, e339, p339):
        assert th.add(e339, p339, th.CurvePoint.infinity()) == p339
        assert th.add(e339, th.CurvePoint.infinity(), p339) == p339

    def test_two_torsion_doubles_to_infinity(self):
        model = th.make_short_model(1, 1, 0)  # y^2 = x^3 + x^2 + x, (0,0) on it
        assert th.double(model, th.CurvePoint.from_xy(0, 0)).is_infinity

    def test_duplication_reference(self):
        model = th.make_short_model(0, 0, 1)  # y^2 = x^3 + 1
        doubled = th.double(model, th.CurvePoint.from_xy(2, 3))
        assert (doubled.x, doubled.y) == (0, 1)

    def test_inverse(self, e339, p339):
        assert th.add(e339, p339, th.negate(e339, p339)).is_infinity

    def test_off_curve_rejected(self, e339):
        with pytest.raises(PointError, match="not on curve"):
            th.add(e339, th.CurvePoint.from_xy(5, 7), th.CurvePoint.from_xy(5, 7))

    def test_associativity_random(self, e339, p339):
        rng = random.Random(50)
        multiples = {m: th.multiply(e339, p339, m) for m in range(-6, 7)}
        for _ in range(50):
            a, b, c = (multiples[rng.randint(-6, 6)] for _ in range(3))
            left = th.add(e339, th.add(e339, a, b), c)
            right = th.add(e339, a, th.add(e339, b, c))
            assert left == right

    def test_multiply_matches_repeated_add(self, e339, p339):
        acc = th.CurvePoint.infinity()
        for m in range(1, 8):
            acc = th.add(e339, acc, p339)
            assert acc == th.multiply(e339, p339, m)


class TestNaiveHeight:
    def test_integral_point(self, p339):
        ctx = th.context(128)
        assert abs(th.naive_height(p339) - ctx.log(5085)) < ctx.mpf(2) ** -100

    def test_denominator_dominates(self):
        pt = th.CurvePoint.from_parts(3, 1, 2)  # x = 3/4
        ctx = th.context(128)
        assert abs(th.naive_height(pt) - ctx.log(4)) < ctx.mpf(2) ** -100

    def test_infinity_is_zero(self):
        assert th.naive_height(th.CurvePoint.infinity()) == 0


class TestShiftModel:
    def test_family_shift_coefficients(self):
        for d in (1, 339):
            model = th.make_short_model(2 * d, 163 * d * d, 2205 * d**3)
            shifted, _ = th.shift_model(model, -30 * d)
            assert shifted.coefficients() == [0, -88 * d, 0, 2743 * d * d, -27885 * d**3]

    def test_zero_shift_is_identity(self, e163):
        shifted, point_map = th.shift_model(e163, 0)
        assert shifted == e163

    def test_disc_invariant(self, e163):
        shifted, _ = th.shift_model(e163, 7)
        assert shifted.disc == e163.disc

    def test_point_map_lands_on_curve(self, e339, p339):
        shifted, point_map = th.shift_model(e339, -30 * 339)
        image = point_map(p339)
        assert th.on_curve(shifted, image)
        assert image.x == p339.x + 30 * 339


class TestDivisionPolynomials:
    def test_short_form_psi2(self, e339, p339):
        vals = th.division_poly_values(e339, p339)
        assert vals.psi2 == 2 * p339.y

    def test_two_torsion_vanishing(self):
        model = th.make_short_model(1, 1, 0)
        vals = th.division_poly_values(model, th.CurvePoint.from_xy(0, 0))
        assert vals.psi2 == 0 and vals.psi2a == 0

    def test_square_identity_at_family_point(self, e339, p339):
        vals = th.division_poly_values(e339, p339)
        assert vals.psi2**2 == vals.psi2a

    def test_square_identity_random_points(self, e339, p339):
        for m in range(1, 6):
            pt = th.multiply(e339, p339, m)
            vals = th.division_poly_values(e339, pt)
            assert vals.psi2**2 == vals.psi2a

    def test_infinity_rejected(self, e339):
        with pytest.raises(PointError):
            th.division_poly_values(e339, th.CurvePoint.infinity())


def _symbolic_psi_polys(a2, a4, a6):
    b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
    b8 = 4 * a2 * a6 - a4 * a4
    psi2a = P([b6, 2 * b4, b2, 4])
    psi3 = P([b8, 3 * b6, 3 * b4, b2, 3])
    return psi2a, psi3


class TestDiscriminantIdentity:
    def test_zero_residual_at_family_point(self, e339, p339):
        check = th.discriminant_identity_check(e339, p339)
        assert check.residual == 0

    def test_coefficient_wise_symbolic(self):
        # -16 k psi3 + 4 l psi2a + disc = 0 as polynomials in x
        rng = random.Random(17)
        for _ in range(40):
            a2, a4, a6 = (rng.randint(-30, 30) for _ in range(3))
            try:
                model = th.make_short_model(a2, a4, a6)
            except CurveError:
                continue
            psi2a, psi3 = _symbolic_psi_polys(a2, a4, a6)
            k = P([4 * a4 - a2 * a2, 2 * a2, 3])
            l = P([27 * a6 - 2 * a2 * a4, 21 * a4 - 4 * a2 * a2, 9 * a2, 9])
            combo = -16 * (k * psi3) + 4 * (l * psi2a) + P([model.disc])
            assert combo.is_zero

    def test_hundred_family_curve_points(self):
        rng = random.Random(41)
        checked = 0
        while checked < 100:
            A, B = rng.randint(-10, 10), rng.randint(-10, 10)
            t = rng.randint(-8, 8)
            try:
                fam = th.cubic_seed_family(A, B)
                inst = th.instantiate(fam, t)
            except HypothesisError:
                continue
            check = th.discriminant_identity_check(inst.curve, inst.point)
            assert check.residual == 0
            checked += 1

    def test_z_relation(self, e339, p339):
        # z(Q) x(Q)^4 = psi2(Q)^2 x(2Q) exactly
        for m in range(1, 6):
            pt = th.multiply(e339, p339, m)
            doubled = th.double(e339, pt)
            if doubled.is_infinity:
                continue
            x = pt.x
            z = (
                1
                - Fraction(e339.b4) / x**2
                - Fraction(2 * e339.b6) / x**3
                - Fraction(e339.b8) / x**4
            )
            vals = th.division_poly_values(e339, pt)
            assert z * x**4 == vals.psi2**2 * doubled.x
