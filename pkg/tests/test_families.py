import random

import pytest

import twistheights as th
from twistheights import IntPolynomial as P
from twistheights.errors import HypothesisError


class TestConstructFamily:
    def test_worked_example(self):
        fam = th.construct_family(P([3, 1, 0, 1]), P([0, 12, 2, 0, 1]))
        assert fam.f1 == P([2205, 163, 2, 1])
        assert fam.D == P([245, 54, 5, 30, 4, 0, 1])
        assert fam.m == 4

    def test_defining_identity_exact(self):
        fam = th.reference_family()
        assert fam.f1.compose(fam.F) == fam.D * fam.f * fam.f

    def test_bad_antiderivative_rejected(self):
        with pytest.raises(HypothesisError, match="multiple of f"):
            th.construct_family(P([3, 1, 0, 1]), P([0, 0, 1]))  # F = t^2

    def test_reducible_cubic_rejected(self):
        with pytest.raises(HypothesisError, match="irreducible|rational root"):
            # t^3 - t = t(t-1)(t+1); F' = 4t^3 - 4t = 4f
            th.construct_family(P([0, -1, 0, 1]), P([0, 0, -2, 0, 1]))

    def test_non_monic_rejected(self):
        with pytest.raises(HypothesisError, match="monic"):
            th.construct_family(P([3, 1, 0, 2]), P([0, 12, 2, 0, 1]))

    def test_agrees_with_seed_closed_form(self):
        rng = random.Random(33)
        checked = 0
        for a in range(-10, 11):
            for b in range(-10, 11):
                try:
                    seed = th.cubic_seed_family(a, b)
                except HypothesisError:
                    continue
                built = th.construct_family(seed.f, seed.F)
                assert built == seed
                checked += 1
        assert checked > 200


class TestSeedFamily:
    def test_closed_form_coefficients(self):
        fam = th.cubic_seed_family(1, 3)
        # f1 coefficients: 1*(1 + 18*9) = 163, 9*(2 + 243) = 2205
        assert fam.f1 == P([2205, 163, 2, 1])
        assert fam.D[0] == 245  # 2A^3 + 27B^2

    def test_disc_identity_exact(self):
        for a in range(-10, 11):
            for b in range(-10, 11):
                try:
                    fam = th.cubic_seed_family(a, b)
                except HypothesisError:
                    continue
                disc_f = th.poly_discriminant(fam.f)
                assert th.poly_discriminant(fam.f1) == b * b * disc_f**3

    def test_base_curve_disc_is_16_disc_f1(self):
        for a, b in [(1, 3), (2, 1), (-1, 1), (5, 2)]:
            try:
                fam = th.cubic_seed_family(a, b)
            except HypothesisError:
                continue
            assert fam.base_curve().disc == 16 * th.poly_discriminant(fam.f1)
            assert fam.base_curve().disc == 16 * b * b * (-4 * a**3 - 27 * b * b) ** 3

    def test_degenerate_disc_rejected(self):
        # disc(t^3 + At + B) = 0 at (A, B) = (-3, 2)
        with pytest.raises(HypothesisError):
            th.cubic_seed_family(-3, 2)

    def test_applicability_predicate(self):
        assert th.reference_family().twist_bound_applicable()
        # seed (0, 2): f = t^3 + 2, disc(f1) = 4*(-108)^3, disc 16*that has 2^10
        fam = th.cubic_seed_family(0, 2)
        assert not fam.twist_bound_applicable()


class TestInstantiate:
    def test_worked_instance(self, family, inst1):
        assert inst1.d_value == 339
        assert (inst1.point.x, inst1.point.y) == (5085, 574605)
        assert inst1.square_free.status == "square_free"
        # on-curve certificate: f1(15) = 8475 = 339 * 25
        assert family.f1(15) == 8475 == 339 * 5**2

    def test_not_square_free_instance_carries_verdict(self, family):
        inst = th.instantiate(family, 0)
        assert inst.d_value == 245
        assert inst.square_free.status == "not_square_free"
        assert inst.square_free.witness == 7

    def test_point_on_curve_exactly(self, family):
        for t in (-3, 2, 5, 17):
            inst = th.instantiate(family, t)
            assert th.on_curve(inst.curve, inst.point)

    def test_point_never_two_torsion(self, family):
        # y(t) = D(t)^2 f(t) vanishes only at roots of f, which are irrational
        for t in range(-20, 21):
            inst = th.instantiate(family, t)
            assert not inst.point.is_two_torsion

    def test_d_positive_on_reference_family(self, family):
        # sampled integers plus a bracketing grid around the real minimum
        for t in range(-50, 51):
            assert family.D(t) > 0
        ctx = th.context(128)
        values = [family.D(ctx.mpf(k) / 8) for k in range(-400, 401)]
        assert min(values) > 0

    def test_small_d_instances(self):
        # valid families have irreducible f1, so D(t) never vanishes at
        # integers; small values still instantiate fine
        fam = th.cubic_seed_family(0, 2)  # f = t^3 + 2, D = t^6 + 20t^3 + 108
        for t in (-2, -1, 0, 1):
            inst = th.instantiate(fam, t)
            assert inst.d_value == fam.D(t) != 0


class TestScan:
    def test_skip_non_square_free(self, family):
        records = th.scan(family, 0, 0)
        assert len(records) == 1
        assert records[0].status == "skipped"
        assert "not square-free" in records[0].reason

    def test_inconclusive_at_t1(self, family):
        records = th.scan(family, 1, 1)
        assert records[0].status == "certified"
        assert records[0].certificate.verdict == "inconclusive"

    def test_deterministic_order_and_reasons(self, family):
        records = th.scan(family, -2, 2)
        assert [r.t for r in records] == [-2, -1, 0, 1, 2]
        by_t = {r.t: r for r in records}
        assert by_t[0].status == "skipped"
        assert by_t[-1].status == "skipped"  # D(-1) = 171 = 9*19
        assert by_t[2].status == "certified"

    def test_certified_primitive_range(self, family):
        records = th.scan(family, 2216, 2218)
        for record in records:
            if record.status == "certified":
                assert record.certificate.verdict == "primitive"
        assert any(r.status == "certified" for r in records)

    def test_serialization(self, family):
        records = th.scan(family, 1, 1)
        data = records[0].serialize()
        assert data["t"] == 1
        assert data["certificate"]["verdict"] == "inconclusive"

    def test_strict_mode_skips_unknown(self, family):
        # D(3) = 2315 = 5 * 463 is unresolvable at trial bound 2
        strict = th.scan(family, 3, 3, trial_bound=2, strict=True)
        assert strict[0].status == "skipped"
        assert "unresolved" in strict[0].reason
        relaxed = th.scan(family, 3, 3, trial_bound=2, strict=False)
        assert relaxed[0].status == "certified"
        assert "assumed" in relaxed[0].certificate.notes
