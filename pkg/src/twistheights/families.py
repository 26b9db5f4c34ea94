"""Construction of quadratic-twist families carrying an explicit rational
point, from a monic cubic f and an antiderivative-style F with F' = m f.

The defining identity is D(t) f(t)^2 = f1(F(t)) with f1 the characteristic
polynomial of F(alpha) for a root alpha of f; the twist of y^2 = f1(x) by
D(t) then carries the point (D(t) F(t), D(t)^2 f(t)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import CurvePoint, WeierstrassModel, make_short_model, on_curve, twist
from .errors import HypothesisError
from .exactmath import (
    DEFAULT_TRIAL_BOUND,
    IntPolynomial,
    SquareFreeVerdict,
    factorize,
    poly_discriminant,
    square_free_test,
)


@dataclass(frozen=True)
class TwistFamily:
    """Polynomials (f, F, f1, D) with F' = m f, D f^2 = f1(F) exactly."""

    f: IntPolynomial
    F: IntPolynomial
    f1: IntPolynomial
    D: IntPolynomial
    m: int

    def point_x_poly(self) -> IntPolynomial:
        """x-coordinate of the explicit point on the integral twist model."""
        return self.D * self.F

    def point_y_poly(self) -> IntPolynomial:
        """y-coordinate of the explicit point on the integral twist model."""
        return self.D * self.D * self.f

    def base_curve(self) -> WeierstrassModel:
        """The untwisted curve y^2 = f1(x)."""
        c0, c1, c2, _ = (self.f1[i] for i in range(4))
        return make_short_model(c2, c1, c0)

    def twist_bound_applicable(self) -> bool:
        """Whether the uniform twist lower bound applies to this family:
        the discriminant 16 disc(f1) of y^2 = f1(x) must be 6th-power-free.

        (For f = t^3 + At + B seeds, B odd with gcd(A, B) = 1 and disc(f)
        square-free is a sufficient shortcut; this checks the real thing.)
        """
        disc = self.base_curve().disc
        return all(e < 6 for e in factorize(disc).values())

    def serialize(self) -> dict:
        return {
            "f": list(self.f.coeffs),
            "F": list(self.F.coeffs),
            "f1": list(self.f1.coeffs),
            "D": list(self.D.coeffs),
            "m": self.m,
        }

    @classmethod
    def deserialize(cls, data: dict) -> "TwistFamily":
        return construct_family(IntPolynomial(data["f"]), IntPolynomial(data["F"]))


def _is_irreducible_monic_cubic(f: IntPolynomial) -> bool:
    """A monic integer cubic is reducible over Q iff it has an integer root
    dividing its constant term."""
    c0 = f[0]
    if c0 == 0:
        return False
    divisors = {1}
    for p, e in factorize(c0).items():
        divisors = {d * p**k for d in divisors for k in range(e + 1)}
    return all(f(d) != 0 and f(-d) != 0 for d in divisors)


def _validate_family(f: IntPolynomial, F: IntPolynomial, f1: IntPolynomial, m: int) -> TwistFamily:
    if poly_discriminant(f1) == 0:
        raise HypothesisError("degenerate family: disc(f1) = 0")
    D = f1.compose(F).exact_divide(f * f)
    family = TwistFamily(f, F, f1, D, m)
    if f1.compose(F) != D * f * f:
        raise HypothesisError("family identity D f^2 = f1(F) failed")
    return family


def construct_family(f: IntPolynomial, F: IntPolynomial) -> TwistFamily:
    """Family from (f, F): f monic irreducible cubic, F' an integer multiple
    of f.  f1 is the characteristic polynomial of multiplication by F(alpha)
    on Z[alpha]/(f), computed from traces of its matrix."""
    if f.degree != 3 or f.leading != 1:
        raise HypothesisError("f must be a monic cubic")
    if poly_discriminant(f) == 0:
        raise HypothesisError("f must be separable (disc != 0)")
    if not _is_irreducible_monic_cubic(f):
        raise HypothesisError("f must be irreducible over Q (it has a rational root)")
    dF = F.derivative()
    try:
        quotient = dF.exact_divide(f)
    except ValueError as exc:
        raise HypothesisError("F' must be an integer multiple of f") from exc
    if quotient.degree > 0:
        raise HypothesisError("F' must be an integer multiple of f")
    m = quotient[0]

    # multiplication-by-F(alpha) matrix on basis 1, alpha, alpha^2
    g = _reduce_mod_cubic(F, f)
    cols = [g]
    for _ in range(2):
        shifted = IntPolynomial([0] + list(cols[-1].coeffs))
        cols.append(_reduce_mod_cubic(shifted, f))
    M = [[cols[j][i] for j in range(3)] for i in range(3)]
    tr = M[0][0] + M[1][1] + M[2][2]
    minors2 = (
        M[0][0] * M[1][1] - M[0][1] * M[1][0]
        + M[0][0] * M[2][2] - M[0][2] * M[2][0]
        + M[1][1] * M[2][2] - M[1][2] * M[2][1]
    )
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    f1 = IntPolynomial([-det, minors2, -tr, 1])
    return _validate_family(f, F, f1, m)


def _reduce_mod_cubic(poly: IntPolynomial, f: IntPolynomial) -> IntPolynomial:
    """poly mod f for monic f (exact integer reduction)."""
    rem = list(poly.coeffs)
    fc = f.coeffs
    while len(rem) >= len(fc):
        c = rem[-1]
        k = len(rem) - len(fc)
        for i, d in enumerate(fc):
            rem[i + k] -= c * d
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return IntPolynomial(rem)


def cubic_seed_family(A: int, B: int) -> TwistFamily:
    """Closed form for the seed f = t^3 + At + B, F = t^4 + 2At^2 + 4Bt:

        f1 = t^3 + 2A^2 t^2 + A(A^3 + 18B^2) t + B^2 (2A^3 + 27B^2)
        D  = t^6 + 4A t^4 + 10B t^3 + 5A^2 t^2 + 18AB t + (2A^3 + 27B^2)

    with disc(f1) = B^2 disc(f)^3.
    """
    A, B = int(A), int(B)
    f = IntPolynomial([B, A, 0, 1])
    if poly_discriminant(f) == 0:
        raise HypothesisError("degenerate seed: disc(t^3 + At + B) = 0")
    if not _is_irreducible_monic_cubic(f):
        raise HypothesisError("seed cubic must be irreducible over Q")
    F = IntPolynomial([0, 4 * B, 2 * A, 0, 1])
    f1 = IntPolynomial(
        [B * B * (2 * A**3 + 27 * B * B), A * (A**3 + 18 * B * B), 2 * A * A, 1]
    )
    return _validate_family(f, F, f1, 4)


def reference_family() -> TwistFamily:
    """The worked family over f = t^3 + t + 3 (seed A = 1, B = 3)."""
    return cubic_seed_family(1, 3)


@dataclass(frozen=True)
class FamilyInstance:
    """One value of t: the twist curve and its explicit point."""

    t: int
    d_value: int
    square_free: SquareFreeVerdict
    curve: WeierstrassModel
    point: CurvePoint

    def serialize(self) -> dict:
        return {
            "t": self.t,
            "d": self.d_value,
            "square_free": self.square_free.status,
            "square_free_witness": self.square_free.witness,
            "curve": self.curve.coefficients(),
            "point": self.point.serialize(),
        }


def instantiate(
    family: TwistFamily,
    t: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
) -> FamilyInstance:
    """Twist curve and explicit point at an integer t (D(t) != 0 required).

    The point lies on the curve by the family identity; the check is still
    performed exactly.  A not-square-free D(t) is allowed here (the verdict
    travels with the instance); consumers that need minimality reject it.
    """
    d = family.D(int(t))
    if d == 0:
        raise HypothesisError(f"D({t}) = 0")
    verdict = square_free_test(d, trial_bound)
    base = family.base_curve()
    if verdict.status == "not_square_free":
        curve = make_short_model(base.a2 * d, base.a4 * d * d, base.a6 * d**3)
    else:
        curve = twist(base, d, verdict=verdict)
    point = CurvePoint.from_xy(family.point_x_poly()(int(t)), family.point_y_poly()(int(t)))
    if not on_curve(curve, point):
        raise HypothesisError(f"family point fails the curve equation at t = {t}")
    return FamilyInstance(int(t), d, verdict, curve, point)


@dataclass(frozen=True)
class ScanRecord:
    t: int
    status: str  # certified / skipped / failed
    reason: str | None
    instance: FamilyInstance | None
    certificate: object | None

    def serialize(self) -> dict:
        return {
            "t": self.t,
            "status": self.status,
            "reason": self.reason,
            "instance": self.instance.serialize() if self.instance else None,
            "certificate": self.certificate.serialize() if self.certificate else None,
        }


def scan(
    family: TwistFamily,
    t_min: int,
    t_max: int,
    precision: int = 128,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    strict: bool = False,
) -> list[ScanRecord]:
    """Primitivity scan over integer t in [t_min, t_max], ordered by t.

    Instances with non-square-free D(t) are skipped with a reason; unknown
    verdicts are skipped only in strict mode.  Per-instance failures are
    recorded, never raised.
    """
    from .bounds import primitivity_check

    if t_min > t_max:
        raise ValueError("t_min must not exceed t_max")
    records = []
    for t in range(t_min, t_max + 1):
        try:
            if family.D(t) == 0:
                records.append(ScanRecord(t, "skipped", "D(t) = 0", None, None))
                continue
            inst = instantiate(family, t, trial_bound)
            if inst.square_free.status == "not_square_free":
                records.append(
                    ScanRecord(
                        t,
                        "skipped",
                        f"D({t}) = {inst.d_value} not square-free "
                        f"(p = {inst.square_free.witness})",
                        inst,
                        None,
                    )
                )
                continue
            if strict and inst.square_free.status == "unknown":
                records.append(
                    ScanRecord(
                        t,
                        "skipped",
                        f"square-freeness of D({t}) unresolved at trial bound {trial_bound}",
                        inst,
                        None,
                    )
                )
                continue
            cert = primitivity_check(
                family.base_curve(),
                inst.d_value,
                inst.point,
                precision=precision,
                trial_bound=trial_bound,
                square_free=inst.square_free,
            )
            records.append(ScanRecord(t, "certified", None, inst, cert))
        except Exception as exc:  # per-instance failures are data, not errors
            records.append(ScanRecord(t, "failed", str(exc), None, None))
    return records
