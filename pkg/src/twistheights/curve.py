"""Weierstrass models, quadratic twists, exact point arithmetic, division
polynomials, and the discriminant identity that drives the non-archimedean
case analysis.

Points are kept in the canonical shape (alpha/delta^2, beta/delta^3) with
delta > 0 and gcd(alpha, delta) = gcd(beta, delta) = 1; every group
operation re-canonicalizes eagerly.  The chord-tangent law is implemented
for short-form models (a1 = a3 = 0) only, which is the entire twisting
setting; general models still expose quantities and division polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CurveError, PointError, HypothesisError
from .exactmath import (
    DEFAULT_PRECISION,
    SquareFreeVerdict,
    context,
    square_free_test,
)


@dataclass(frozen=True)
class WeierstrassModel:
    """Integral Weierstrass equation with its derived quantities."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int

    @property
    def is_short(self) -> bool:
        return self.a1 == 0 and self.a3 == 0

    def coefficients(self) -> list[int]:
        return [self.a1, self.a2, self.a3, self.a4, self.a6]

    def rhs(self, x: Fraction) -> Fraction:
        """x^3 + a2 x^2 + a4 x + a6 (the full RHS for short-form models)."""
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def __str__(self) -> str:
        return f"[{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}]"


def make_model(a1: int, a2: int, a3: int, a4: int, a6: int) -> WeierstrassModel:
    """Build a model and its b/c/disc quantities; rejects singular input."""
    a1, a2, a3, a4, a6 = (int(v) for v in (a1, a2, a3, a4, a6))
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        raise CurveError(f"singular curve [{a1},{a2},{a3},{a4},{a6}] (disc = 0)")
    assert 1728 * disc == c4**3 - c6 * c6
    return WeierstrassModel(a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc)


def make_short_model(a2: int, a4: int, a6: int) -> WeierstrassModel:
    return make_model(0, a2, 0, a4, a6)


def twist(
    model: WeierstrassModel,
    d: int,
    verdict: SquareFreeVerdict | None = None,
    trial_bound: int | None = None,
) -> WeierstrassModel:
    """Quadratic twist by square-free d: y^2 = x^3 + a2 d x^2 + a4 d^2 x + a6 d^3.

    A precomputed square-free verdict may be passed to skip the trial
    division; an unknown verdict is allowed (callers surface the flag), a
    failed one is not.
    """
    if not model.is_short:
        raise CurveError("twisting requires a short-form model (a1 = a3 = 0)")
    if d == 0:
        raise HypothesisError("twisting integer must be nonzero")
    if verdict is None:
        kwargs = {} if trial_bound is None else {"trial_bound": trial_bound}
        verdict = square_free_test(d, **kwargs)
    if verdict.status == "not_square_free":
        raise HypothesisError(
            f"twisting integer {d} is not square-free (p = {verdict.witness})"
        )
    return make_short_model(model.a2 * d, model.a4 * d * d, model.a6 * d**3)


def shift_model(model: WeierstrassModel, r: int):
    """Substitute x -> x + r; returns (model', map) with disc unchanged.

    The induced bijection sends (x0, y0) on the input model to
    (x0 - r, y0) on the returned one; ``map`` applies it to a CurvePoint.
    """
    r = int(r)
    a1, a2, a3, a4, a6 = model.a1, model.a2, model.a3, model.a4, model.a6
    shifted = make_model(
        a1,
        a2 + 3 * r,
        a3 + a1 * r,
        a4 + 2 * a2 * r + 3 * r * r,
        a6 + a4 * r + a2 * r * r + r**3,
    )
    assert shifted.disc == model.disc

    def point_map(pt: "CurvePoint") -> "CurvePoint":
        if pt.is_infinity:
            return pt
        return CurvePoint.from_xy(pt.x - r, pt.y)

    return shifted, point_map


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (alpha/delta^2, beta/delta^3) or the point at infinity.

    Infinity is represented by alpha = beta = 0, delta = 0.
    """

    alpha: int
    beta: int
    delta: int

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(0, 0, 0)

    @classmethod
    def from_parts(cls, alpha: int, beta: int, delta: int) -> "CurvePoint":
        if delta <= 0:
            raise PointError(f"delta must be positive, got {delta}")
        if math.gcd(alpha, delta) != 1 or math.gcd(beta, delta) != 1:
            raise PointError("point parts not in lowest terms")
        return cls(int(alpha), int(beta), int(delta))

    @classmethod
    def from_xy(cls, x, y) -> "CurvePoint":
        """Canonicalize rational (x, y); denominators must be (d^2, d^3)."""
        x, y = Fraction(x), Fraction(y)
        dx = x.denominator
        delta = math.isqrt(dx)
        if delta * delta != dx:
            raise PointError(f"x-denominator {dx} is not a square")
        if y.denominator != delta**3:
            raise PointError("y-denominator incompatible with x-denominator")
        return cls(x.numerator, y.numerator, delta)

    @property
    def is_infinity(self) -> bool:
        return self.delta == 0

    @property
    def x(self) -> Fraction:
        if self.is_infinity:
            raise PointError("point at infinity has no affine coordinates")
        return Fraction(self.alpha, self.delta**2)

    @property
    def y(self) -> Fraction:
        if self.is_infinity:
            raise PointError("point at infinity has no affine coordinates")
        return Fraction(self.beta, self.delta**3)

    @property
    def is_two_torsion(self) -> bool:
        """Exact 2-torsion test: affine with y = 0."""
        return not self.is_infinity and self.beta == 0

    def serialize(self):
        if self.is_infinity:
            return "O"
        return [self.alpha, self.beta, self.delta]

    @classmethod
    def deserialize(cls, data) -> "CurvePoint":
        if data == "O":
            return cls.infinity()
        alpha, beta, delta = data
        return cls.from_parts(int(alpha), int(beta), int(delta))

    def __str__(self) -> str:
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


def on_curve(model: WeierstrassModel, pt: CurvePoint) -> bool:
    """Exact check of the (general) Weierstrass equation."""
    if pt.is_infinity:
        return True
    x, y = pt.x, pt.y
    lhs = y * y + model.a1 * x * y + model.a3 * y
    rhs = ((x + model.a2) * x + model.a4) * x + model.a6
    return lhs == rhs


def _require_on_curve(model: WeierstrassModel, pt: CurvePoint) -> None:
    if not on_curve(model, pt):
        raise PointError(f"point {pt} is not on curve {model}")


def _require_short(model: WeierstrassModel) -> None:
    if not model.is_short:
        raise CurveError("group law implemented for short-form models only")


def negate(model: WeierstrassModel, pt: CurvePoint) -> CurvePoint:
    _require_short(model)
    if pt.is_infinity:
        return pt
    return CurvePoint(pt.alpha, -pt.beta, pt.delta)


def add(
    model: WeierstrassModel,
    p: CurvePoint,
    q: CurvePoint,
    *,
    check: bool = True,
) -> CurvePoint:
    """Chord-tangent addition with eager canonicalization."""
    _require_short(model)
    if check:
        _require_on_curve(model, p)
        _require_on_curve(model, q)
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    x1, y1, x2, y2 = p.x, p.y, q.x, q.y
    if x1 == x2:
        if y1 == -y2:
            return CurvePoint.infinity()
        # tangent; y1 == y2 != 0 here
        slope = (3 * x1 * x1 + 2 * model.a2 * x1 + model.a4) / (2 * y1)
    else:
        slope = (y2 - y1) / (x2 - x1)
    x3 = slope * slope - model.a2 - x1 - x2
    y3 = slope * (x1 - x3) - y1
    return CurvePoint.from_xy(x3, y3)


def double(model: WeierstrassModel, pt: CurvePoint, *, check: bool = True) -> CurvePoint:
    _require_short(model)
    if check:
        _require_on_curve(model, pt)
    if pt.is_infinity or pt.is_two_torsion:
        return CurvePoint.infinity()
    return add(model, pt, pt, check=False)


def multiply(model: WeierstrassModel, pt: CurvePoint, n: int) -> CurvePoint:
    """n*pt by double-and-add (exact rational arithmetic)."""
    _require_on_curve(model, pt)
    if n < 0:
        return multiply(model, negate(model, pt), -n)
    acc = CurvePoint.infinity()
    base = pt
    while n:
        if n & 1:
            acc = add(model, acc, base, check=False)
        base = double(model, base, check=False)
        n >>= 1
    return acc


def naive_height(pt: CurvePoint, prec: int = DEFAULT_PRECISION):
    """max(log|n|, log|d|) of x = n/d in lowest terms; 0 at infinity."""
    ctx = context(prec)
    if pt.is_infinity:
        return ctx.mpf(0)
    num = max(abs(pt.alpha), 1)
    den = pt.delta**2
    return ctx.log(ctx.mpf(max(num, den)))


# ---------------------------------------------------------------------------
# division polynomials and the discriminant identity


@dataclass(frozen=True)
class DivisionPolyValues:
    """psi0, psi2, psi2a, psi3 evaluated exactly at an affine point."""

    psi0: Fraction
    psi2: Fraction
    psi2a: Fraction
    psi3: Fraction


def division_poly_values(model: WeierstrassModel, pt: CurvePoint) -> DivisionPolyValues:
    """Exact values of the division polynomials at an affine point.

    psi0 = 3x^2 + 2 a2 x + a4 - a1 y          (tangent-direction numerator)
    psi2 = 2y + a1 x + a3
    psi2a = 4x^3 + b2 x^2 + 2 b4 x + b6       (= psi2^2 on the curve)
    psi3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8
    """
    if pt.is_infinity:
        raise PointError("division polynomials need an affine point")
    x, y = pt.x, pt.y
    psi0 = 3 * x * x + 2 * model.a2 * x + model.a4 - model.a1 * y
    psi2 = 2 * y + model.a1 * x + model.a3
    psi2a = ((4 * x + model.b2) * x + 2 * model.b4) * x + model.b6
    psi3 = (((3 * x + model.b2) * x + 3 * model.b4) * x + 3 * model.b6) * x + model.b8
    return DivisionPolyValues(psi0, psi2, psi2a, psi3)


@dataclass(frozen=True)
class DiscriminantIdentity:
    """Cofactors k, l with -16 k psi3 + 4 l psi2a + disc = 0, and the residual."""

    k: Fraction
    l: Fraction
    residual: Fraction


def discriminant_identity_check(model: WeierstrassModel, pt: CurvePoint) -> DiscriminantIdentity:
    """Evaluate the cofactor identity tying psi2a, psi3 to the discriminant.

    For a short-form model with coefficients (A2, A4, A6):
        k = 3x^2 + 2 A2 x + (4 A4 - A2^2)
        l = 9x^3 + 9 A2 x^2 + (21 A4 - 4 A2^2) x + (27 A6 - 2 A2 A4)
    and -16 k psi3 + 4 l psi2a = -disc identically; the returned residual
    (-16 k psi3 + 4 l psi2a + disc) must be exactly zero.
    """
    if not model.is_short:
        raise CurveError("discriminant identity stated for short-form models")
    if pt.is_infinity:
        raise PointError("identity check needs an affine point")
    x = pt.x
    a2, a4, a6 = model.a2, model.a4, model.a6
    k = 3 * x * x + 2 * a2 * x + (4 * a4 - a2 * a2)
    l = ((9 * x + 9 * a2) * x + (21 * a4 - 4 * a2 * a2)) * x + (27 * a6 - 2 * a2 * a4)
    vals = division_poly_values(model, pt)
    residual = -16 * k * vals.psi3 + 4 * l * vals.psi2a + model.disc
    return DiscriminantIdentity(k, l, residual)
