"""Explicit lower bound on twist heights, the family-specific upper bound,
threshold scanning, and primitivity certificates.

The lower bound evaluated here: for square-free D and any rational point P
on the twist that is not 2-torsion,

    hhat(P) > (1/4) log|D| + (1/16) log((1-|q|)^8/|q|) + (1/4) log|omega/2pi|
              - (7/16) sum_{p | disc, p != 2} log p - (5/12) log 2,

with q and the case-dependent omega computed from the periods of the
untwisted curve.  The D-independent part is the report's ``constant``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curve import (
    CurvePoint,
    WeierstrassModel,
    double,
    naive_height,
    on_curve,
    twist,
)
from .errors import CurveError, HypothesisError, PointError, PrecisionError
from .exactmath import (
    DEFAULT_PRECISION,
    DEFAULT_TRIAL_BOUND,
    SquareFreeVerdict,
    context,
    error_estimate,
    factorize,
    square_free_test,
)
from .families import TwistFamily, reference_family
from .localheights import (
    canonical_height,
    height_difference_bound,
    omega_for_twist,
    periods,
)


def format_value(value, prec: int) -> str:
    """Deterministic decimal rendering with precision-derived digit count."""
    digits = max(int((prec - 16) * 0.30103), 8)
    ctx = context(max(prec, 64))
    return ctx.nstr(value, digits)


def _sign_of(d) -> int:
    if isinstance(d, str):
        if d in ("+", "pos", "positive"):
            return 1
        if d in ("-", "neg", "negative"):
            return -1
        raise ValueError(f"unrecognized sign {d!r}")
    if d == 0:
        raise HypothesisError("twisting integer must be nonzero")
    return 1 if d > 0 else -1


@dataclass(frozen=True)
class LowerBoundReport:
    """D-independent constant of the twist lower bound, with its inputs."""

    sign_d: int
    constant: object
    q_abs: object
    omega: object
    disc_factors: dict
    prime_sum_term: object
    two_term: object
    prec: int
    d_value: int | None = None
    square_free: SquareFreeVerdict | None = None

    @property
    def error(self):
        return error_estimate(context(self.prec))

    def bound_for(self, d: int):
        """(1/4) log|d| + constant; d must match the report's sign."""
        if _sign_of(d) != self.sign_d:
            raise HypothesisError("sign of d does not match this report")
        ctx = context(self.prec)
        return ctx.log(abs(ctx.mpf(d))) / 4 + self.constant

    def serialize(self) -> dict:
        return {
            "sign_d": self.sign_d,
            "constant": format_value(self.constant, self.prec),
            "q_abs": format_value(self.q_abs, self.prec),
            "omega": format_value(self.omega, self.prec),
            "disc_factors": {str(p): e for p, e in self.disc_factors.items()},
            "prime_sum_term": format_value(self.prime_sum_term, self.prec),
            "two_term": format_value(self.two_term, self.prec),
            "precision": self.prec,
            "error": format_value(self.error, self.prec),
            "d": self.d_value,
            "square_free": self.square_free.status if self.square_free else None,
            "bound": format_value(self.bound_for(self.d_value), self.prec)
            if self.d_value is not None
            else None,
        }


def validate_sixth_power_free(model: WeierstrassModel) -> dict[int, int]:
    factors = factorize(model.disc)
    offenders = [p for p, e in factors.items() if e >= 6]
    if offenders:
        raise HypothesisError(
            f"discriminant is not 6th-power-free (p = {offenders[0]})"
        )
    return factors


def lower_bound(
    model: WeierstrassModel,
    d,
    prec: int = DEFAULT_PRECISION,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    strict: bool = False,
) -> LowerBoundReport:
    """Lower-bound report for twists of a short-form, 6th-power-free model.

    ``d`` may be an integer (validated square-free) or a bare sign '+'/'-'
    for the constant alone.  The certificate applies to every non-2-torsion
    rational point on the corresponding twist.
    """
    if not model.is_short:
        raise CurveError("lower bound requires a short-form model")
    disc_factors = validate_sixth_power_free(model)
    sign_d = _sign_of(d)
    d_value = d if isinstance(d, int) else None
    verdict = None
    if d_value is not None:
        verdict = square_free_test(d_value, trial_bound)
        if verdict.status == "not_square_free":
            raise HypothesisError(
                f"twisting integer {d_value} is not square-free (p = {verdict.witness})"
            )
        if strict and verdict.status == "unknown":
            raise HypothesisError(
                f"square-freeness of {d_value} unresolved at trial bound {trial_bound}"
            )
    ctx = context(prec)
    pd = periods(model, prec)
    disc_sign = 1 if model.disc > 0 else -1
    omega = omega_for_twist(pd, sign_d, disc_sign)
    q_abs = abs(pd.q)
    prime_sum = ctx.mpf(0)
    for p in disc_factors:
        if p != 2:
            prime_sum += ctx.log(ctx.mpf(p))
    prime_sum_term = -ctx.mpf(7) / 16 * prime_sum
    two_term = -ctx.mpf(5) / 12 * ctx.log(ctx.mpf(2))
    constant = (
        ctx.log((1 - q_abs) ** 8 / q_abs) / 16
        + ctx.log(omega / (2 * ctx.pi)) / 4
        + prime_sum_term
        + two_term
    )
    return LowerBoundReport(
        sign_d,
        constant,
        q_abs,
        omega,
        disc_factors,
        prime_sum_term,
        two_term,
        prec,
        d_value,
        verdict,
    )


# ---------------------------------------------------------------------------
# primitivity


@dataclass(frozen=True)
class PrimitivityCertificate:
    """Verdict primitive/torsion/inconclusive with everything needed to replay."""

    verdict: str
    hhat: object | None
    lower_bound_value: object | None
    m_max: int | None
    notes: str
    base_curve: list
    d_value: int
    point: object
    prec: int
    trial_bound: int
    report: LowerBoundReport | None = None

    def serialize(self) -> dict:
        return {
            "verdict": self.verdict,
            "hhat": format_value(self.hhat, self.prec) if self.hhat is not None else None,
            "lower_bound": format_value(self.lower_bound_value, self.prec)
            if self.lower_bound_value is not None
            else None,
            "m_max": self.m_max,
            "notes": self.notes,
            "curve": self.base_curve,
            "d": self.d_value,
            "point": self.point,
            "precision": self.prec,
            "trial_bound": self.trial_bound,
            "constant": format_value(self.report.constant, self.prec) if self.report else None,
        }


def _is_torsion(model: WeierstrassModel, pt: CurvePoint, prec: int) -> bool:
    """Exact torsion test: 2-torsion directly, otherwise up to 8 doublings.

    A torsion point has canonical height 0, so every doubling iterate keeps
    naive height <= the height-difference bound; growth past it proves
    non-torsion early and keeps coordinates small.
    """
    if pt.is_two_torsion:
        return True
    ctx = context(prec)
    cap = height_difference_bound(model, prec) + ctx.mpf(1)
    current = pt
    for _ in range(8):
        if naive_height(current, prec) > cap:
            return False
        current = double(model, current, check=False)
        if current.is_infinity:
            return True
    return False


def primitivity_check(
    model: WeierstrassModel,
    d: int,
    pt: CurvePoint,
    precision: int = DEFAULT_PRECISION,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    strict: bool = False,
    square_free: SquareFreeVerdict | None = None,
) -> PrimitivityCertificate:
    """Certify pt primitive on the twist of ``model`` by ``d``.

    If P = mR then hhat(P) = m^2 hhat(R) > m^2 LB, so
    m_max = floor(sqrt(hhat/LB)) caps |m|; m_max <= 1 certifies that no
    R with |m| >= 2 exists.  The ratio is formed with hhat rounded up and
    LB rounded down, so the certificate errs toward inconclusive.  The
    final Mordell-Weil statement remains conditional on rank 1 (see notes).
    """
    if square_free is None:
        square_free = square_free_test(d, trial_bound)
    twisted = twist(model, d, verdict=square_free)
    if not on_curve(twisted, pt):
        raise PointError(f"point {pt} is not on the twist by {d}")
    ctx = context(precision)
    base = model.coefficients()
    notes_tail = (
        " The twist's Mordell-Weil group is generated by this point whenever its rank is 1;"
        " rank computation is out of scope."
    )
    if _is_torsion(twisted, pt, precision):
        return PrimitivityCertificate(
            "torsion",
            None,
            None,
            None,
            "point is torsion (2-torsion or doubling collapsed)." + notes_tail,
            base,
            d,
            pt.serialize(),
            precision,
            trial_bound,
        )
    hhat, _ = canonical_height(twisted, pt, precision)
    report = lower_bound(model, d, precision, trial_bound, strict)
    lb_value = report.bound_for(d)
    err = error_estimate(ctx)
    verdict = "inconclusive"
    m_max = None
    if lb_value - err > 0:
        ratio_high = (hhat + err) / (lb_value - err)
        m_max = int(ctx.floor(ctx.sqrt(ratio_high)))
        if m_max <= 1:
            verdict = "primitive"
    notes = {
        "primitive": "no point R and |m| >= 2 satisfy P = mR.",
        "inconclusive": "lower bound too weak to cap the multiplier at 1.",
    }[verdict]
    if square_free.status == "unknown":
        notes += (
            f" Square-freeness of {d} unresolved at trial bound {trial_bound}"
            " and assumed; the certificate is conditional on it."
        )
    return PrimitivityCertificate(
        verdict,
        hhat,
        lb_value,
        m_max,
        notes + notes_tail,
        base,
        d,
        pt.serialize(),
        precision,
        trial_bound,
        report,
    )


def find_half_points(
    model: WeierstrassModel,
    pt: CurvePoint,
    hhat=None,
    prec: int = DEFAULT_PRECISION,
) -> list[CurvePoint]:
    """Exact search for R with x(2R) = x(pt): the m = 2 oracle.

    Solves the degree-4 duplication equation Phi(x) - x(P) psi2a(x) = 0 over
    the rationals: any half-point satisfies hhat(R) = hhat(P)/4, so
    h(x(R)) <= hhat(P)/4 + C bounds numerator and denominator; roots are
    isolated numerically beyond that bound and reconstructed by continued
    fractions, then verified exactly (root of the quartic, square RHS).
    """
    if pt.is_infinity:
        raise PointError("half-point search needs an affine point")
    if hhat is None:
        hhat, _ = canonical_height(model, pt, prec)
    bound_nats = float(hhat) / 4 + float(height_difference_bound(model, prec)) + 1.0
    den_bound = int(context(64).exp(bound_nats)) + 1
    bound_bits = int(bound_nats / math.log(2)) + 1
    x_p = pt.x
    b2, b4, b6, b8 = model.b2, model.b4, model.b6, model.b8
    coeffs = [
        Fraction(-b8) - x_p * b6,
        Fraction(-2 * b6) - x_p * 2 * b4,
        Fraction(-b4) - x_p * b2,
        -4 * x_p,
        Fraction(1),
    ]
    lcm = math.lcm(*(c.denominator for c in coeffs))
    int_coeffs = [int(c * lcm) for c in coeffs]
    roots = None
    root_prec = 2 * bound_bits + 96
    for attempt in range(4):
        rctx = context(root_prec << attempt)
        try:
            candidates, err = rctx.polyroots(
                [rctx.mpf(c) for c in reversed(int_coeffs)],
                error=True,
                extraprec=root_prec // 2,
                maxsteps=200,
            )
        except rctx.NoConvergence:
            continue
        if err < rctx.mpf(2) ** (-(2 * bound_bits + 16)):
            roots = candidates
            break
    if roots is None:
        raise PrecisionError("duplication quartic root isolation failed")
    found = []
    seen = set()
    for root in roots:
        candidate = _exact_fraction(root.real).limit_denominator(den_bound)
        if candidate in seen:
            continue
        seen.add(candidate)
        if sum(c * candidate**i for i, c in enumerate(int_coeffs)) != 0:
            continue
        rhs = model.rhs(candidate)
        if rhs < 0:
            continue
        num_root = math.isqrt(rhs.numerator)
        den_root = math.isqrt(rhs.denominator)
        if num_root * num_root != rhs.numerator or den_root * den_root != rhs.denominator:
            continue
        half = CurvePoint.from_xy(candidate, Fraction(num_root, den_root))
        if on_curve(model, half):
            found.append(half)
    return found


def _exact_fraction(value) -> Fraction:
    """Exact Fraction from an mpf via its binary sign/mantissa/exponent."""
    sign, man, exp, _ = value._mpf_
    man = int(man) if sign == 0 else -int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


# ---------------------------------------------------------------------------
# family-specific bounds


@dataclass(frozen=True)
class FamilyUpperBound:
    """(2/3) log D(t) + 1.2177 with its two constituents."""

    t: int
    d_value: int
    total: object
    arch_part: object
    nonarch_part: object
    square_free: SquareFreeVerdict
    prec: int

    def serialize(self) -> dict:
        return {
            "t": self.t,
            "d": self.d_value,
            "total": format_value(self.total, self.prec),
            "archimedean_part": format_value(self.arch_part, self.prec),
            "nonarchimedean_part": format_value(self.nonarch_part, self.prec),
            "square_free": self.square_free.status,
            "precision": self.prec,
        }


def family_upper_bound(
    t: int,
    prec: int = DEFAULT_PRECISION,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    family: TwistFamily | None = None,
) -> FamilyUpperBound:
    """Height upper bound for the reference family's explicit point.

    total = (2/3) log D(t) + 1.2177, split into the archimedean constituent
    (5/3) log D(t) + 1.2177 and the finite-place constituent -log D(t).
    Requires square-free D(t) (that is what makes the twist minimal).
    """
    family = family or reference_family()
    d = family.D(int(t))
    if d == 0:
        raise HypothesisError(f"D({t}) = 0")
    verdict = square_free_test(d, trial_bound)
    if verdict.status == "not_square_free":
        raise HypothesisError(
            f"D({t}) = {d} is not square-free (p = {verdict.witness}); "
            "the finite-place estimate needs a minimal twist"
        )
    ctx = context(prec)
    log_d = ctx.log(ctx.mpf(d))
    margin = ctx.mpf("1.2177")
    return FamilyUpperBound(
        int(t),
        d,
        ctx.mpf(2) / 3 * log_d + margin,
        ctx.mpf(5) / 3 * log_d + margin,
        -log_d,
        verdict,
        prec,
    )


@dataclass(frozen=True)
class ThresholdScanReport:
    t_min: int
    t_max: int
    positive: int | None
    negative: int | None
    combined: int | None
    constant: object
    prec: int

    def serialize(self) -> dict:
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "positive_threshold": self.positive,
            "negative_threshold": self.negative,
            "combined_threshold": self.combined,
            "constant": format_value(self.constant, self.prec),
            "precision": self.prec,
        }


def bound_ratio(t: int, prec: int = DEFAULT_PRECISION, report: LowerBoundReport | None = None):
    """(upper bound)/(lower bound) for the reference family at t, or None
    when the lower bound is nonpositive (certificates impossible there)."""
    family = reference_family()
    d = family.D(int(t))
    ctx = context(prec)
    if report is None:
        report = lower_bound(family.base_curve(), "+", prec)
    log_d = ctx.log(ctx.mpf(d))
    denominator = log_d / 4 + report.constant
    if denominator <= 0:
        return None
    return (ctx.mpf(2) / 3 * log_d + ctx.mpf("1.2177")) / denominator


def threshold_scan(
    t_min: int,
    t_max: int,
    prec: int = DEFAULT_PRECISION,
) -> ThresholdScanReport:
    """Minimal |t| in [t_min, t_max] past which the bound ratio stays < 4.

    Scans t and -t; the per-sign threshold is the smallest |t| whose whole
    tail (within range) keeps the ratio below 4 with a positive lower
    bound.  ``combined`` is the larger of the two (both signs certified).
    """
    if not 0 <= t_min <= t_max:
        raise ValueError("need 0 <= t_min <= t_max")
    family = reference_family()
    report = lower_bound(family.base_curve(), "+", prec)

    def sign_threshold(sign: int) -> int | None:
        threshold = None
        for magnitude in range(t_max, t_min - 1, -1):
            ratio = bound_ratio(sign * magnitude, prec, report)
            if ratio is not None and ratio < 4:
                threshold = magnitude
            else:
                break
        return threshold

    pos = sign_threshold(1)
    neg = sign_threshold(-1)
    combined = max(pos, neg) if pos is not None and neg is not None else None
    return ThresholdScanReport(t_min, t_max, pos, neg, combined, report.constant, prec)
