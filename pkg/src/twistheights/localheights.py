"""Local height machinery: AGM periods, archimedean heights by the theta
series and by Tate's series, the valuation-based non-archimedean case
analysis, canonical height assembly, and a naive-limit oracle.

Normalization used throughout is the doubled one: the canonical height is
lim h(2^n P)/4^n with h the naive height of x, each local piece satisfies
lambda(2P) = 4 lambda(P) - 2 log|2y(P) + a1 x + a3|, and the good-reduction
value at a finite place is max(0, -v_p(x)) log p with no factor 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curve import (
    CurvePoint,
    WeierstrassModel,
    division_poly_values,
    double,
    naive_height,
    on_curve,
)
from .errors import CurveError, HypothesisError, PointError, PrecisionError
from .exactmath import (
    DEFAULT_PRECISION,
    context,
    error_estimate,
    factorize,
    agm,
    rational_poly_xgcd_constant,
    series_tolerance,
    valuation,
)

MAX_DISC_VALUATION = 12  # v_p(disc) below this is required of minimal input


def _log_int(ctx, n: int):
    return ctx.log(ctx.mpf(n))


# ---------------------------------------------------------------------------
# periods


@dataclass(frozen=True)
class PeriodData:
    """Normalized period lattice data.

    omega1 > 0 real, Im(omega2) > 0, Re(omega2/omega1) is 0 (rectangular,
    disc > 0) or -1/2 (rhombic, disc < 0); q = exp(2 pi i omega2/omega1) is
    real, positive in the rectangular case and negative in the rhombic one.
    """

    omega1: object
    omega2: object
    q: object
    lattice_shape: str
    prec: int

    @property
    def error(self):
        return error_estimate(context(self.prec))


def _two_division_roots(model: WeierstrassModel, ctx):
    """Roots of 4x^3 + b2 x^2 + 2 b4 x + b6, exact structure known from disc.

    Returns ('real3', [e1 > e2 > e3]) for disc > 0 and
    ('real1', (e1, u, v)) for disc < 0, where the complex pair is u +- iv.
    """
    coeffs = [4, model.b2, 2 * model.b4, model.b6]
    roots = ctx.polyroots([ctx.mpf(c) for c in coeffs], extraprec=ctx.prec // 2 + 30)
    if model.disc > 0:
        es = sorted((r.real for r in roots), reverse=True)
        return "real3", es
    real_root = min(roots, key=lambda r: abs(r.imag))
    pair = [r for r in roots if r is not real_root]
    u = (pair[0].real + pair[1].real) / 2
    v = abs(pair[0].imag)
    return "real1", (real_root.real, u, v)


def periods(model: WeierstrassModel, prec: int = DEFAULT_PRECISION) -> PeriodData:
    """Period lattice by AGM on the 2-division roots.

    disc > 0 (three real roots e1 > e2 > e3):
        omega1 = pi / agm(sqrt(e1-e3), sqrt(e1-e2)),
        omega2 = i pi / agm(sqrt(e1-e3), sqrt(e2-e3)).
    disc < 0 (real root e1, complex pair u +- iv, m = |e1 - (u+iv)|):
        omega1 = pi / agm(sqrt(m), sqrt((m + e1 - u)/2)),
        Im omega2 = pi / (2 agm(sqrt(m), sqrt((m - e1 + u)/2))),
        omega2 = -omega1/2 + i Im omega2.
    """
    ctx = context(prec)
    kind, data = _two_division_roots(model, ctx)
    if kind == "real3":
        e1, e2, e3 = data
        w1 = ctx.pi / agm(ctx, ctx.sqrt(e1 - e3), ctx.sqrt(e1 - e2))
        im2 = ctx.pi / agm(ctx, ctx.sqrt(e1 - e3), ctx.sqrt(e2 - e3))
        w2 = ctx.mpc(0, im2)
        q = ctx.exp(-2 * ctx.pi * im2 / w1)
        shape = "rectangular"
    else:
        e1, u, v = data
        m = ctx.sqrt((e1 - u) ** 2 + v * v)
        w1 = ctx.pi / agm(ctx, ctx.sqrt(m), ctx.sqrt((m + e1 - u) / 2))
        im2 = ctx.pi / (2 * agm(ctx, ctx.sqrt(m), ctx.sqrt((m - e1 + u) / 2)))
        w2 = ctx.mpc(-w1 / 2, im2)
        q = -ctx.exp(-2 * ctx.pi * im2 / w1)
        shape = "rhombic"
    if not (w1 > 0 and im2 > 0 and abs(q) < 1):
        raise PrecisionError("period normalization failed")
    return PeriodData(w1, w2, q, shape, prec)


def omega_for_twist(pd: PeriodData, d_sign: int, disc_sign: int):
    """Case-dependent omega: omega1 (D>0), Im omega2 (D<0, disc>0),
    2 Im omega2 (D<0, disc<0)."""
    if d_sign == 0:
        raise HypothesisError("twisting integer must be nonzero")
    expected = "rectangular" if disc_sign > 0 else "rhombic"
    if pd.lattice_shape != expected:
        raise CurveError("period data does not match the discriminant sign")
    if d_sign > 0:
        return pd.omega1
    if disc_sign > 0:
        return pd.omega2.imag
    return 2 * pd.omega2.imag


# ---------------------------------------------------------------------------
# archimedean local heights


def _as_mpf(ctx, fr: Fraction):
    return ctx.mpf(fr.numerator) / ctx.mpf(fr.denominator)


def _elliptic_log_u(model: WeierstrassModel, pt: CurvePoint, ctx, omega1):
    """Normalized elliptic logarithm u = z(Q)/omega1 in [0, 1).

    z(Q) = int_{x(Q)}^inf dt / (2 sqrt(f(t))) on the y >= 0 branch of the
    unbounded real component; the y < 0 branch is u -> 1 - u.  The tail is
    integrated as int_0^{1/sqrt(X)} du / sqrt(u^6 f(1/u^2)) (t = 1/u^2),
    whose integrand is smooth on the closed interval, so the tanh-sinh rule
    reaches full precision.
    """
    a2, a4, a6 = model.a2, model.a4, model.a6
    wctx = context(ctx.prec + 48)
    x0 = _as_mpf(wctx, pt.x)
    cut = max(x0, wctx.mpf(1))
    z = wctx.mpf(0)
    err = wctx.mpf(0)
    if x0 < cut:

        def head(t):
            ft = ((t + a2) * t + a4) * t + a6
            return 1 / (2 * wctx.sqrt(ft))

        value, estimate = wctx.quad(head, [x0, cut], error=True, maxdegree=10)
        z += value
        err += estimate

    def tail(u):
        u2 = u * u
        return 1 / wctx.sqrt(((a6 * u2 + a4) * u2 + a2) * u2 + 1)

    value, estimate = wctx.quad(tail, [0, 1 / wctx.sqrt(cut)], error=True, maxdegree=10)
    z += value
    err += estimate
    if err > series_tolerance(ctx) * max(abs(z), wctx.mpf(1)):
        raise PrecisionError("elliptic logarithm quadrature did not converge")
    u = ctx.convert(z) / omega1
    if pt.beta < 0:
        u = 1 - u
    return u % 1


def _theta_series(ctx, q, v):
    """sum (-1)^n q^(n(n+1)/2) sin((2n+1) pi v); |result| <= 1/(1-|q|)."""
    tol = series_tolerance(ctx)
    total = ctx.mpf(0)
    n = 0
    while True:
        total += (-1) ** n * q ** (n * (n + 1) // 2) * ctx.sin((2 * n + 1) * ctx.pi * v)
        n += 1
        if abs(q) ** (n * (n + 1) // 2) < tol:
            return total


def arch_local_height_theta(
    model: WeierstrassModel,
    pt: CurvePoint,
    period_data: PeriodData | None = None,
    prec: int = DEFAULT_PRECISION,
):
    """Archimedean local height from the theta series at the elliptic log.

    Evaluates (1/16) log|disc/q| + (1/4) log|y^2 omega1/(2 pi)|
    - (1/2) log|theta(2u)|.  Points on the bounded real component of a
    disc > 0 curve are backed out through one duplication step.  2-torsion
    is rejected (theta vanishes there).
    """
    if not model.is_short:
        raise CurveError("theta method implemented for short-form models")
    if pt.is_infinity:
        raise PointError("archimedean height needs an affine point")
    if pt.is_two_torsion:
        raise PointError("theta method undefined at 2-torsion")
    ctx = context(prec)
    if period_data is None or period_data.prec < prec:
        period_data = periods(model, prec)
    w1, q = period_data.omega1, period_data.q

    if model.disc > 0:
        _, es = _two_division_roots(model, ctx)
        if _as_mpf(ctx, pt.x) < es[0]:
            # bounded component: 2Q is on the unbounded one
            two_pt = double(model, pt, check=False)
            if two_pt.is_infinity or two_pt.is_two_torsion:
                raise PointError("theta method undefined at 2- and 4-torsion")
            lam2 = arch_local_height_theta(model, two_pt, period_data, prec)
            return (lam2 + 2 * ctx.log(abs(2 * _as_mpf(ctx, pt.y)))) / 4

    u = _elliptic_log_u(model, pt, ctx, w1)
    theta = _theta_series(ctx, q, 2 * u)
    if abs(theta) > 1 / (1 - abs(q)) * (1 + ctx.mpf(2) ** (-ctx.prec + 8)):
        raise PrecisionError("theta series exceeded its trivial bound")
    y = _as_mpf(ctx, pt.y)
    return (
        ctx.log(abs(ctx.mpf(model.disc) / q)) / 16
        + ctx.log(abs(y * y * w1 / (2 * ctx.pi))) / 4
        - ctx.log(abs(theta)) / 2
    )


def arch_local_height_tate(
    model: WeierstrassModel,
    pt: CurvePoint,
    prec: int = DEFAULT_PRECISION,
):
    """Archimedean local height by the doubling series
    log|x(Q)| + sum 4^-(i+1) log z(2^i Q), z = 1 - b4/x^2 - 2 b6/x^3 - b8/x^4.

    Converges when every doubling iterate keeps z > 0 (guaranteed when the
    2-division cubic has a single positive real root below x(Q)); the
    condition is checked dynamically and violations raise.
    """
    if pt.is_infinity:
        raise PointError("archimedean height needs an affine point")
    if pt.is_two_torsion:
        raise HypothesisError("series precondition violated; use theta method")
    ctx = context(prec)
    b2, b4, b6, b8 = model.b2, model.b4, model.b6, model.b8
    x = _as_mpf(ctx, pt.x)
    if x == 0:
        raise HypothesisError("series precondition violated; use theta method")
    total = ctx.log(abs(x))
    tol = series_tolerance(ctx)
    log_z_max = ctx.mpf(1)
    i = 0
    while True:
        z = 1 - b4 / x**2 - 2 * b6 / x**3 - b8 / x**4
        if z <= 0:
            raise HypothesisError("series precondition violated; use theta method")
        log_z = ctx.log(z)
        total += log_z / ctx.mpf(4) ** (i + 1)
        log_z_max = max(log_z_max, abs(log_z))
        # geometric tail: remaining terms bounded by log_z_max/(3*4^(i+1))
        if log_z_max / (3 * ctx.mpf(4) ** (i + 1)) < tol:
            return total
        x = (x**4 - b4 * x**2 - 2 * b6 * x - b8) / (4 * x**3 + b2 * x**2 + 2 * b4 * x + b6)
        i += 1
        if i > 8 * prec:
            raise PrecisionError("doubling series failed to converge")


def _tate_applicable(model: WeierstrassModel, pt: CurvePoint, ctx) -> bool:
    """True when the single-real-root guarantee for the doubling series holds."""
    if model.disc > 0 or pt.is_two_torsion:
        return False
    _, (e1, _, _) = _two_division_roots(model, ctx)
    return e1 > 0 and _as_mpf(ctx, pt.x) > e1


# ---------------------------------------------------------------------------
# non-archimedean local heights


def _frac_valuation(fr: Fraction, p: int) -> int | None:
    """v_p of a rational; None encodes +infinity (the zero value)."""
    if fr == 0:
        return None
    num = valuation(fr.numerator, p)
    return num - valuation(fr.denominator, p)


def _le(a: int | None, bound: int) -> bool:
    """a <= bound with None = +infinity."""
    return a is not None and a <= bound


@dataclass(frozen=True)
class BreakdownEntry:
    """One finite place: exact multiplier lam of log p plus diagnostics."""

    place: int
    lam: Fraction
    value: object
    case: str
    A: int | None
    B: int | None
    C: int | None
    N: int

    def serialize(self) -> dict:
        return {
            "place": self.place,
            "lambda_multiplier": [self.lam.numerator, self.lam.denominator],
            "value": str(self.value),
            "case": self.case,
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "N": self.N,
        }


@dataclass(frozen=True)
class LocalHeightBreakdown:
    """Archimedean value + method tag and the per-prime entries; the total
    is their sum by construction."""

    archimedean: object
    method: str
    entries: tuple[BreakdownEntry, ...]
    prec: int
    torsion: bool = False

    def total(self):
        total = self.archimedean
        for entry in self.entries:
            total = total + entry.value
        return total

    def serialize(self) -> dict:
        return {
            "archimedean": str(self.archimedean),
            "method": self.method,
            "entries": [e.serialize() for e in self.entries],
            "precision": self.prec,
            "torsion": self.torsion,
        }


def nonarch_local_height(
    model: WeierstrassModel,
    pt: CurvePoint,
    p: int,
    prec: int = DEFAULT_PRECISION,
) -> BreakdownEntry:
    """Local height at a finite place of a model minimal at p.

    Case analysis on A = v_p(psi0), B = v_p(psi2), C = v_p(psi3),
    N = v_p(disc):
      unbounded denominator  v_p(x) < 0:      lam = -v_p(x)
      nonsingular reduction  A<=0, B<=0 or N=0: lam = 0
      multiplicative (p not dividing c4):     lam = -n(N-n)/N, n = min(B, N/2)
      additive, C >= 3B:                      lam = -2B/3
      additive, C < 3B:                       lam = -C/4
    (multipliers of log p; doubled normalization).
    """
    if pt.is_infinity:
        raise PointError("local height needs an affine point")
    N = valuation(model.disc, p)
    if N >= MAX_DISC_VALUATION:
        raise HypothesisError(
            f"model is not minimal at {p} (v_{p}(disc) = {N} >= {MAX_DISC_VALUATION}); "
            "supply a minimal model"
        )
    ctx = context(prec)
    vx = _frac_valuation(pt.x, p)
    vals = division_poly_values(model, pt)
    A = _frac_valuation(vals.psi0, p)
    B = _frac_valuation(vals.psi2, p)
    C = _frac_valuation(vals.psi3, p)
    if vx is not None and vx < 0:
        lam = Fraction(-vx)
        case = "unbounded_denominator"
    elif _le(A, 0) or _le(B, 0) or N == 0:
        lam = Fraction(0)
        case = "good"
    elif valuation(model.c4, p) == 0:
        half_n = Fraction(N, 2)
        n = half_n if B is None else min(Fraction(B), half_n)
        lam = -n * (N - n) / N
        case = "multiplicative"
    elif B is not None and (C is None or C >= 3 * B):
        lam = Fraction(-2 * B, 3)
        case = "additive_psi2"
    else:
        lam = Fraction(-C, 4)
        case = "additive_psi3"
    value = _as_mpf(ctx, lam) * _log_int(ctx, p)
    return BreakdownEntry(p, lam, value, case, A, B, C, N)


# ---------------------------------------------------------------------------
# canonical height


def validate_minimality(model: WeierstrassModel) -> dict[int, int]:
    """Factor the discriminant and require v_p < 12 everywhere."""
    disc_factors = factorize(model.disc)
    for p, e in disc_factors.items():
        if e >= MAX_DISC_VALUATION:
            raise HypothesisError(
                f"model is not minimal at {p} (v_{p}(disc) = {e}); supply a minimal model"
            )
    return disc_factors


def canonical_height(
    model: WeierstrassModel,
    pt: CurvePoint,
    prec: int = DEFAULT_PRECISION,
    period_data: PeriodData | None = None,
):
    """Canonical height with its local breakdown.

    Archimedean part by Tate's doubling series where its single-real-root
    guarantee holds, otherwise by the theta series (the two agree; tests
    assert it).  Finite places run over p | delta * disc.  2-torsion gets
    an exact 0 with a torsion-flagged breakdown.
    """
    if pt.is_infinity:
        raise PointError("canonical height needs an affine point")
    if not on_curve(model, pt):
        raise PointError(f"point {pt} is not on curve {model}")
    if not model.is_short:
        raise CurveError("height engine implemented for short-form models")
    ctx = context(prec)
    disc_factors = validate_minimality(model)
    if pt.is_two_torsion:
        breakdown = LocalHeightBreakdown(ctx.mpf(0), "torsion", (), prec, torsion=True)
        return ctx.mpf(0), breakdown
    bad_primes = sorted(set(disc_factors) | (set(factorize(pt.delta)) if pt.delta > 1 else set()))
    entries = tuple(nonarch_local_height(model, pt, p, prec) for p in bad_primes)
    if _tate_applicable(model, pt, ctx):
        arch = arch_local_height_tate(model, pt, prec)
        method = "tate"
    else:
        arch = arch_local_height_theta(model, pt, period_data, prec)
        method = "theta"
    breakdown = LocalHeightBreakdown(arch, method, entries, prec)
    return breakdown.total(), breakdown


# ---------------------------------------------------------------------------
# naive-limit oracle


def height_difference_bound(model: WeierstrassModel, prec: int = DEFAULT_PRECISION):
    """Computed C with |h(2^n Q)/4^n - hhat(Q)| <= C/4^n for affine orbits.

    Uses the duplication x-map forms F = x^4 - b4 x^2 - 2 b6 x - b8 and
    G = 4x^3 + b2 x^2 + 2 b4 x + b6: coefficient sums bound h(2Q) - 4h(Q)
    from above; XGCD cofactor identities (both variable orders) bound it
    from below, with gcd(F, G) at coprime arguments dividing
    lcm of the two constants.  C = max bound / 3 by the telescoping sum.
    """
    ctx = context(prec)
    b2, b4, b6, b8 = model.b2, model.b4, model.b6, model.b8
    phi = [-b8, -2 * b6, -b4, 0, 1]
    psi = [b6, 2 * b4, b2, 4]
    l_plus = max(sum(abs(c) for c in phi), sum(abs(c) for c in psi))
    u0, v0, r0 = rational_poly_xgcd_constant(phi, psi)
    l0 = sum(abs(c) for c in u0) + sum(abs(c) for c in v0)
    phi_rev = [1, 0, -b4, -2 * b6, -b8]
    psi_rev = [0, 4, b2, 2 * b4, b6]
    u1, v1, r1 = rational_poly_xgcd_constant(phi_rev, psi_rev)
    l1 = sum(abs(c) for c in u1) + sum(abs(c) for c in v1)
    gcd_bound = abs(r0 * r1) // math.gcd(abs(r0), abs(r1))
    defect = max(
        _log_int(ctx, l0) - _log_int(ctx, abs(r0)),
        _log_int(ctx, l1) - _log_int(ctx, abs(r1)),
    )
    c0 = max(_log_int(ctx, l_plus), defect + _log_int(ctx, gcd_bound))
    return c0 / 3


@dataclass(frozen=True)
class NaiveLimitEstimate:
    estimate: object
    error_bound: object
    n_doublings: int
    torsion: bool = False


def naive_limit_estimate(
    model: WeierstrassModel,
    pt: CurvePoint,
    n_doublings: int,
    prec: int = DEFAULT_PRECISION,
) -> NaiveLimitEstimate:
    """h(2^n Q)/4^n by exact doubling, with the documented C/4^n bound.

    Coordinate sizes grow ~4^n-fold, so n is capped at 8.  Hitting
    infinity on the way is reported as torsion.
    """
    if not 0 <= n_doublings <= 8:
        raise ValueError("n_doublings must be between 0 and 8")
    if pt.is_infinity:
        raise PointError("naive limit needs an affine point")
    if not on_curve(model, pt):
        raise PointError(f"point {pt} is not on curve {model}")
    ctx = context(prec)
    current = pt
    for _ in range(n_doublings):
        current = double(model, current, check=False)
        if current.is_infinity:
            return NaiveLimitEstimate(ctx.mpf(0), ctx.mpf(0), n_doublings, torsion=True)
    estimate = naive_height(current, prec) / ctx.mpf(4) ** n_doublings
    bound = height_difference_bound(model, prec) / ctx.mpf(4) ** n_doublings
    return NaiveLimitEstimate(estimate, bound, n_doublings)
