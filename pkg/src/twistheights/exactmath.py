"""Exact arithmetic layer: valuations, square-free verdicts, integer
polynomials with resultants/discriminants, and arbitrary-precision
real/complex floats with an AGM.

Integers and rationals are Python ``int`` / ``fractions.Fraction`` (both
arbitrary precision and always stored reduced with positive denominator,
which is exactly the representation the rest of the package assumes).
Floats are mpmath values bound to a per-call context so concurrent use
never shares mutable precision state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
import sympy

from .errors import PrecisionError

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_PRECISION = 128
MIN_PRECISION = 64

# ---------------------------------------------------------------------------
# precision contexts


def context(prec: int = DEFAULT_PRECISION) -> mpmath.ctx_mp.MPContext:
    """Fresh mpmath context at ``prec`` bits (>= 64), safe to use per call."""
    if prec < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {prec}")
    ctx = mpmath.mp.clone()
    ctx.prec = prec
    return ctx


def error_estimate(ctx) -> mpmath.mpf:
    """Reported error radius for transcendental outputs: 2^-(p-16)."""
    return ctx.mpf(2) ** (-(ctx.prec - 16))


def series_tolerance(ctx) -> mpmath.mpf:
    """Termination threshold for series/iterations: 2^-(p+16), 16 guard bits."""
    return ctx.mpf(2) ** (-(ctx.prec + 16))


# ---------------------------------------------------------------------------
# integers


def valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n.  n must be nonzero, p prime."""
    if n == 0:
        raise ValueError("valuation of zero undefined")
    if p < 2:
        raise ValueError(f"valuation needs a prime, got {p}")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


_sieve_cache: tuple[int, list[int]] = (1, [])


def _small_primes(bound: int) -> Iterator[int]:
    """Primes up to bound from a cached sieve (regrown when bound increases)."""
    global _sieve_cache
    cached_bound, primes = _sieve_cache
    if bound > cached_bound:
        sieve = bytearray([1]) * (bound + 1)
        sieve[:2] = b"\x00\x00"
        for p in range(2, math.isqrt(bound) + 1):
            if sieve[p]:
                start = p * p
                sieve[start :: p] = bytearray(len(range(start, bound + 1, p)))
        primes = [i for i, flag in enumerate(sieve) if flag]
        _sieve_cache = (bound, primes)
    for p in primes:
        if p > bound:
            return
        yield p


def is_prime(n: int) -> bool:
    return sympy.isprime(n)


def factorize(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND) -> dict[int, int]:
    """Full prime factorization of |n| (n != 0) as {prime: exponent}.

    Trial-divides below ``trial_bound`` and hands any remaining composite
    residual to sympy.  Unlike square_free_test this always finishes the job.
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _small_primes(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        if is_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            for p, e in sympy.factorint(n).items():
                out[int(p)] = out.get(int(p), 0) + int(e)
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class SquareFreeVerdict:
    """Outcome of a bounded square-free test.

    status is one of 'square_free', 'not_square_free' (witness holds a prime
    whose square divides the input), or 'unknown' (residual holds the
    unfactored cofactor the trial bound could not resolve).
    """

    status: str
    witness: int | None = None
    residual: int | None = None

    def __bool__(self) -> bool:
        return self.status == "square_free"

    @property
    def definite(self) -> bool:
        return self.status != "unknown"


def square_free_test(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND) -> SquareFreeVerdict:
    """Bounded square-free test by trial division.

    Definite verdicts come from: a repeated prime found below the bound, a
    fully factored input (residual 1 or prime), a residual that is a perfect
    power, or a residual small enough (< bound^2) to be necessarily prime.
    Anything else is reported unknown rather than guessed.
    """
    if n == 0:
        raise ValueError("square-free test of zero undefined")
    if trial_bound < 2:
        raise ValueError("trial_bound must be >= 2")
    n = abs(n)
    if n == 1:
        return SquareFreeVerdict("square_free")
    for p in _small_primes(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            n //= p
            if n % p == 0:
                return SquareFreeVerdict("not_square_free", witness=p)
    if n == 1 or n < trial_bound * trial_bound or is_prime(n):
        # all prime factors of the residual exceed the bound, so a residual
        # below bound^2 is prime; a prime residual appears exactly once here
        return SquareFreeVerdict("square_free")
    root, exact = sympy.integer_nthroot(n, 2)
    if exact:
        q = int(root)
        witness = q if is_prime(q) else min(factorize(q, trial_bound))
        return SquareFreeVerdict("not_square_free", witness=witness)
    if sympy.perfect_power(n):
        base, _ = sympy.perfect_power(n)
        witness = int(base) if is_prime(int(base)) else min(factorize(int(base), trial_bound))
        return SquareFreeVerdict("not_square_free", witness=witness)
    return SquareFreeVerdict("unknown", residual=n)


# ---------------------------------------------------------------------------
# integer polynomials


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial over Z, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        object.__setattr__(self, "coeffs", _strip([int(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction, works for mp floats too."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "IntPolynomial") -> "IntPolynomial":
        acc = IntPolynomial([])
        for c in reversed(self.coeffs):
            acc = acc * inner + IntPolynomial([c])
        return acc

    def exact_divide(self, divisor: "IntPolynomial") -> "IntPolynomial":
        """Quotient self/divisor in Z[t]; raises if the division is inexact."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dc = divisor.coeffs
        q = [0] * max(len(rem) - len(dc) + 1, 0)
        while len(rem) >= len(dc):
            lead, div = rem[-1], dc[-1]
            if lead % div != 0:
                raise ValueError(f"inexact polynomial division, remainder {IntPolynomial(rem)!r}")
            c = lead // div
            k = len(rem) - len(dc)
            q[k] = c
            for i, d in enumerate(dc):
                rem[i + k] -= c * d
            assert rem[-1] == 0
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        if rem:
            raise ValueError(f"inexact polynomial division, remainder {IntPolynomial(rem)!r}")
        return IntPolynomial(q)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(f"{c:+d}")
            else:
                var = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(f"+{var}")
                elif c == -1:
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{c:+d}*{var}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s


def poly_resultant(a: IntPolynomial, b: IntPolynomial) -> int:
    """Resultant over Z via fraction-free Gaussian elimination of Sylvester."""
    if a.is_zero or b.is_zero:
        raise ValueError("resultant needs nonzero polynomials")
    m, n = a.degree, b.degree
    if m == 0:
        return a.coeffs[0] ** n
    if n == 0:
        return b.coeffs[0] ** m
    size = m + n
    rows = []
    ra = list(reversed(a.coeffs))
    rb = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ra + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + rb + [0] * (size - n - 1 - i))
    # Bareiss: exact integer determinant
    sign = 1
    prev = 1
    for k in range(size - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[-1][-1]


def poly_discriminant(a: IntPolynomial) -> int:
    """disc(a) = (-1)^(d(d-1)/2) * Res(a, a') / lc(a).

    Sign convention gives disc(t^3 + At + B) = -4A^3 - 27B^2.
    """
    d = a.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = poly_resultant(a, a.derivative())
    num = (-1) ** (d * (d - 1) // 2) * res
    if num % a.leading != 0:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return num // a.leading


def rational_poly_xgcd_constant(
    a: Sequence[int], b: Sequence[int]
) -> tuple[list[int], list[int], int]:
    """Integer cofactors (u, v, r) with u*a + v*b = r, r a nonzero constant.

    Requires gcd(a, b) = 1 in Q[t].  Coefficient lists are lowest degree
    first.  Used for the height-difference bound of the naive-limit oracle.
    """

    def divmod_q(num: list[Fraction], den: list[Fraction]):
        num = num[:]
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        while len(num) >= len(den):
            c = num[-1] / den[-1]
            k = len(num) - len(den)
            q[k] = c
            for i, dcf in enumerate(den):
                num[i + k] -= c * dcf
            num.pop()
            while num and num[-1] == 0:
                num.pop()
        return q, num

    def mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
        if not p or not q:
            return []
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return out

    def sub(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
        n = max(len(p), len(q))
        out = [
            (p[i] if i < len(p) else Fraction(0)) - (q[i] if i < len(q) else Fraction(0))
            for i in range(n)
        ]
        while out and out[-1] == 0:
            out.pop()
        return out

    r0 = [Fraction(c) for c in a]
    r1 = [Fraction(c) for c in b]
    while r0 and r0[-1] == 0:
        r0.pop()
    while r1 and r1[-1] == 0:
        r1.pop()
    if not r0 or not r1:
        raise ValueError("xgcd needs nonzero polynomials")
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, rem = divmod_q(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
        if not r1:
            raise ValueError("polynomials share a common factor")
    if not r1 or r1[0] == 0:
        raise ValueError("polynomials share a common factor")
    scale = math.lcm(*(c.denominator for c in s1 + t1 + r1))
    u = [int(c * scale) for c in s1]
    v = [int(c * scale) for c in t1]
    return u, v, int(r1[0] * scale)


# ---------------------------------------------------------------------------
# arithmetic-geometric mean


def agm(ctx, a, b):
    """AGM of a, b at the context's working precision.

    Complex square roots take the branch with nonnegative real part,
    breaking Re = 0 ties toward nonnegative imaginary part, which keeps the
    iteration on the convergent track for conjugate-pair inputs.  Iterates
    with 48 guard bits until the increment falls below 2^-(p+16).
    """
    if a == 0 or b == 0:
        raise ValueError("agm of zero undefined")
    work = context(ctx.prec + 48)
    a = work.convert(a)
    b = work.convert(b)
    tol = series_tolerance(ctx)
    scale = max(abs(a), abs(b))
    for _ in range(8 * ctx.prec):
        if abs(a - b) <= tol * scale:
            return ctx.convert((a + b) / 2)
        a, b = (a + b) / 2, _right_sqrt(work, a * b)
    raise PrecisionError("agm failed to converge (bad branch choice?)")


def _right_sqrt(ctx, z):
    r = ctx.sqrt(z)
    re, im = r.real, r.imag
    if re < 0 or (re == 0 and im < 0):
        return -r
    return r
