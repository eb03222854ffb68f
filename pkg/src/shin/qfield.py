"""Exact arithmetic in real quadratic fields.

Values are represented as (p + q*sqrt(D))/s with D a squarefree positive
integer, gcd(p, q, s) = 1 and s > 0.  All comparisons and floors are decided
by integer arithmetic alone; no floating point is ever consulted, which is
what the continued-fraction digit extraction downstream relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = f**2 * d with d squarefree; return (f, d).  Requires n > 0."""
    if n <= 0:
        raise ValueError("positive integer required")
    f, d = 1, 1
    # Peel off squared prime factors by trial division up to cube root,
    # then handle the remaining part, which has at most a square factor.
    m = n
    p = 2
    while p * p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    # m is now 1, prime, prime^2, or a product of two distinct primes.
    r = isqrt(m)
    if r * r == m:
        f *= r
    else:
        d *= m
    return f, d


@dataclass(frozen=True)
class QuadVal:
    """(p + q*sqrt(D))/s, exactly.  q == 0 encodes a rational value."""

    D: int
    p: int
    q: int
    s: int

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("denominator must be positive")
        if self.q != 0:
            if self.D <= 0:
                raise ValueError("not real quadratic")
            r = isqrt(self.D)
            if r * r == self.D:
                raise ValueError("not real quadratic: square D")

    # -- construction -----------------------------------------------------

    @staticmethod
    def make(D: int, p: int, q: int, s: int) -> "QuadVal":
        """Normalize: D squarefree (square part absorbed into q), gcd = 1."""
        if s == 0:
            raise ZeroDivisionError("zero denominator")
        if q != 0:
            if D <= 0:
                raise ValueError("not real quadratic")
            f, d = squarefree_decompose(D)
            q *= f
            D = d
            if D == 1:
                p, q = p + q, 0
        if q == 0:
            D = 0
        if s < 0:
            p, q, s = -p, -q, -s
        g = gcd(gcd(p, q), s)
        if g > 1:
            p, q, s = p // g, q // g, s // g
        return QuadVal(D, p, q, s)

    @staticmethod
    def from_rational(x: Fraction | int) -> "QuadVal":
        x = Fraction(x)
        return QuadVal.make(0, x.numerator, 0, x.denominator)

    @staticmethod
    def sqrt_of(D: int) -> "QuadVal":
        return QuadVal.make(D, 0, 1, 1)

    # -- basic queries -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("irrational value")
        return Fraction(self.p, self.s)

    def _common_D(self, other: "QuadVal") -> int:
        if self.q == 0:
            return other.D
        if other.q == 0 or other.D == self.D:
            return self.D
        raise ValueError("incompatible quadratic fields")

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QuadVal":
        if isinstance(x, QuadVal):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadVal.from_rational(x)
        return NotImplemented

    def __add__(self, other):
        other = QuadVal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self._common_D(other)
        return QuadVal.make(
            D,
            self.p * other.s + other.p * self.s,
            self.q * other.s + other.q * self.s,
            self.s * other.s,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadVal(self.D, -self.p, -self.q, self.s)

    def __sub__(self, other):
        other = QuadVal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = QuadVal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self._common_D(other)
        return QuadVal.make(
            D,
            self.p * other.p + self.q * other.q * D,
            self.p * other.q + self.q * other.p,
            self.s * other.s,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadVal":
        # 1/((p+q√D)/s) = s(p−q√D)/(p²−q²D)
        n = self.p * self.p - self.q * self.q * self.D
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return QuadVal.make(self.D, self.s * self.p, -self.s * self.q, n)

    def __truediv__(self, other):
        other = QuadVal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "QuadVal":
        base = self if n >= 0 else self.inverse()
        out = QuadVal.from_rational(1)
        for _ in range(abs(n)):
            out = out * base
        return out

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of the value under the real embedding sqrt(D) > 0."""
        p, q, s, D = self.p, self.q, self.s, self.D
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p² against q²D
        if p * p > q * q * D:
            return (p > 0) - (p < 0)
        return (q > 0) - (q < 0)

    def __lt__(self, other):
        other = QuadVal._coerce(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        other = QuadVal._coerce(other)
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = QuadVal._coerce(other)
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = QuadVal._coerce(other)
        return (self - other).sign() >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadVal.from_rational(other)
        if not isinstance(other, QuadVal):
            return NotImplemented
        return (self.p, self.q, self.s) == (other.p, other.q, other.s) and (
            self.q == 0 or self.D == other.D
        )

    def __hash__(self):
        return hash((self.D if self.q else 0, self.p, self.q, self.s))

    # -- numerics ----------------------------------------------------------

    def to_mpf(self, ctx):
        """Value as an mpmath float in context ctx."""
        return (self.p + self.q * ctx.sqrt(self.D)) / self.s

    def __float__(self):
        from math import sqrt

        return (self.p + self.q * sqrt(self.D)) / self.s if self.q else self.p / self.s

    def __repr__(self):
        return f"QuadVal({self!s})"

    def __str__(self):
        return f"({self.p} + {self.q}*sqrt({self.D}))/{self.s}"


# -- operations -------------------------------------------------------------


def conj(x: QuadVal) -> QuadVal:
    """Galois conjugate: negate the sqrt(D) coefficient."""
    return QuadVal(x.D, x.p, -x.q, x.s)


def norm_trace(x: QuadVal) -> tuple[Fraction, Fraction]:
    """(norm, trace) = (x * conj(x), x + conj(x)), exactly rational."""
    nm = Fraction(x.p * x.p - x.q * x.q * x.D, x.s * x.s)
    tr = Fraction(2 * x.p, x.s)
    return nm, tr


def floor_exact(x: QuadVal) -> int:
    """Largest integer <= x, via integer sign analysis only."""
    if x.q == 0:
        return x.p // x.s
    # floor(q*sqrt(D)) for q != 0; q²D is never a perfect square here.
    t = isqrt(x.q * x.q * x.D)
    if x.q < 0:
        t = -t - 1
    return (x.p + t) // x.s


def ceil_exact(x: QuadVal) -> int:
    return -floor_exact(-x)


_RAT = r"[+-]?\d+(?:/\d+)?"
_RE_PLAIN = re.compile(rf"^({_RAT})$")
_RE_SQRT = re.compile(
    rf"^(?:({_RAT})(?=[+-]))?([+-]?(?:\d+(?:/\d+)?)?)\*?sqrt\((\d+)\)$")
_RE_WRAP = re.compile(r"^\((.*)\)/(\d+)$")
_RE_ROOT = re.compile(r"^root\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*,\s*([+-])\s*\)$")


def parse_quad(text: str) -> QuadVal:
    """Parse 'p', 'p + q*sqrt(D)', 'sqrt(D)', '(p + q*sqrt(D))/s', or the
    root form 'root(a,b,c,+|-)' selecting a root of a*x^2 + b*x + c."""
    text = "".join(text.split()).replace("+-", "-").replace("--", "+")
    body, s = text, 1
    m = _RE_WRAP.match(text)
    if m:
        body, s = m.group(1), int(m.group(2))
        if s == 0:
            raise ValueError("zero denominator")
    body = re.sub(r"([+-])0\*sqrt\(\d+\)$", "", body)  # printed rationals
    m = _RE_PLAIN.match(body)
    if m:
        x = Fraction(m.group(1)) / s
        return QuadVal.from_rational(x)
    m = _RE_SQRT.match(body)
    if m:
        u = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        qtxt = m.group(2)
        v = Fraction(qtxt) if qtxt not in ("", "+", "-") else Fraction(qtxt + "1")
        D = int(m.group(3))
        if D <= 0 or isqrt(D) ** 2 == D:
            raise ValueError("not real quadratic")
        den = u.denominator * v.denominator * s
        return QuadVal.make(
            D, u.numerator * v.denominator, v.numerator * u.denominator, den)
    m = _RE_ROOT.match(text)
    if m:
        a, b, c = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if a == 0:
            raise ValueError("degenerate root form")
        disc = b * b - 4 * a * c
        if disc <= 0 or isqrt(disc) ** 2 == disc:
            raise ValueError("not real quadratic")
        sgn = 1 if m.group(4) == "+" else -1
        # roots (−b ± √disc)/(2a); '+' selects the larger real root
        qq = sgn if a > 0 else -sgn
        return QuadVal.make(disc, -b, qq, 2 * a)
    raise ValueError(f"cannot parse quadratic literal: {text!r}")


def min_poly(beta: QuadVal) -> tuple[int, int, int]:
    """Primitive (a, b, c), a > 0, with a*beta² + b*beta + c = 0."""
    if beta.is_rational:
        raise ValueError("rational input has no quadratic minimal polynomial")
    a = beta.s * beta.s
    b = -2 * beta.p * beta.s
    c = beta.p * beta.p - beta.q * beta.q * beta.D
    g = gcd(gcd(a, b), c)
    return a // g, b // g, c // g


def conductor(beta: QuadVal) -> tuple[int, int]:
    """(f, Delta0) with disc(min_poly) = f² * Delta0, Delta0 fundamental."""
    a, b, c = min_poly(beta)
    disc = b * b - 4 * a * c
    f, d = squarefree_decompose(disc)
    if d % 4 == 1:
        delta0 = d
    else:
        delta0 = 4 * d
        if f % 2:
            raise ArithmeticError("discriminant not 0 or 1 mod 4")  # unreachable
        f //= 2
    return f, delta0


def fundamental_tp_unit(beta: QuadVal) -> QuadVal:
    """Smallest totally positive unit > 1 of the order (beta*Z+Z : beta*Z+Z).

    Computed exactly as the product of one period of the purely periodic
    minus-continued-fraction orbit equivalent to beta.
    """
    from . import modgroup  # deferred: modgroup imports this module

    if beta.is_rational:
        raise ValueError("rational input")
    exp = modgroup.hj_expand(beta)
    # Walk to the purely periodic tail, then multiply the cycle values.
    b = beta
    for a in exp.preperiod:
        b = (QuadVal.from_rational(a) - b).inverse()
    eps = QuadVal.from_rational(1)
    for a in exp.period:
        eps = eps * b
        b = (QuadVal.from_rational(a) - b).inverse()
    return eps
