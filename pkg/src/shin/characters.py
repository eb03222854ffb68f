"""Exact root-of-unity characters on SL2(Z) and its congruence subgroups.

Everything here returns exact rational exponents (RootOfUnity); floating
point appears only in the numerical validation oracles in the test suite.
Covers Dedekind sums, the Rademacher Phi function, the eta multiplier psi
(pinned to the principal square-root branch eps(tau) = sqrt(c tau + d)),
the theta multiplier chi_r on Gamma_r, and the kappa cocycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .modgroup import CharVec, Mat2, gamma_r_contains


@dataclass(frozen=True)
class RootOfUnity:
    """e(exponent) = exp(2*pi*i*exponent) with exponent reduced mod 1."""

    exponent: Fraction

    @staticmethod
    def of(x) -> "RootOfUnity":
        x = Fraction(x)
        return RootOfUnity(x - floor(x))

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity.of(self.exponent + other.exponent)

    def __pow__(self, n: int) -> "RootOfUnity":
        return RootOfUnity.of(n * self.exponent)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity.of(-self.exponent)

    def conjugate(self) -> "RootOfUnity":
        return self.inverse()

    def value(self, ctx):
        """Numerical value exp(2*pi*i*exponent) in mpmath context ctx."""
        return ctx.expjpi(2 * ctx.mpf(self.exponent.numerator) / self.exponent.denominator)

    def __str__(self):
        return f"e({self.exponent})"


ONE = RootOfUnity(Fraction(0))


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h,k) = sum_{j=1}^{|k|-1} ((j/k)) ((hj/k)) with sawtooth terms."""
    if k == 0:
        raise ValueError("k must be nonzero")
    total = Fraction(0)
    for j in range(1, abs(k)):
        a = Fraction(j, k)
        b = Fraction(h * j, k)
        total += (a - floor(a) - Fraction(1, 2)) * (b - floor(b) - Fraction(1, 2))
    return total


def phi_rademacher(A: Mat2) -> Fraction:
    """Phi(A) = b/d if c = 0, else (a+d)/c - 12 sgn(c) s(d,|c|)."""
    if A.det() != 1:
        raise ValueError("determinant must be +1")
    if A.c == 0:
        return Fraction(A.b, A.d)
    sgn = 1 if A.c > 0 else -1
    return Fraction(A.a + A.d, A.c) - 12 * sgn * dedekind_sum(A.d, abs(A.c))


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by quadratic reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def psi_eta(A: Mat2) -> RootOfUnity:
    """24th root of unity with eta(A.tau) = psi * sqrt(c tau + d) * eta(tau),
    using the principal branch of the square root."""
    if A.det() != 1:
        raise ValueError("determinant must be +1")
    a, b, c, d = A.entries()
    if c == 0:
        # eps(tau) = sqrt(d) with d = +-1: sqrt(1) = 1, sqrt(-1) = i.
        if d > 0:
            return RootOfUnity.of(Fraction(b, 24))
        return RootOfUnity.of(Fraction(-b, 24) - Fraction(1, 4))
    if c < 0:
        # psi(A, eps) = i psi(-A, i eps); i eps is principal for -A.
        return RootOfUnity.of(Fraction(1, 4)) * psi_eta(-A)
    # c > 0: sqrt(c tau + d)/sqrt(-i(c tau + d)) = e(1/8) on H.
    if c % 2:
        j = jacobi_symbol(d, c)
        expo = Fraction(1 - c, 8) + Fraction(b * d * (1 - c * c) + c * (a + d), 24)
    else:
        j = jacobi_symbol(c, abs(d))
        expo = Fraction(d, 8) + Fraction(a * c * (1 - d * d) + d * (b - c), 24)
    if j == 0:
        raise ArithmeticError("Jacobi symbol vanished on coprime entries")  # unreachable
    expo -= Fraction(1, 8)
    if j == -1:
        expo += Fraction(1, 2)
    return RootOfUnity.of(expo)


def psi_squared(A: Mat2) -> RootOfUnity:
    """The character psi^2 of SL2(Z)."""
    return psi_eta(A) ** 2


def _sympair(u: CharVec, v: CharVec) -> Fraction:
    """<u, v> = u2 v1 - u1 v2."""
    return u.r2 * v.r1 - u.r1 * v.r2


def chi_r(r: CharVec, A: Mat2) -> RootOfUnity:
    """Theta multiplier chi_r(A) = -(-1)^{delta2(Ar-r)} e((r2 (Ar)_1 - r1 (Ar)_2)/2),
    with delta2 = 1 iff both components of Ar - r are even integers."""
    Ar = A.apply_vec(r)
    m1, m2 = Ar.r1 - r.r1, Ar.r2 - r.r2
    if m1.denominator != 1 or m2.denominator != 1:
        raise ValueError("not in Gamma_r")
    delta2 = 1 if (m1 % 2 == 0 and m2 % 2 == 0) else 0
    expo = Fraction(_sympair(r, Ar), 2)
    # -(-1)^{delta2} = e((1 + delta2)/2)
    return RootOfUnity.of(expo + Fraction(1 + delta2, 2))


def kappa(A: Mat2, r: CharVec) -> RootOfUnity:
    """kappa(A,r) = e((c r1 + (d-1) r2 - a c r1^2 - 2 b c r1 r2 - b d r2^2)/2)."""
    if A.det() != 1:
        raise ValueError("determinant must be +1")
    a, b, c, d = A.entries()
    r1, r2 = r.r1, r.r2
    expo = Fraction(
        c * r1 + (d - 1) * r2 - a * c * r1 * r1 - 2 * b * c * r1 * r2 - b * d * r2 * r2,
        2,
    )
    return RootOfUnity.of(expo)
