"""SL2(Z) actions, T/S words, minus continued fractions, and cycle data.

The "minus" (Hirzebruch-Jung) continued fraction of an irrational beta is
beta = a0 - 1/(a1 - 1/(a2 - ...)) with integer digits a_j >= 2 for j >= 1.
It is purely periodic exactly when 0 < beta' < 1 < beta, and the periodic
word T^{b0} S ... T^{b_{l-1}} S generates the stabilizer of beta in SL2(Z)
up to sign.  Cycle data packages the period digits, the orbit beta_n, the
shifted characteristics r_n, and the elliptic shifts w_n = r_{n,2} beta_n -
r_{n,1} that feed the double sine products downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .qfield import QuadVal, ceil_exact, conj, fundamental_tp_unit


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 1:
            return Mat2(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return Mat2(-self.d, self.b, self.c, -self.a)
        raise ValueError("matrix not invertible over Z")

    def __pow__(self, n: int) -> "Mat2":
        base = self if n >= 0 else self.inverse()
        out = ID
        for _ in range(abs(n)):
            out = out @ base
        return out

    def apply_vec(self, r: "CharVec") -> "CharVec":
        return CharVec(self.a * r.r1 + self.b * r.r2, self.c * r.r1 + self.d * r.r2)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


ID = Mat2(1, 0, 0, 1)
T = Mat2(1, 1, 0, 1)
S = Mat2(0, -1, 1, 0)


class CharVec(NamedTuple):
    """Characteristics r = (r1, r2), exact rationals."""

    r1: Fraction
    r2: Fraction

    @staticmethod
    def of(r1, r2) -> "CharVec":
        return CharVec(Fraction(r1), Fraction(r2))

    def __neg__(self) -> "CharVec":
        return CharVec(-self.r1, -self.r2)

    def shift(self, n1: int, n2: int) -> "CharVec":
        return CharVec(self.r1 + n1, self.r2 + n2)

    def scale(self, s: int) -> "CharVec":
        return CharVec(s * self.r1, s * self.r2)

    def is_integral(self) -> bool:
        return self.r1.denominator == 1 and self.r2.denominator == 1

    def denominator(self) -> int:
        return math.lcm(self.r1.denominator, self.r2.denominator)

    def congruent(self, other: "CharVec") -> bool:
        return (self.r1 - other.r1).denominator == 1 and (self.r2 - other.r2).denominator == 1


def act(A: Mat2, tau):
    """Fractional linear action (a*tau + b)/(c*tau + d)."""
    if isinstance(tau, QuadVal):
        den = A.c * tau + A.d
        if den == 0:
            raise ZeroDivisionError("parabolic pole")
        return (A.a * tau + A.b) / den
    den = A.c * tau + A.d
    if den == 0:
        raise ZeroDivisionError("parabolic pole")
    return (A.a * tau + A.b) / den


def j_cocycle(A: Mat2, tau):
    """j_A(tau) = c*tau + d."""
    return A.c * tau + A.d


def gamma_r_contains(A: Mat2, r: CharVec) -> bool:
    """A in Gamma_r, i.e. A r == r mod Z^2."""
    return A.apply_vec(r).congruent(r)


@dataclass(frozen=True)
class HJExpansion:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]


def hj_expand(beta: QuadVal) -> HJExpansion:
    """Minus-continued-fraction expansion with exact period detection."""
    if beta.is_rational:
        raise ValueError("irrational input required")
    digits: list[int] = []
    seen: dict[QuadVal, int] = {}
    x = beta
    while x not in seen:
        seen[x] = len(digits)
        a = ceil_exact(x)
        digits.append(a)
        x = (QuadVal.from_rational(a) - x).inverse()
    start = seen[x]
    return HJExpansion(tuple(digits[:start]), tuple(digits[start:]))


def word_matrix(digits) -> Mat2:
    """Product T^{a0} S T^{a1} S ... over the digit list."""
    M = ID
    for a in digits:
        M = M @ Mat2(a, -1, 1, 0)  # T^a S
    return M


def hj_conjugate_expansion(period) -> HJExpansion:
    """Expansion of beta' from the purely periodic expansion of beta.

    With beta = [{2}^{n0}, m1+3, {2}^{n1}, ..., mk+3, {2}^{nk}] repeating,
    beta' = [1, nk+2, {2}^{mk}, n_{k-1}+3, {2}^{m_{k-1}}, ..., n1+3,
    {2}^{m1}, n0+nk+3 repeating].
    """
    period = list(period)
    if not period or any(d < 2 for d in period):
        raise ValueError("malformed purely periodic digit list")
    if all(d == 2 for d in period):
        raise ValueError("all-2 period is not quadratic")
    # Block decomposition: leading 2-run n0, then (m_i+3, {2}^{n_i}) blocks.
    i = 0
    n0 = 0
    while period[i] == 2:
        n0 += 1
        i += 1
    ms: list[int] = []
    ns: list[int] = []
    while i < len(period):
        ms.append(period[i] - 3)
        i += 1
        run = 0
        while i < len(period) and period[i] == 2:
            run += 1
            i += 1
        ns.append(run)
    nk = ns[-1]
    out: list[int] = []
    out += [2] * ms[-1]
    for mi, ni in zip(reversed(ms[:-1]), reversed(ns[:-1])):
        out.append(ni + 3)
        out += [2] * mi
    out.append(n0 + nk + 3)
    return HJExpansion((1, nk + 2), tuple(out))


def word_TS(A: Mat2):
    """Tokens ('T', n) / ('S',) whose ordered product equals A (det +1)."""
    if A.det() != 1:
        raise ValueError("determinant must be +1")
    tokens: list[tuple] = []
    while A.c != 0:
        a, c = A.a, A.c
        # divide a by c with negative remainder: a = k*c - r, 0 <= r < |c|
        k = -((-a) // c) if c > 0 else a // c
        tokens.append(("T", k))
        tokens.append(("S",))
        A = Mat2(A.c, A.d, k * A.c - A.a, k * A.d - A.b)  # (T^k S)^{-1} A
    if A.d > 0:
        if A.b != 0:
            tokens.append(("T", A.b))
    else:
        # A = -T^{-b} = S S T^{-b}
        tokens.append(("S",))
        tokens.append(("S",))
        if A.b != 0:
            tokens.append(("T", -A.b))
    return tokens


def word_eval(tokens) -> Mat2:
    M = ID
    for t in tokens:
        M = M @ (Mat2(1, t[1], 0, 1) if t[0] == "T" else S)
    return M


def frac_vec(r: CharVec) -> CharVec:
    """{r} = (r1 - floor(r1) - 1, r2 - floor(r2)): -1 <= r1 < 0 <= r2 < 1."""
    return CharVec(
        r.r1 - math.floor(r.r1) - 1,
        r.r2 - math.floor(r.r2),
    )


_K_SCAN_FACTOR = 8


def _minimal_power_in_gamma_r(P: Mat2, r: CharVec) -> int:
    """Smallest k >= 1 with P^k r == r mod Z^2."""
    bound = r.denominator() ** 2 * _K_SCAN_FACTOR
    M = P
    k = 1
    while not gamma_r_contains(M, r):
        M = M @ P
        k += 1
        if k > bound:
            raise ArithmeticError("stabilizer power scan exceeded bound")
    return k


def stabilizer_generator(r: CharVec, beta: QuadVal) -> tuple[Mat2, Mat2, int]:
    """(A, P, k): P generates stab(beta) up to sign with eigenvalue > 1,
    and A = P^k is the smallest positive power lying in Gamma_r."""
    exp = hj_expand(beta)
    M = word_matrix(exp.preperiod)
    P = M @ word_matrix(exp.period) @ M.inverse()
    k = _minimal_power_in_gamma_r(P, r)
    return P**k, P, k


def reduce_pair(r: CharVec, beta: QuadVal) -> tuple[CharVec, QuadVal, Mat2]:
    """Reduced representative (r_red, beta_red, R): beta_red = R.beta purely
    periodic, r_red = {s_R(beta) R r}, R in SL2(Z)."""
    exp = hj_expand(beta)
    R = word_matrix(exp.preperiod).inverse()
    beta_red = act(R, beta)
    s = j_cocycle(R, beta).sign()
    r_red = frac_vec(R.apply_vec(r).scale(s))
    return r_red, beta_red, R


def is_reduced(r: CharVec, beta: QuadVal) -> bool:
    if beta.is_rational:
        return False
    bp = conj(beta)
    return (
        frac_vec(r) == r
        and bp > 0
        and bp < 1
        and beta > 1
    )


@dataclass
class CycleData:
    """HJ cycle record for a reduced pair (r, beta)."""

    k: int
    ell: int
    b: list[int]  # period digits, length ell
    beta_n: list[QuadVal]  # length k*ell (period ell)
    r_n: list[CharVec]  # length k*ell
    w_n: list[QuadVal]  # length k*ell
    A0n: list[Mat2]  # partial products A_{0,n}, length k*ell + 1
    P: Mat2
    A: Mat2
    r: CharVec = field(default=None)
    beta: QuadVal = field(default=None)

    def segment(self, m: int, n: int) -> Mat2:
        """A_{m,n} = A_{0,m}^{-1} A_{0,n} for 0 <= m, n <= k*ell."""
        return self.A0n[m].inverse() @ self.A0n[n]


def cycle_data(r: CharVec, beta: QuadVal) -> CycleData:
    """HJ cycle record (digits, conjugate orbit, shifted characteristics,
    elliptic shifts, segment matrices) for a reduced pair (r, beta)."""
    if not is_reduced(r, beta):
        raise ValueError("not reduced")
    if r.is_integral() and r != CharVec.of(-1, 0):
        raise ValueError("integral characteristics: use the closed form")
    exp = hj_expand(beta)
    if exp.preperiod:
        raise AssertionError("reduced beta must be purely periodic")
    b = list(exp.period)
    ell = len(b)
    P = word_matrix(b)
    k = _minimal_power_in_gamma_r(P, r)
    A = P**k

    betas = [beta]
    for n in range(ell - 1):
        betas.append((QuadVal.from_rational(b[n]) - betas[-1]).inverse())
    beta_n = [betas[n % ell] for n in range(k * ell)]

    A0n = [ID]
    for n in range(k * ell):
        A0n.append(A0n[-1] @ Mat2(b[n % ell], -1, 1, 0))

    r_n = [frac_vec(r)]
    for n in range(k * ell - 1):
        r_n.append(frac_vec(A0n[n + 1].inverse().apply_vec(r)))
    w_n = [rn.r2 * bn - QuadVal.from_rational(rn.r1) for rn, bn in zip(r_n, beta_n)]

    data = CycleData(k, ell, b, beta_n, r_n, w_n, A0n, P, A, r=r, beta=beta)
    _check_cycle(data)
    return data


def _check_cycle(cd: CycleData) -> None:
    assert all(bn >= 2 for bn in cd.b)
    for bn in cd.beta_n:
        bp = conj(bn)
        assert bp > 0 and bp < 1 and bn > 1
    for n, wn in enumerate(cd.w_n):
        assert wn > 0 and wn < cd.beta_n[n] + 1
    for n in range(len(cd.r_n) - 1):
        assert cd.r_n[n + 1].r1 == cd.r_n[n].r2 - 1
    assert cd.A0n[-1] == cd.A and cd.A == cd.P**cd.k
    assert gamma_r_contains(cd.A, cd.r)
    prod = QuadVal.from_rational(1)
    for n in range(cd.ell):
        prod = prod * cd.beta_n[n]
    assert prod == fundamental_tp_unit(cd.beta)
