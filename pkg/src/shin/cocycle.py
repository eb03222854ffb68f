"""The Shintani-Faddeev Jacobi and modular cocycles.

sigma is the coboundary ratio of q-Pochhammer values on the upper half-plane;
sigma_continued evaluates its meromorphic continuation down to (and below)
the real axis by the T^k S factorization recursion, with the base case
expressed through the double sine function.  shin is the modular cocycle
with rational characteristics r, and shin_rm computes its stable value at a
real quadratic fixed point as a finite product of double sine values with an
exact root-of-unity phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp

from .characters import chi_r, psi_eta
from .modgroup import (
    CharVec,
    CycleData,
    Mat2,
    act,
    cycle_data,
    gamma_r_contains,
    j_cocycle,
    reduce_pair,
    stabilizer_generator,
)
from .qfield import QuadVal
from .special import (
    DEFAULT_PREC,
    GUARD,
    _to_mp,
    cyclic_qdl_root,
    dsine,
    e_exp,
    qpoch_finite,
    varpi,
)

# direct q-product evaluation is refused beyond this many factors; the
# continuation recursion takes over instead
_MAX_PRODUCT_TERMS = 400_000


def _product_terms(tau, prec: int) -> float:
    """Estimated number of q-product factors needed at this height."""
    y = float(mp.im(tau))
    if y <= 0:
        return math.inf
    return (prec + GUARD + 8) * math.log(2) / (2 * math.pi * y)


def _symp_t(r: CharVec, tau):
    """<r | tau> = r2 tau - r1."""
    return _to_mp(r.r2) * tau - _to_mp(r.r1)


def sigma_s(z, tau, prec: int = DEFAULT_PREC):
    """sigma_S(z, tau) = e((tau - 3 + 1/tau)/24 + (tau - z)(1 - z)/(4 tau))
    * (1 - e(z/tau)) / Sin2(z, tau), valid on Re(tau) > 0 (both half-planes
    and the positive real axis)."""
    with mp.workprec(prec + GUARD):
        z, tau = _to_mp(z), _to_mp(tau)
        if mp.re(tau) > 0:
            pref = mp.expjpi(2 * ((tau - 3 + 1 / tau) / 24 + (tau - z) * (1 - z) / (4 * tau)))
            return pref * (1 - mp.expjpi(2 * z / tau)) / dsine(z, tau, 1, prec)
        if mp.im(tau) > 0:
            return sigma(CharVec.of(0, 0), Mat2(0, -1, 1, 0), z, tau, prec)
        raise ValueError("sigma_S needs Re(tau) > 0 or Im(tau) > 0")


def sigma(m: CharVec, A: Mat2, z, tau, prec: int = DEFAULT_PREC):
    """Direct-ratio Jacobi coboundary on the upper half-plane:
    sigma_{m,A}(z, tau) = varpi(z/j_A(tau) + <m|A.tau>, A.tau) / varpi(z, tau)."""
    with mp.workprec(prec + GUARD):
        z, tau = _to_mp(z), _to_mp(tau)
        if mp.im(tau) <= 0:
            raise ValueError("Im(tau) must be positive")
        j = j_cocycle(A, tau)
        atau = act(A, tau)
        num = varpi(z / j + _symp_t(m, atau), atau, prec)
        den = varpi(z, tau, prec)
        if den == 0:
            raise ZeroDivisionError("pole of sigma")
        return num / den


def _in_domain(A: Mat2, tau) -> bool:
    """Membership of tau in the continuation domain of sigma_A."""
    if mp.im(tau) != 0:
        return mp.im(tau) > 0 or A.c != 0 or A.d > 0
    x = mp.re(tau)
    if A.c > 0:
        return x > mp.mpf(-A.d) / A.c
    if A.c < 0:
        return x < mp.mpf(-A.d) / A.c
    return A.d > 0


def sigma_continued(A: Mat2, z, tau, prec: int = DEFAULT_PREC):
    """Meromorphic continuation of sigma_A (m = 0) by the recursion
    A = T^k S B with 0 <= c' < c, terminating at upper triangular matrices."""
    with mp.workprec(prec + GUARD):
        z, tau = _to_mp(z), _to_mp(tau)
        if not _in_domain(A, tau):
            raise ValueError("outside continuation domain")
        if A.c == 0:
            if A.d > 0:
                return mp.mpc(1)
            # a = d = -1: direct ratio, upper half-plane only
            return varpi(-z, tau, prec) / varpi(z, tau, prec)
        if A.c < 0:
            Ainv = A.inverse()
            val = sigma_continued(Ainv, z / j_cocycle(A, tau), act(A, tau), prec)
            return 1 / val
        # c > 0: peel off one T^k S factor; c' = ck - a strictly less than c
        k = -((-A.a) // A.c)
        B = Mat2(A.c, A.d, A.c * k - A.a, A.d * k - A.b)
        assert 0 <= B.c < A.c, "recursion must strictly reduce c"
        head = sigma_s(z / j_cocycle(B, tau), act(B, tau), prec)
        return head * sigma_continued(B, z, tau, prec)


def _shin_direct(r: CharVec, A: Mat2, tau, prec: int):
    """varpi_r(A.tau)/varpi_r(tau) by honest q-products (generic r)."""
    atau = act(A, tau)
    num = varpi(_symp_t(r, atau), atau, prec)
    den = varpi(_symp_t(r, tau), tau, prec)
    if den == 0:
        raise ZeroDivisionError("pole of shin")
    return num / den


def _shin_integral_r(r: CharVec, A: Mat2, tau, prec: int):
    """shin for integral characteristics.  For r2 >= 1 the ratio is literal;
    for r2 <= 0 the vanishing factor is removed by the z->0 limit, which
    contributes one factor of j_A(tau) per crossing of r2 = 0."""
    n2 = int(r.r2)
    q, qt = mp.expjpi(2 * tau), mp.expjpi(2 * act(A, tau))
    base = _shin_direct(CharVec.of(0, max(n2, 1)), A, tau, prec)
    val = base
    # walk r2 from max(n2, 1) down to n2, one unit at a time
    for m in range(max(n2, 1) - 1, n2 - 1, -1):
        if m == 0:
            val = val / j_cocycle(A, tau)
        else:
            val = val * (1 - qt**m) / (1 - q**m)
    return val


def shin_tau(r: CharVec, A: Mat2, tau, prec: int = DEFAULT_PREC, method: str = "auto"):
    """Shintani-Faddeev modular cocycle shin^r_A(tau) on the upper half-plane.

    method "product" forces the direct q-product ratio, "continued" the
    recursion route through sigma_continued; "auto" uses the product when
    the heights of tau and A.tau keep it feasible.
    """
    with mp.workprec(prec + GUARD):
        tau = _to_mp(tau)
        if mp.im(tau) <= 0:
            raise ValueError("Im(tau) must be positive")
        if not gamma_r_contains(A, r):
            raise ValueError("A is not in Gamma_r")
        if r.is_integral():
            return _shin_integral_r(r, A, tau, prec)
        if method not in ("auto", "product", "continued"):
            raise ValueError("unknown method")
        if method != "continued":
            cost = _product_terms(tau, prec) + _product_terms(act(A, tau), prec)
            if method == "product" or cost < _MAX_PRODUCT_TERMS:
                return _shin_direct(r, A, tau, prec)
        # continuation route: pull the characteristics through A^{-1} and
        # evaluate the Jacobi cocycle, correcting by a finite q-Pochhammer
        rinv = A.inverse().apply_vec(r)
        m2 = r.r2 - rinv.r2
        if m2.denominator != 1:
            raise ValueError("A is not in Gamma_r")
        z0 = _symp_t(rinv, tau)
        poch = qpoch_finite(mp.expjpi(2 * z0), mp.expjpi(2 * tau), int(m2), prec)
        return poch * sigma_continued(A, z0, tau, prec)


@dataclass
class RMValue:
    """Stable (real multiplication) value of shin and its square invariant."""

    shin: object
    samech: object
    U1: object
    gamma24: Optional[Fraction]
    lambda4: Optional[Fraction]
    A: Mat2
    P: Mat2
    k: int
    cycle: Optional[CycleData]
    reduced_r: Optional[CharVec]
    reduced_beta: Optional[QuadVal]
    det_R: int
    trivial: Optional[str] = None


def _quad_to_fraction(x: QuadVal) -> Fraction:
    if x.q != 0:
        raise ValueError("irrational value where a rational was expected")
    return Fraction(x.p, x.s)


def rm_phase_parts(cd: CycleData) -> tuple[Fraction, Fraction]:
    """Exact phase exponents (gamma/24, lambda/4) of the RM product formula."""
    kl = cd.k * cd.ell
    gamma24 = Fraction(cd.k * sum(cd.b) - 3 * kl, 24)
    total = QuadVal.from_rational(0)
    for bn, wn in zip(cd.beta_n, cd.w_n):
        total = total + (bn - wn) * (QuadVal.from_rational(1) - wn) / bn
    lambda4 = _quad_to_fraction(total) / 4
    return gamma24, lambda4


def shin_rm(r: CharVec, beta: QuadVal, prec: int = DEFAULT_PREC) -> RMValue:
    """Stable value shin^r[beta] at a real quadratic point, via the HJ cycle
    product of double sine values; integral r uses the closed unit form."""
    if beta.is_rational:
        raise ValueError("beta must be a real quadratic irrational")
    A, P, k = stabilizer_generator(r, beta)
    with mp.workprec(prec + GUARD):
        if r.is_integral():
            eps = QuadVal.from_rational(A.c) * beta + A.d  # = j_A(beta), exact
            assert eps > 1
            root = mp.sqrt(eps.to_mpf(mp))
            psi = psi_eta(A).value(mp)
            shin = psi * root if r.r2 > 0 else psi / root
            samech = (chi_r(r, A).inverse() * (psi_eta(A) ** 2).inverse()).value(mp) * shin**2
            return RMValue(
                shin=shin, samech=samech, U1=None, gamma24=None, lambda4=None,
                A=A, P=P, k=k, cycle=None, reduced_r=None, reduced_beta=None,
                det_R=1, trivial="integral characteristics (unit closed form)",
            )
        r_red, beta_red, R = reduce_pair(r, beta)
        cd = cycle_data(r_red, beta_red)
        gamma24, lambda4 = rm_phase_parts(cd)
        U1 = mp.mpf(1)
        for bn, wn in zip(cd.beta_n, cd.w_n):
            U1 *= mp.re(dsine(wn.to_mpf(mp), bn.to_mpf(mp), 1, prec))
        shin = e_exp(gamma24 + lambda4, prec) / U1
        if R.det() == -1:
            shin = mp.conj(shin)
        samech = 1 / (U1 * U1)
        return RMValue(
            shin=shin, samech=samech, U1=U1, gamma24=gamma24, lambda4=lambda4,
            A=A, P=P, k=k, cycle=cd, reduced_r=r_red, reduced_beta=beta_red,
            det_R=R.det(),
        )


def shin_rm_via_limit(r: CharVec, beta: QuadVal, y, prec: int = DEFAULT_PREC):
    """shin^r_{A}(beta + iy) for the stabilizer A; tends to shin_rm as y->0."""
    A, _, _ = stabilizer_generator(r, beta)
    with mp.workprec(prec + GUARD):
        tau = beta.to_mpf(mp) + mp.mpc(0, 1) * _to_mp(y)
        return shin_tau(r, A, tau, prec)


def varpi_r_lifted(r: CharVec, beta: QuadVal, tau, prec: int = DEFAULT_PREC):
    """varpi_r(tau) for tau extremely close to the RM point beta: repeatedly
    lift tau away from the real axis with the stabilizer (each lift multiplies
    the height by j_A(beta)^2) and accumulate the shin factors."""
    A, _, _ = stabilizer_generator(r, beta)
    Ainv = A.inverse()
    with mp.workprec(prec + GUARD):
        tau = _to_mp(tau)
        factor = mp.mpc(1)
        while _product_terms(tau, prec) > _MAX_PRODUCT_TERMS:
            tau = act(Ainv, tau)
            factor *= shin_tau(r, A, tau, prec)
        return factor * varpi(_symp_t(r, tau), tau, prec)


def shin_rational_tau(A: Mat2, z, m: int, n: int, prec: int = DEFAULT_PREC):
    """sigma_A(z, m/n) at a rational point of the real axis, as a ratio of
    branch-consistent cyclic-quantum-dilogarithm roots."""
    if n <= 0 or math.gcd(m, n) != 1:
        raise ValueError("need n > 0 and gcd(m, n) = 1")
    nt = A.c * m + A.d * n
    if nt <= 0:
        raise ValueError("j_A(m/n) must be positive")
    mt = A.a * m + A.b * n
    if math.gcd(mt, nt) != 1:
        raise ValueError("transformed point is not in lowest terms")
    with mp.workprec(prec + GUARD):
        z = _to_mp(z)
        if mp.im(z) <= 0:
            raise ValueError("Im(z) must be positive")
        num = cyclic_qdl_root(nt, mt % nt, mp.expjpi(2 * n * z / nt), nt, prec)
        den = cyclic_qdl_root(n, m % n, mp.expjpi(2 * z), n, prec)
        return num / den


def shin_rm_power(r: CharVec, beta: QuadVal, M: Mat2, prec: int = DEFAULT_PREC):
    """Stable value shin^r_M(beta) for any M in Gamma_r stabilizing beta:
    M must be a positive power of the minimal stabilizer A, and the cocycle
    law at a fixed point gives shin^r_{A^j} = (shin^r_A)^j."""
    v = shin_rm(r, beta, prec)
    A = v.A
    cand, j = A, 1
    while cand != M:
        cand = cand @ A
        j += 1
        if j > 64:
            raise ValueError("M is not a positive power of the stabilizer")
    return v.shin**j


def _random_beta(rng) -> QuadVal:
    from .qfield import squarefree_decompose

    while True:
        d = rng.randrange(2, 40)
        _, D = squarefree_decompose(d)
        if D == 1:
            continue
        p = rng.randrange(-6, 7)
        q = rng.choice([1, 1, 1, 2])
        s = rng.choice([1, 1, 2, 3])
        return QuadVal.make(D, p, q, s)


def _random_char(rng) -> CharVec:
    while True:
        den = rng.choice([3, 4, 5, 6, 7, 8])
        r = CharVec.of(
            Fraction(rng.randrange(-den, den), den),
            Fraction(rng.randrange(-den, den), den),
        )
        if not r.is_integral():
            return r


def verify_rm_identities(seed: int = 0, count: int = 5, prec: int = DEFAULT_PREC) -> dict:
    """Numerically exercise the functional equations of the RM values and of
    the cocycle on the upper half-plane; returns max deviations per identity."""
    import random

    rng = random.Random(seed)
    tol_exact = mp.mpf(2) ** (-prec + 16)
    report: dict[str, dict] = {}

    def record(name, dev):
        entry = report.setdefault(name, {"max_deviation": mp.mpf(0), "count": 0})
        entry["max_deviation"] = max(entry["max_deviation"], abs(dev))
        entry["count"] += 1

    with mp.workprec(prec + GUARD):
        for _ in range(count):
            beta = _random_beta(rng)
            r = _random_char(rng)
            v = shin_rm(r, beta, prec)
            vneg = shin_rm(CharVec.of(-r.r1, -r.r2), beta, prec)
            # character pairing at the fixed point
            rhs = (psi_eta(v.A) ** 2 * chi_r(r, v.A)).value(mp)
            record("shin_neg_pairing", v.shin * vneg.shin - rhs)
            # samech inverse pairing and positivity
            record("samech_pairing", v.samech * vneg.samech - 1)
            record("samech_positive", min(mp.re(v.samech), 0) + abs(mp.im(mp.mpc(v.samech))))
            # integer shifts of the characteristics
            n1, n2 = rng.randrange(-3, 4), rng.randrange(-3, 4)
            vs = shin_rm(r.shift(n1, n2), beta, prec)
            record("invariance_shift", vs.shin - v.shin)
            # GL2 invariance of samech
            R = _random_gl2(rng)
            sR = (QuadVal.from_rational(R.c) * beta + R.d).sign()
            Rr = R.apply_vec(r)
            vR = shin_rm(CharVec.of(sR * Rr.r1, sR * Rr.r2), act(R, beta), prec)
            record("samech_gl2", vR.samech - v.samech)

        done = 0
        while done < count:
            # upper half-plane identities; skip stabilizers so large that the
            # direct product at moderate height is out of reach
            beta = _random_beta(rng)
            r = _random_char(rng)
            A, _, _ = stabilizer_generator(r, beta)
            if max(abs(x) for x in A.entries()) > 400:
                continue
            done += 1
            tau = mp.mpc(rng.uniform(-1.5, 1.5), rng.uniform(0.2, 1.2))
            sh = shin_tau(r, A, tau, prec, method="product")
            # relation to the Jacobi cocycle (finite q-Pochhammer correction)
            rinv = A.inverse().apply_vec(r)
            m2 = int(r.r2 - rinv.r2)
            z0 = _symp_t(rinv, tau)
            poch = qpoch_finite(mp.expjpi(2 * z0), mp.expjpi(2 * tau), m2, prec)
            record("sigma_factorization", sh - poch * sigma(CharVec.of(0, 0), A, z0, tau, prec))
            # r / -r functional equation off the fixed point
            shn = shin_tau(
                CharVec.of(-r.r1, -r.r2), A, tau, prec, method="product")
            atau = act(A, tau)
            quot = (mp.expjpi(_symp_t(r, atau)) - mp.expjpi(-_symp_t(r, atau))) / (
                mp.expjpi(_symp_t(r, tau)) - mp.expjpi(-_symp_t(r, tau)))
            rhs = (psi_eta(A) ** 2 * chi_r(r, A)).value(mp) * mp.expjpi(
                2 * (Fraction(r.r2**2, 2) + Fraction(1, 12)) * (tau - atau)) * quot
            record("off_point_pairing", sh * shn - rhs)

        # conductor-lowering at f=2: beta = 2*alpha, B = diag(2,1)
        alpha = QuadVal.sqrt_of(3)
        B = Mat2(2, 0, 0, 1)
        r0 = CharVec.of(Fraction(0), Fraction(1, 3))
        _, P_a, _ = stabilizer_generator(r0, alpha)
        A = P_a
        needed = [CharVec.of(Fraction(r0.r1, 2), r0.r2),
                  CharVec.of(Fraction(r0.r1 + 1, 2), r0.r2)]
        while A.c % 2 or not all(gamma_r_contains(A, s) for s in needed):
            A = A @ P_a
        BAB = Mat2(A.a, 2 * A.b, A.c // 2, A.d)
        assert (B @ A).entries() == (BAB @ B).entries()
        lhs = shin_rm_power(r0, act(B, alpha), BAB, prec)
        rhs = mp.mpc(1)
        for s in needed:
            rhs *= shin_rm_power(s, alpha, A, prec)
        record("index2_coset_product", lhs - rhs)

    for entry in report.values():
        entry["pass"] = bool(entry["max_deviation"] < tol_exact * 2**12)
        entry["max_deviation"] = float(entry["max_deviation"])
    return report


def _random_gl2(rng) -> Mat2:
    from .modgroup import S, T

    M = Mat2(1, 0, 0, 1)
    for _ in range(rng.randrange(1, 7)):
        M = M @ (T if rng.random() < 0.6 else S)
        if rng.random() < 0.3:
            M = M @ Mat2(1, -1, 0, 1)
    if rng.random() < 0.5:
        M = M @ Mat2(1, 0, 0, -1)
    return M
