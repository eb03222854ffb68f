"""Tangedal double sine invariants and the differenced partial zeta
derivative Z'(0) attached to a characteristics/real-quadratic pair.

U^(1) and U^(2) are finite products of double sine values over the HJ cycle
at the two real embeddings; Z' at s=0 is recovered as -log(U1*U2) (both
infinite places ramified) and as -t*log(U1) (second place only), where the
multiplicity t in {1,2} is decided exactly from unit data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from mpmath import mp

from .modgroup import CharVec, Mat2, cycle_data, frac_vec, reduce_pair, stabilizer_generator
from .qfield import QuadVal, conj, fundamental_tp_unit, norm_trace
from .special import DEFAULT_PREC, GUARD, dsine


def tangedal_u(r: CharVec, beta: QuadVal, embedding: int, prec: int = DEFAULT_PREC):
    """U^(j) = prod over the HJ cycle of Sin2(rho_j(w_n), rho_j(beta_n))."""
    if embedding not in (1, 2):
        raise ValueError("embedding must be 1 or 2")
    if r.is_integral():
        raise ValueError("integral characteristics have no Tangedal invariant")
    r_red, beta_red, _ = reduce_pair(r, beta)
    cd = cycle_data(r_red, beta_red)
    with mp.workprec(prec + GUARD):
        out = mp.mpf(1)
        for bn, wn in zip(cd.beta_n, cd.w_n):
            if embedding == 2:
                bn, wn = conj(bn), conj(wn)
            out *= mp.re(dsine(wn.to_mpf(mp), bn.to_mpf(mp), 1, prec))
        return out


def _fundamental_unit(beta: QuadVal) -> tuple[QuadVal, int]:
    """Fundamental unit eta0 > 1 of the order (beta Z + Z : beta Z + Z),
    returned with its norm in {+1, -1}.

    The smallest totally positive unit eps > 1 is either eta0 itself
    (norm +1) or eta0^2 (norm -1); the latter happens exactly when
    trace(eps) - 2 is a perfect square t^2 with (t + sqrt(t^2+4))/2 in the
    order.
    """
    eps = fundamental_tp_unit(beta)
    n_eps, t_eps = norm_trace(eps)
    assert n_eps == 1
    T = Fraction(t_eps)
    if T.denominator == 1 and T >= 2:
        t2 = int(T) - 2
        t = isqrt(t2)
        if t * t == t2:
            # candidate eta0 = (t + sqrt(t^2 + 4))/2 with norm -1
            f, d = _sqrt_decompose(t * t + 4)
            cand = (QuadVal.from_rational(t) + QuadVal.make(d, 0, f, 1)) / 2
            if cand * cand == eps and _in_multiplier_ring(cand, beta):
                return cand, -1
    return eps, 1


def _sqrt_decompose(n: int) -> tuple[int, int]:
    from .qfield import squarefree_decompose

    return squarefree_decompose(n)


def _coords_in_basis(x: QuadVal, beta: QuadVal) -> Optional[tuple[Fraction, Fraction]]:
    """Write x = a*beta + b with rational a, b (unique since beta irrational)."""
    # beta = (p + q sqrt(D))/s, x = (px + qx sqrt(D))/sx on a common D
    if x.is_rational:
        return Fraction(0), x.as_fraction()
    if x.D != beta.D:
        return None
    a = Fraction(x.q * beta.s, x.s * beta.q)
    b = Fraction(x.p, x.s) - a * Fraction(beta.p, beta.s)
    return a, b


def _in_multiplier_ring(x: QuadVal, beta: QuadVal) -> bool:
    """Does x satisfy x*(beta Z + Z) <= beta Z + Z?"""
    for y in (x * beta, x):
        co = _coords_in_basis(y, beta)
        if co is None or co[0].denominator != 1 or co[1].denominator != 1:
            return False
    return True


def _mult_matrix(eta: QuadVal, beta: QuadVal) -> Mat2:
    """Integer matrix of multiplication by eta on the basis (beta, 1)."""
    a, b = _coords_in_basis(eta * beta, beta)
    c, d = _coords_in_basis(eta, beta)
    assert all(v.denominator == 1 for v in (a, b, c, d))
    return Mat2(int(a), int(b), int(c), int(d))


def determine_t(r: CharVec, beta: QuadVal) -> tuple[int, str]:
    """Multiplicity t in {1, 2} of the ray class under forgetting the first
    infinite place, decided from exact unit data; returns (t, witness)."""
    eta0, norm = _fundamental_unit(beta)
    if norm == 1:
        return 2, "fundamental unit has norm +1"
    _, P, k = stabilizer_generator(r, beta)
    B0 = _mult_matrix(eta0, beta)
    assert B0.det() == -1
    M = B0
    for j in range(k):
        s = (QuadVal.from_rational(M.c) * beta + M.d).sign()
        Mr = M.apply_vec(r)
        cand = CharVec.of(s * Mr.r1, s * Mr.r2)
        if frac_vec(cand) == frac_vec(r):
            return 1, f"unit matrix witness B0*P^{j} (sign {s})"
        M = M @ P
    return 2, "norm -1 unit exists but no matrix witness fixes r"


@dataclass
class ZetaReport:
    U1: object
    U2: object
    Zprime_both: object
    Zprime_inf2: object
    t: int
    n: int
    method_t: str


def z_prime(r: CharVec, beta: QuadVal, prec: int = DEFAULT_PREC,
            t_override: Optional[int] = None) -> ZetaReport:
    """Differenced partial zeta derivative at s = 0 and its ingredients."""
    U1 = tangedal_u(r, beta, 1, prec)
    U2 = tangedal_u(r, beta, 2, prec)
    if t_override is not None:
        if t_override not in (1, 2):
            raise ValueError("t must be 1 or 2")
        t, method = t_override, "overridden by caller"
    else:
        t, method = determine_t(r, beta)
    with mp.workprec(prec + GUARD):
        if t == 1 and abs(U2 - 1) > mp.mpf(2) ** (-prec // 2):
            import warnings

            warnings.warn("t=1 determined but U2 is not 1; unit witness suspect")
        zb = -mp.log(U1 * U2)
        zi = -t * mp.log(U1)
    return ZetaReport(U1=U1, U2=U2, Zprime_both=zb, Zprime_inf2=zi,
                      t=t, n=2 // t, method_t=method)
