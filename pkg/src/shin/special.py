"""Precision-parameterized numerics: e(z), q-Pochhammer symbols, eta, theta
functions with characteristics, the double sine function, and the cyclic
quantum dilogarithm.

All functions take a working precision ``prec`` in bits (default 128) and
evaluate with guard bits internally.  Truncations carry explicit tail
bounds: geometric for the q-products, Gaussian for the theta series, and
exponential for the double sine integral.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import mp

from .qfield import QuadVal

DEFAULT_PREC = 128
GUARD = 28


def _to_mp(x):
    """Convert exact/builtin inputs to mpmath numbers at current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, QuadVal):
        return x.to_mpf(mp)
    return mp.mpmathify(x)


def e_exp(z, prec: int = DEFAULT_PREC):
    """e(z) = exp(2 pi i z)."""
    with mp.workprec(prec + GUARD):
        return mp.expjpi(2 * _to_mp(z))


def _e(z):
    """e(z) at the ambient working precision."""
    return mp.expjpi(2 * _to_mp(z))


def qpoch_finite(w, q, n: int, prec: int = DEFAULT_PREC):
    """(w, q)_n: product of (1 - w q^k), k = 0..n-1; reciprocal for n < 0."""
    with mp.workprec(prec + GUARD):
        w, q = _to_mp(w), _to_mp(q)
        out = mp.mpf(1)
        if n >= 0:
            for k in range(n):
                out *= 1 - w * q**k
            return out
        for k in range(1, -n + 1):
            factor = 1 - w * q**-k
            if factor == 0:
                raise ZeroDivisionError("pole in finite q-Pochhammer")
            out /= factor
        return out


def qpoch_inf(w, q, prec: int = DEFAULT_PREC):
    """(w, q)_inf = prod_{k>=0} (1 - w q^k), |q| < 1, with geometric tail bound."""
    with mp.workprec(prec + GUARD):
        w, q = _to_mp(w), _to_mp(q)
        aq = abs(q)
        if aq >= 1:
            raise ValueError("|q| must be < 1")
        aw = abs(w)
        if aw == 0:
            return mp.mpf(1)
        # |w q^K| < 2^(-prec-8) guarantees the remaining product is within
        # the tail bound of 1 (first-neglected-term times geometric factor 2).
        target = -(prec + GUARD - 4) * math.log(2)
        lq = mp.log(aq)
        if lq == 0:
            raise ValueError("|q| too close to 1 for the direct product")
        K = int((target - mp.log(aw)) / lq) + 1 if aq > 0 else 1
        K = max(K, 1)
        out = mp.mpf(1)
        wq = w
        for _ in range(K):
            out *= 1 - wq
            wq *= q
        return out


def varpi(z, tau, prec: int = DEFAULT_PREC):
    """varpi(z, tau) = (e(z), e(tau))_inf for Im(tau) > 0."""
    with mp.workprec(prec + GUARD):
        return qpoch_inf(_e(z), _e(tau), prec)


def varpi_r(r, tau, prec: int = DEFAULT_PREC):
    """varpi_r(tau) = varpi(r2 tau - r1, tau)."""
    with mp.workprec(prec + GUARD):
        tau = _to_mp(tau)
        z = _to_mp(r.r2) * tau - _to_mp(r.r1)
        return varpi(z, tau, prec)


def eta(tau, prec: int = DEFAULT_PREC):
    """Dedekind eta(tau) = e(tau/24) prod_{k>=1} (1 - e(k tau))."""
    with mp.workprec(prec + GUARD):
        tau = _to_mp(tau)
        q = _e(tau)
        return _e(tau / 24) * qpoch_inf(q, q, prec)


def theta_r(r, z, tau, prec: int = DEFAULT_PREC):
    """Jacobi theta with characteristics r = (r1, r2):
    sum_n e((n + r2 + 1/2)^2 tau / 2 + (n + r2 + 1/2)(z - r1 + 1/2))."""
    with mp.workprec(prec + GUARD):
        tau, z = _to_mp(tau), _to_mp(z)
        r1, r2 = _to_mp(r.r1), _to_mp(r.r2)
        y = mp.im(tau)
        if y <= 0:
            raise ValueError("Im(tau) must be positive")
        # Gaussian decay e^{-pi y (n+c)^2}; pad for the linear z term.
        N = int(math.ceil(math.sqrt((prec + 40) * math.log(2) / (math.pi * float(y))))
                + abs(float(mp.im(z))) / float(y)) + 3
        c = r2 + mp.mpf(1) / 2
        zz = z - r1 + mp.mpf(1) / 2
        total = mp.mpc(0)
        for n in range(-N - 1, N + 1):
            m = n + c
            total += _e(m * m * tau / 2 + m * zz)
        return total


class _Char(tuple):
    """Minimal (r1, r2) carrier so theta1 can reuse theta_r."""

    @property
    def r1(self):
        return self[0]

    @property
    def r2(self):
        return self[1]


def theta1(z, tau, prec: int = DEFAULT_PREC):
    """First Jacobi theta function; theta1 = -theta_{(0,0)}."""
    return -theta_r(_Char((0, 0)), z, tau, prec)


def theta_null(r, tau, prec: int = DEFAULT_PREC):
    """theta_r(tau) = theta_r(0, tau)."""
    return theta_r(r, 0, tau, prec)


# -- double sine -------------------------------------------------------------

_T0 = mp.mpf(1) / 1024  # series/quadrature splice point


def _series_part(a, w1, w2, t0, prec):
    """integral_0^{t0} [sinh(a t)/(2 sinh(w1 t/2) sinh(w2 t/2)) - 2a/(w1 w2 t)] dt/t
    by power series: the bracket over t equals (2a/(w1 w2)) (v(t)-1)/t^2 with
    v = s(a t)/(s(w1 t/2) s(w2 t/2)), s(x) = sinh(x)/x."""
    # Work in the variable u = t^2: s(x t) = sum_k (x^2)^k u^k / (2k+1)!.
    rho = 2 * math.pi / max(float(abs(w1)) / 2, float(abs(w2)) / 2, 1e-30)
    ratio = rho / float(t0)
    if ratio < 2:
        raise ValueError("splice point too large for these periods")
    N = int(math.ceil((prec + 24) / (2 * math.log2(ratio)))) + 6

    def s_coeffs(x2):
        out = [mp.mpf(1)]
        c = mp.mpf(1)
        for k in range(1, N + 1):
            c = c * x2 / ((2 * k) * (2 * k + 1))
            out.append(c)
        return out

    sa = s_coeffs(a * a)
    s1 = s_coeffs(w1 * w1 / 4)
    s2 = s_coeffs(w2 * w2 / 4)
    u = [sum(s1[j] * s2[k - j] for j in range(k + 1)) for k in range(N + 1)]
    # v = sa / u by series division
    v = []
    for k in range(N + 1):
        acc = sa[k] - sum(u[k - j] * v[j] for j in range(k))
        v.append(acc / u[0])
    # integral = (2a/(w1 w2)) sum_{k>=1} v_k t0^{2k-1} / (2k-1)
    tot = mp.mpc(0)
    t0sq = t0 * t0
    power = t0
    for k in range(1, N + 1):
        tot += v[k] * power / (2 * k - 1)
        power *= t0sq
    return 2 * a / (w1 * w2) * tot


def dsine(z, omega1, omega2, prec: int = DEFAULT_PREC):
    """Double sine S2(z; omega1, omega2), Re(omega_i) > 0.

    The value in the strip 0 < Re z < Re(omega1 + omega2) comes from the
    subtracted sinh integral (series splice below t0, tanh-sinh quadrature
    above, exponential truncation); outside the strip, quasiperiodicity
    steps of omega1/omega2 accumulate exact 2 sin factors.
    """
    with mp.workprec(prec + GUARD + 16):
        z = _to_mp(z)
        w1, w2 = _to_mp(omega1), _to_mp(omega2)
        if mp.re(w1) <= 0 or mp.re(w2) <= 0:
            raise ValueError("periods must have positive real part")
        sig = w1 + w2
        # center the argument: keep Re(z) within the middle half of the strip
        lo, hi = mp.re(sig) / 4, 3 * mp.re(sig) / 4
        factor = mp.mpc(1)
        # shift by the period of smaller real part for finer control
        step, other = (w1, w2) if mp.re(w1) <= mp.re(w2) else (w2, w1)
        while mp.re(z) < lo:
            # S2(z) = S2(z + step) * 2 sin(pi z / other)
            s = 2 * mp.sinpi(z / other)
            if s == 0:
                raise ZeroDivisionError("pole/zero of S2")
            factor *= s
            z += step
        while mp.re(z) > hi:
            z -= step
            s = 2 * mp.sinpi(z / other)
            if s == 0:
                raise ZeroDivisionError("pole/zero of S2")
            factor /= s
        a = sig / 2 - z

        head = _series_part(a, w1, w2, _T0, prec)

        decay = float(mp.re(sig) / 2 - abs(mp.re(a)))
        T = mp.mpf((prec + GUARD + 24) * math.log(2) / max(decay, 1e-12)) + 4

        def h(t):
            return mp.sinh(a * t) / (2 * mp.sinh(w1 * t / 2) * mp.sinh(w2 * t / 2) * t)

        mid = mp.quad(h, [_T0, 1, float(T) / 4, T], maxdegree=10)
        tail_sub = 2 * a / (w1 * w2 * _T0)  # exact integral of the subtracted pole
        integral = head + mid - tail_sub
        return factor * mp.exp(-integral)


def dsine_tau(z, tau, prec: int = DEFAULT_PREC):
    """Sin2(z, tau) = S2(z; tau, 1)."""
    return dsine(z, tau, 1, prec)


def cyclic_qdl(n: int, m: int, w, prec: int = DEFAULT_PREC):
    """Cyclic quantum dilogarithm D_zeta(w) = prod_{k=1}^{n-1} (1 - zeta^k w)^k,
    zeta = e(m/n), gcd(m, n) = 1."""
    if n <= 0 or math.gcd(m, n) != 1:
        raise ValueError("need n > 0 and gcd(m, n) = 1")
    with mp.workprec(prec + GUARD):
        w = _to_mp(w)
        out = mp.mpc(1)
        for k in range(1, n):
            factor = 1 - _e(Fraction(m * k, n)) * w
            if factor == 0:
                raise ZeroDivisionError("vanishing factor in cyclic qdl")
            out *= factor**k
        return out


def cyclic_qdl_root(n: int, m: int, w, root_den: int, prec: int = DEFAULT_PREC):
    """D_zeta(w)^{-1/root_den} with the principal branch applied factor by
    factor: prod_{k=1}^{n-1} (1 - zeta^k w)^{-k/root_den}."""
    if n <= 0 or math.gcd(m, n) != 1:
        raise ValueError("need n > 0 and gcd(m, n) = 1")
    with mp.workprec(prec + GUARD):
        w = _to_mp(w)
        out = mp.mpc(1)
        for k in range(1, n):
            factor = 1 - _e(Fraction(m * k, n)) * w
            if factor == 0:
                raise ZeroDivisionError("vanishing factor in cyclic qdl")
            out *= mp.exp(-mp.mpf(k) / root_den * mp.log(factor))
        return out
