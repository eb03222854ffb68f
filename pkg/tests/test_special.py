"""Numerical oracles for the analytic layer: eta/theta transformation laws,
Jacobi triple products, q-product identities, the double sine function, and
the cyclic quantum dilogarithm."""

import random
from fractions import Fraction

from mpmath import mp

from shin.characters import chi_r, kappa, psi_eta
from shin.cocycle import _random_char
from shin.modgroup import CharVec, Mat2, S, T, act, gamma_r_contains, j_cocycle
from shin.special import (
    GUARD, cyclic_qdl, cyclic_qdl_root, dsine, dsine_tau, e_exp, eta,
    qpoch_finite, qpoch_inf, theta1, theta_null, theta_r, varpi, varpi_r,
)

PREC = 128
TOL = mp.mpf(2) ** (-PREC + 12)


def _rand_sl2(rng) -> Mat2:
    M = Mat2(1, 0, 0, 1)
    for _ in range(rng.randrange(1, 9)):
        M = M @ (T if rng.random() < 0.6 else S)
        if rng.random() < 0.3:
            M = M @ Mat2(1, -1, 0, 1)
    return M


def _rand_tau(rng):
    return mp.mpc(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.4))


def test_eta_transformation_law():
    rng = random.Random(101)
    with mp.workprec(PREC + GUARD):
        for _ in range(20):
            A = _rand_sl2(rng)
            tau = _rand_tau(rng)
            j = j_cocycle(A, tau)
            lhs = eta(act(A, tau), PREC)
            rhs = psi_eta(A).value(mp) * mp.sqrt(j) * eta(tau, PREC)
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_theta1_transformation_law():
    rng = random.Random(102)
    with mp.workprec(PREC + GUARD):
        for _ in range(20):
            A = _rand_sl2(rng)
            tau = _rand_tau(rng)
            z = mp.mpc(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4))
            j = j_cocycle(A, tau)
            lhs = theta1(z / j, act(A, tau), PREC)
            rhs = (psi_eta(A).value(mp) ** 3 * mp.sqrt(j)
                   * mp.exp(mp.pi * 1j * A.c * z**2 / j) * theta1(z, tau, PREC))
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_theta_r_transformation_law_kappa():
    rng = random.Random(103)
    with mp.workprec(PREC + GUARD):
        for _ in range(20):
            A = _rand_sl2(rng)
            r = _random_char(rng)
            Ar = A.apply_vec(r)
            tau = _rand_tau(rng)
            z = mp.mpc(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))
            j = j_cocycle(A, tau)
            lhs = theta_r(Ar, z / j, act(A, tau), PREC)
            rhs = (psi_eta(A).value(mp) ** 3 * kappa(A, r).value(mp) * mp.sqrt(j)
                   * mp.exp(mp.pi * 1j * A.c * z**2 / j) * theta_r(r, z, tau, PREC))
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_theta_null_transformation_law_chi():
    rng = random.Random(104)
    with mp.workprec(PREC + GUARD):
        done = 0
        while done < 20:
            A = _rand_sl2(rng)
            r = _random_char(rng)
            if not gamma_r_contains(A, r):
                continue
            done += 1
            tau = _rand_tau(rng)
            j = j_cocycle(A, tau)
            lhs = theta_null(r, act(A, tau), PREC)
            rhs = (psi_eta(A).value(mp) ** 3 * chi_r(r, A).value(mp)
                   * mp.sqrt(j) * theta_null(r, tau, PREC))
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_jacobi_triple_product_plain():
    rng = random.Random(105)
    with mp.workprec(PREC + GUARD):
        for _ in range(20):
            tau = _rand_tau(rng)
            z = mp.mpc(rng.uniform(-0.7, 0.7), rng.uniform(0.05, 0.5))
            lhs = varpi(z, tau, PREC) * varpi(-z, tau, PREC)
            rhs = (-1j * e_exp(-tau / 12, PREC)
                   * (e_exp(z / 2, PREC) - e_exp(-z / 2, PREC))
                   * theta1(z, tau, PREC) / eta(tau, PREC))
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_jacobi_triple_product_characteristics():
    rng = random.Random(106)
    with mp.workprec(PREC + GUARD):
        for _ in range(20):
            r = _random_char(rng)
            r1 = mp.mpf(r.r1.numerator) / r.r1.denominator
            r2 = mp.mpf(r.r2.numerator) / r.r2.denominator
            tau = _rand_tau(rng)
            z = mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.05, 0.4))
            w = z + r2 * tau - r1
            lhs = varpi(w, tau, PREC) * varpi(-w, tau, PREC)
            rhs = (1j * mp.exp(2j * mp.pi * (-(r2**2 / 2 + mp.mpf(1) / 12) * tau
                                             - r2 * (z - r1 + mp.mpf("0.5"))))
                   * (e_exp(w / 2, PREC) - e_exp(-w / 2, PREC))
                   * theta_r(r, z, tau, PREC) / eta(tau, PREC))
            assert abs(lhs - rhs) < TOL * abs(lhs)


def test_qpoch_recurrences():
    with mp.workprec(PREC + GUARD):
        q = mp.mpc("0.31", "0.12")
        w = mp.mpc("0.4", "0.7")
        # (w,q)_inf = (1-w)(wq,q)_inf
        assert abs(qpoch_inf(w, q, PREC) - (1 - w) * qpoch_inf(w * q, q, PREC)) < TOL
        # finite/infinite splice
        n = 7
        assert abs(qpoch_inf(w, q, PREC)
                   - qpoch_finite(w, q, n, PREC) * qpoch_inf(w * q**n, q, PREC)) < TOL
        # negative count is the reciprocal shifted back
        assert abs(qpoch_finite(w, q, -3, PREC)
                   - 1 / qpoch_finite(w * q**-3, q, 3, PREC)) < TOL


def test_varpi_periodicity_and_eta_specialization():
    with mp.workprec(PREC + GUARD):
        tau = mp.mpc("0.21", "0.9")
        z = mp.mpc("0.3", "0.25")
        assert abs(varpi(z + 1, tau, PREC) - varpi(z, tau, PREC)) < TOL
        # varpi_{(0,1)}(tau) = q^{-1/24} eta(tau)
        lhs = varpi_r(CharVec.of(0, 1), tau, PREC)
        rhs = e_exp(-tau / 24, PREC) * eta(tau, PREC)
        assert abs(lhs - rhs) < TOL


def test_dsine_special_value_sqrt2():
    with mp.workprec(PREC + GUARD):
        v = dsine(mp.mpf("0.5"), 1, 1, PREC)
        assert abs(v - mp.sqrt(2)) < mp.mpf(2) ** (-PREC + 10)


def test_dsine_reflection_scaling_quasiperiodicity():
    with mp.workprec(PREC + GUARD):
        w1, w2 = mp.mpf("1"), mp.mpf("1.37")
        tol = mp.mpf(2) ** (-PREC + 10)
        for z in (mp.mpf("0.4"), mp.mpc("0.8", "0.33"), mp.mpc("1.9", "-0.2")):
            v = dsine(z, w1, w2, PREC)
            # reflection
            assert abs(v * dsine(w1 + w2 - z, w1, w2, PREC) - 1) < tol * abs(v)
            # scaling invariance
            c = mp.mpf("0.71")
            assert abs(dsine(c * z, c * w1, c * w2, PREC) - v) < tol * abs(v)
            # quasiperiodicity in each period
            up1 = dsine(z + w1, w1, w2, PREC)
            assert abs(up1 - v / (2 * mp.sin(mp.pi * z / w2))) < tol * abs(up1)
            up2 = dsine(z + w2, w1, w2, PREC)
            assert abs(up2 - v / (2 * mp.sin(mp.pi * z / w1))) < tol * abs(up2)


def test_dsine_precision_ladder():
    z = mp.mpf("0.813")
    lo = dsine(z, 1, mp.sqrt(3), PREC)
    hi = dsine(z, 1, mp.sqrt(3), PREC + 64)
    with mp.workprec(PREC + 80):
        assert abs(mp.mpc(lo) - mp.mpc(hi)) < mp.mpf(2) ** (-PREC + 6)


def test_dsine_tau_matches_dsine():
    with mp.workprec(PREC + GUARD):
        tau = mp.mpc("0.2", "1.1")
        z = mp.mpc("0.4", "0.1")
        assert abs(dsine_tau(z, tau, PREC) - dsine(z, tau, 1, PREC)) \
            < TOL * abs(dsine_tau(z, tau, PREC))


def test_cyclic_qdl_root_consistency():
    with mp.workprec(PREC + GUARD):
        n, m = 5, 2
        w = mp.expjpi(2 * mp.mpc("0.13", "0.21"))
        full = cyclic_qdl(n, m, w, PREC)
        root = cyclic_qdl_root(n, m, w, n, PREC)  # D^{-1/n}, factorwise branch
        assert abs(root**n * full - 1) < TOL
