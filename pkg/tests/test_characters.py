"""Exact multiplier-system arithmetic: Dedekind sums, Rademacher phi, the
eta multiplier psi, the theta multiplier chi_r, and the kappa factor."""

import math
import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st
from mpmath import mp

from shin.characters import (
    RootOfUnity, chi_r, dedekind_sum, jacobi_symbol, kappa, phi_rademacher,
    psi_eta, psi_squared,
)
from shin.cocycle import _random_beta, _random_char
from shin.modgroup import CharVec, Mat2, S, T, stabilizer_generator
from shin.special import eta


def _rand_sl2(rng) -> Mat2:
    M = Mat2(1, 0, 0, 1)
    for _ in range(rng.randrange(1, 9)):
        M = M @ (T if rng.random() < 0.6 else S)
        if rng.random() < 0.3:
            M = M @ Mat2(1, -1, 0, 1)
    return M


@given(st.integers(-200, 200), st.integers(1, 120))
def test_dedekind_reciprocity(h, k):
    if math.gcd(h, k) != 1:
        return
    h %= k
    if h == 0:
        assert dedekind_sum(h, k) == 0
        return
    lhs = dedekind_sum(h, k) + dedekind_sum(k, h)
    rhs = Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k)
    assert lhs == rhs


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_jacobi_symbol_matches_euler(a, n):
    n = 2 * abs(n) + 1  # odd positive
    j = jacobi_symbol(a, n)
    if math.gcd(a, n) > 1:
        assert j == 0
    else:
        assert j in (-1, 1)
    # multiplicativity in the top argument
    assert jacobi_symbol(a * a, n) == j * j


def test_phi_generators():
    for n in range(-5, 6):
        assert phi_rademacher(Mat2(1, n, 0, 1)) == n
    assert phi_rademacher(Mat2(0, -1, 1, 0)) == 0


def test_phi_conjugation_class_function_mod_boundary():
    # phi(A) - phi(BAB^-1) vanishes for B = T (translation conjugation)
    rng = random.Random(2)
    for _ in range(50):
        A = _rand_sl2(rng)
        if A.c == 0:
            continue
        B = T
        assert phi_rademacher(B @ A @ B.inverse()) == phi_rademacher(A)


def test_psi_against_eta_oracle():
    rng = random.Random(9)
    prec = 128
    with mp.workprec(prec + 30):
        for _ in range(25):
            A = _rand_sl2(rng)
            tau = mp.mpc(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.5))
            j = A.c * tau + A.d
            atau = (A.a * tau + A.b) / j
            lhs = eta(atau, prec)
            rhs = psi_eta(A).value(mp) * mp.sqrt(j) * eta(tau, prec)
            assert abs(lhs - rhs) < mp.mpf(2) ** (-prec + 10) * abs(lhs)


def test_psi_squared_homomorphism():
    rng = random.Random(13)
    for _ in range(200):
        A, B = _rand_sl2(rng), _rand_sl2(rng)
        assert psi_squared(A @ B) == psi_squared(A) * psi_squared(B)
        assert psi_squared(A) == psi_eta(A) ** 2


def test_chi_r_homomorphism_on_gamma_r():
    rng = random.Random(4)
    done = 0
    while done < 100:
        r = _random_char(rng)
        A1, _, _ = stabilizer_generator(r, _random_beta(rng))
        A2, _, _ = stabilizer_generator(r, _random_beta(rng))
        if max(abs(x) for x in A1.entries() + A2.entries()) > 10**30:
            continue
        assert chi_r(r, A1 @ A2) == chi_r(r, A1) * chi_r(r, A2)
        done += 1


def test_chi_r_values():
    # T^5 fixes r = (0, 4/5); direct hand evaluation of the closed form
    r = CharVec.of(Fraction(0), Fraction(4, 5))
    assert chi_r(r, Mat2(1, 5, 0, 1)) == RootOfUnity.of(Fraction(3, 5))
    assert chi_r(r, Mat2(26, 45, 15, 26)) == RootOfUnity.of(Fraction(2, 5))


def test_kappa_cocycle_law():
    rng = random.Random(17)
    for _ in range(200):
        A, B = _rand_sl2(rng), _rand_sl2(rng)
        r = _random_char(rng)
        assert kappa(A @ B, r) == kappa(A, B.apply_vec(r)) * kappa(B, r)


def test_root_of_unity_arithmetic():
    w = RootOfUnity.of(Fraction(5, 12))
    assert w * w.inverse() == RootOfUnity.of(0)
    assert w ** 12 == RootOfUnity.of(0)
    assert w.conjugate() == w.inverse()
    with mp.workprec(80):
        assert abs(w.value(mp) - mp.expjpi(mp.mpf(5) / 6)) < mp.mpf(2) ** -70
