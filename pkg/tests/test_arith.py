import math
from fractions import Fraction
from itertools import product

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mockexact.arith import (
    I,
    EpsCharacter,
    LevelData,
    QQi,
    QuadForm,
    atkin_lehner_b,
    atkin_lehner_matrix,
    gamma_infty_reps,
    heegner_point,
    psi,
    psi_group,
    star,
    unitary_divisors,
    xi_of_b,
)
from mockexact.numeric import DomainError, ctx

LEVELS = (6, 18, 24, 42, 60)


def test_unitary_divisors():
    assert unitary_divisors(6) == (1, 2, 3, 6)
    assert unitary_divisors(18) == (1, 2, 9, 18)
    assert unitary_divisors(60) == (1, 3, 4, 5, 12, 15, 20, 60)
    ld = LevelData.of(24)
    assert ld.unitary_divisors[0] == 1 and ld.unitary_divisors[-1] == 24


def test_star_examples():
    assert star(2, 3, 6) == 6
    assert star(2, 6, 6) == 3
    with pytest.raises(DomainError):
        star(2, 4, 24)


@pytest.mark.parametrize("N", LEVELS)
def test_star_is_elementary_abelian(N):
    U = unitary_divisors(N)
    for u in U:
        assert star(u, u, N) == 1
        assert star(u, 1, N) == u
    for u, v in product(U, U):
        assert star(u, v, N) == star(v, u, N)
        assert star(u, v, N) in U
    for u, v, w in product(U, U, U):
        assert star(star(u, v, N), w, N) == star(u, star(v, w, N), N)


def test_psi_examples():
    assert psi(1, 6) == 1
    assert psi(2, 6) == 7
    for N in LEVELS:
        assert psi(N, N) == 2 * N - 1
    assert {u: psi(u, 60) for u in unitary_divisors(60)} == {
        1: 1, 3: 41, 4: 31, 5: 49, 12: 71, 15: 89, 20: 79, 60: 119
    }
    with pytest.raises(DomainError):
        psi(4, 24)


@pytest.mark.parametrize("N", LEVELS)
def test_psi_is_isomorphism(N):
    U = unitary_divisors(N)
    M = 2 * N
    images = [psi(u, N) for u in U]
    assert len(set(images)) == len(U)
    for u in U:
        x = psi(u, N)
        assert x * x % M == 1
        assert (x - 1) % (M // u) == 0 and (x + 1) % (2 * u) == 0
    for u, v in product(U, U):
        assert psi(star(u, v, N), N) == psi(u, N) * psi(v, N) % M
    assert psi_group(N) == tuple(sorted(images))


def test_eps_character():
    e3 = EpsCharacter.of(3)
    assert [e3(u) for u in unitary_divisors(6)] == [1, 1, -1, -1]
    e = EpsCharacter.of(2, 3, 5)
    for u, v in product(unitary_divisors(60), repeat=2):
        assert e(star(u, v, 60)) == e(u) * e(v)
    assert e(60) == -1


def test_xi_examples():
    e3 = EpsCharacter.of(3)
    assert xi_of_b(1, 1, 6, e3) == 1
    assert xi_of_b(5, 1, 6, e3) == -1
    assert xi_of_b(3, 1, 6, e3) == 0


# -- Gaussian rationals ----------------------------------------------------------


@given(*(st.fractions(max_denominator=50) for _ in range(4)))
def test_qqi_field_ops(a, b, c, d):
    x, y = QQi(a, b), QQi(c, d)
    assert x * y == y * x
    assert x + y - y == x
    z = x * y
    assert z.re == a * c - b * d and z.im == a * d + b * c
    assert (I * I) == QQi.of(-1)
    w = x.to_mpc(128)
    with ctx(128):
        assert abs(w.real - gmpy2.mpq(a.numerator, a.denominator)) < gmpy2.exp2(-120)


# -- quadratic forms and W_u -------------------------------------------------------


def test_atkin_lehner_examples():
    Q = QuadForm(6, 1, 1)
    assert atkin_lehner_b(1, Q, 6) == 1
    assert atkin_lehner_b(6, Q, 6) == 11
    assert atkin_lehner_b(2, Q, 6) == 7
    with pytest.raises(DomainError):
        atkin_lehner_b(2, QuadForm(5, 1, 1), 6)


@pytest.mark.parametrize("N", LEVELS)
def test_atkin_lehner_matrix_shape(N):
    for u in unitary_divisors(N):
        (a, b), (c, d) = atkin_lehner_matrix(u, N)
        assert a * d - b * c == u
        assert a % u == 0 and d % u == 0 and c % N == 0 and 0 <= b < max(u, 1)


@pytest.mark.parametrize("N", LEVELS)
@settings(max_examples=100, deadline=None)
@given(k=st.integers(1, 40), b=st.integers(-500, 500), c=st.integers(-500, 500))
def test_atkin_lehner_random_forms(N, k, b, c):
    Q = QuadForm(N * k, b, c)
    for u in unitary_divisors(N):
        got = atkin_lehner_b(u, Q, N)
        moved = Q.act(atkin_lehner_matrix(u, N))
        assert moved.disc == Q.disc
        assert moved.b % (2 * N) == got == psi(u, N) * b % (2 * N)


def test_gamma_infty_reps():
    assert gamma_infty_reps(6, -23, 6) == [(6, 1), (6, 5), (6, 7), (6, 11)]
    assert gamma_infty_reps(6, -1, 100) == []
    for a, b in gamma_infty_reps(24, -71, 2400):
        assert a % 24 == 0 and 0 <= b < 2 * a and (b * b + 71) % (4 * a) == 0
    brute = [(a, b) for a in range(12, 361, 12) for b in range(2 * a) if (b * b + 47) % (4 * a) == 0]
    assert gamma_infty_reps(12, -47, 360) == brute
    with pytest.raises(DomainError):
        gamma_infty_reps(6, 5, 10)


def test_heegner_point():
    tau = heegner_point(QuadForm(6, 1, 1), 200)
    with ctx(200):
        assert abs(tau.real + gmpy2.mpfr(1) / 12) < gmpy2.exp2(-190)
        assert abs(tau.imag - gmpy2.sqrt(gmpy2.mpfr(23)) / 12) < gmpy2.exp2(-190)
    assert heegner_point(QuadForm(1, 0, 1)) == gmpy2.mpc(0, 1)
    for Q in (QuadForm(1, 3, 1), QuadForm(-1, 0, -1)):
        with pytest.raises(DomainError):
            heegner_point(Q)


@given(st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_heegner_root(a, b, c):
    Q = QuadForm(a, b, c)
    if Q.disc >= 0:
        return
    tau = heegner_point(Q, 200)
    with ctx(200):
        val = a * tau * tau + b * tau + c
        assert abs(val) < gmpy2.exp2(-180) * (1 + abs(b) + c)
        assert tau.imag > 0
        assert abs(tau.imag - gmpy2.sqrt(gmpy2.mpfr(-Q.disc)) / (2 * a)) < gmpy2.exp2(-190)
