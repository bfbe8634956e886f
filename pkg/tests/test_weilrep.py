import math
import random
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from mockexact.kloosterman import A_general
from mockexact.numeric import DomainError, ctx, divisors, e_of, mobius
from mockexact.tables import formula_spec
from mockexact.weilrep import (
    GammaElement,
    S_r_eps,
    S_weil,
    S_weil_by_gamma,
    WeilLattice,
    rho_S,
    rho_shintani,
    rho_T,
)

P = 160
TOL = gmpy2.exp2(-P + 24)


def gap(a, b):
    with ctx(P + 32):
        return abs(a - b)


def gamma(c, d, shift=0):
    a = (pow(d, -1, c) if c > 1 else 0) + shift * c
    return GammaElement(a, (a * d - 1) // c, c, d)


def test_lattice():
    lat = WeilLattice(6)
    assert lat.size == 12 and lat.level_disc == -12 and lat.signature == (0, 1)
    assert lat.q(1) == Fraction(23, 24)
    assert lat.bil(1, 1) == Fraction(11, 12)
    with pytest.raises(DomainError):
        GammaElement(1, 1, 1, 1)


def test_rho_T_and_S():
    lat = WeilLattice(6)
    assert rho_T(lat, 0, P) == 1
    assert gap(rho_T(lat, 1, P), e_of(Fraction(-1, 24), P)) < TOL
    with ctx(P):
        target = 1 / gmpy2.sqrt(mpfr(12))
    for h in range(12):
        for h2 in range(12):
            with ctx(P):
                assert abs(abs(rho_S(lat, h, h2, P)) - target) < TOL


@pytest.mark.parametrize("N", [6, 18])
def test_shintani_at_c1_is_S(N):
    lat = WeilLattice(N)
    S = GammaElement(0, -1, 1, 0)
    for h in range(2 * N):
        for h2 in range(2 * N):
            assert gap(rho_shintani(lat, h, h2, S, P), rho_S(lat, h2, h, P)) < TOL


def test_shintani_rejects_c_nonpositive():
    with pytest.raises(DomainError):
        rho_shintani(WeilLattice(6), 0, 0, GammaElement(1, 1, 0, 1), P)


def test_shintani_unitary():
    N = 6
    lat = WeilLattice(N)
    rng = random.Random(7)
    for _ in range(5):
        c = rng.randint(1, 40)
        d = rng.choice([x for x in range(-60, 60) if math.gcd(x, c) == 1])
        g = gamma(c, d, shift=rng.randint(-2, 2))
        M = [[rho_shintani(lat, h, h2, g, P) for h2 in range(2 * N)] for h in range(2 * N)]
        with ctx(P + 16):
            for j in range(2 * N):
                for k in range(2 * N):
                    dot = sum(M[h][j].conjugate() * M[h][k] for h in range(2 * N))
                    assert abs(dot - (1 if j == k else 0)) < TOL


def test_T_times_gamma():
    lat = WeilLattice(6)
    rng = random.Random(3)
    for _ in range(10):
        c = rng.randint(1, 50)
        d = rng.choice([x for x in range(1, 100) if math.gcd(x, c) == 1])
        g = gamma(c, d)
        tg = GammaElement(g.a + g.c, g.b + g.d, g.c, g.d)
        for h in range(12):
            h2 = rng.randrange(12)
            with ctx(P):
                want = rho_T(lat, h, P) * rho_shintani(lat, h, h2, g, P)
            assert gap(rho_shintani(lat, h, h2, tg, P), want) < TOL


# -- Kloosterman sums -----------------------------------------------------------


def admissible(N, h, k):
    return h * h + 4 * N * k


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([6, 18, 24]),
    st.integers(0, 100),
    st.integers(0, 100),
    st.integers(-20, 20),
    st.integers(-20, 5),
    st.integers(1, 30),
)
def test_conjugation_law(N, ha, hb, ka, kb, c):
    lat = WeilLattice(N)
    ha, hb = ha % (2 * N), hb % (2 * N)
    m, n = admissible(N, ha, ka), admissible(N, hb, kb)
    with ctx(P):
        assert gap(S_weil(lat, ha, hb, m, n, -c, P), S_weil(lat, ha, hb, m, n, c, P).conjugate()) < TOL


@pytest.mark.parametrize("N,c", [(6, 1), (6, 5), (6, 12), (18, 7), (24, 10)])
def test_completion_independence(N, c):
    lat = WeilLattice(N)
    for ha, hb in ((1, 5), (7, 11), (0, 3)):
        m, n = admissible(N, ha, 2), admissible(N, hb, -3)
        fast = S_weil(lat, ha, hb, m, n, c, P)
        for shift in (0, 1, -2):
            assert gap(S_weil_by_gamma(lat, ha, hb, m, n, c, P, shift=shift), fast) < TOL


def test_admissibility_errors():
    lat = WeilLattice(6)
    with pytest.raises(DomainError):
        S_weil(lat, 1, 1, 2, 1, 3, P)
    with pytest.raises(DomainError):
        S_weil(lat, 1, 1, 1, 2, 3, P)
    with pytest.raises(DomainError):
        S_weil(lat, 1, 1, 1, 1, 0, P)
    with pytest.raises(DomainError):
        S_r_eps(6, formula_spec("f", 1).eps, 1, 1, -22, 1, P)


# -- S_{r,eps} ------------------------------------------------------------------------

ROWS = [("f", 1), ("f", 4), ("omega", 2), ("chi", 3), ("phi0", 2), ("F1", 1), ("F0", 4), ("calF2", 2)]


@pytest.mark.parametrize("ident,n", ROWS)
def test_mobius_identity(ident, n):
    row = formula_spec(ident, n)
    for m in (1, 2, 4, 6):
        for c in range(1, 25):
            total = 0
            with ctx(P + 16):
                for v in divisors(math.gcd(m, c)):
                    if mobius(v):
                        total -= mobius(v) * gmpy2.sqrt(mpfr(v)) * A_general(row, c // v, m=m // v, prec=P + 16).value
            s = S_r_eps(row.N, row.eps, row.r, m, -row.d, c, P)
            assert gap(total, s) < TOL, (ident, n, m, c)
            with ctx(P):
                assert abs(s.imag) < gmpy2.exp2(-P + 16)


def test_single_term_at_c1():
    row = formula_spec("f", 1)
    with ctx(P):
        assert gap(S_r_eps(row.N, row.eps, row.r, 1, -row.d, 1, P), -A_general(row, 1, prec=P).value) < TOL
    with pytest.raises(DomainError):
        S_r_eps(row.N, row.eps, row.r, 1, -row.d, 0, P)
