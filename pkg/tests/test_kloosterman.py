import cmath
import math

import gmpy2
import numpy as np
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from mockexact.kloosterman import (
    REALITY,
    A_general,
    A_partition,
    A_partition_whiteman,
    A_star,
    A_theta,
    RealityMonitor,
    classical_S,
    hist_sum,
    log_checkpoints,
    partial_sums,
    theta_weights,
)
from mockexact.numeric import DomainError, ctx, dedekind_sum_direct, euler_phi, omega_odd
from mockexact.tables import FORMULA_IDS, formula_spec

P = 200
TOL = gmpy2.exp2(-P + 20)


def gap(a, b):
    with ctx(P + 32):
        return abs(a - b)


# -- classical and partition sums ----------------------------------------------------


def test_classical_examples():
    assert classical_S(5, 7, 1, P) == 1
    assert classical_S(1, 1, 2, P) == 1
    for c in (1, 7, 12, 30):
        assert gap(classical_S(0, 0, c, P), euler_phi(c)) < TOL
    with pytest.raises(DomainError):
        classical_S(1, 1, 0, P)


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 80))
def test_classical_against_float_definition(m, n, c):
    ref = 0.0
    for d in range(c):
        if math.gcd(d, c) == 1:
            dbar = pow(d, -1, c) if c > 1 else 0
            ref += math.cos(2 * math.pi * (m * dbar + n * d) / c)
    assert abs(float(classical_S(m, n, c, P)) - ref) < 1e-9
    # real, symmetric in m and n
    assert gap(classical_S(m, n, c, P), classical_S(n, m, c, P)) < TOL


def test_partition_examples():
    for n in range(6):
        assert A_partition(1, n, P) == 1
        assert gap(A_partition(2, n, P), (-1) ** n) < TOL
    assert gap(A_partition_whiteman(1, 0, P), 1) < TOL
    with pytest.raises(DomainError):
        A_partition(0, 1, P)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(0, 30))
def test_partition_against_float_definition(c, n):
    ref = 0j
    for d in range(c):
        if math.gcd(d, c) == 1:
            s = dedekind_sum_direct(d, c)
            ref += cmath.exp(1j * math.pi * float(s) - 2j * math.pi * d * n / c)
    assert abs(ref.imag) < 1e-9
    assert abs(float(A_partition(c, n, P)) - ref.real) < 1e-9


@pytest.mark.parametrize("c", range(1, 61))
def test_whiteman_equals_dedekind_small(c):
    for n in range(4):
        assert gap(A_partition(c, n, P), A_partition_whiteman(c, n, P)) < TOL


def test_whiteman_empty_sum():
    # 1 - 24n must be a square mod 24c; for c = 5, n = 1 it is -23 = 2 mod 5, a non-residue
    assert A_partition_whiteman(5, 1, P) == 0
    assert gap(A_partition(5, 1, P), 0) < TOL


def test_weil_bound_sample():
    for c in range(1, 400):
        for n in (1, 5, 10):
            assert abs(float(A_partition(c, n, 64))) <= 2 ** omega_odd(c) * math.sqrt(c) + 1e-12


def test_a_star():
    for n in range(6):
        assert gap(A_star(2, n, P), (-1) ** (n + 1)) < TOL
        with ctx(P):
            assert gap(A_star(4, n, P), -A_partition(4, n - 1, P)) < TOL
    with pytest.raises(DomainError):
        A_star(3, 1, P)


# -- sparse theorem-level sums ------------------------------------------------------------


def test_f_vanishes_on_odd_c():
    for c in range(1, 60, 2):
        for n in (1, 2, 7):
            assert A_theta("f", n, c, prec=P).real == 0


def test_f_even_c_is_a_star():
    for c in range(1, 41):
        for n in range(1, 8):
            assert gap(A_theta("f", n, 2 * c, prec=P).real, A_star(2 * c, n, P)) < TOL


def test_psi_filter_empty():
    # c = 1: b^2 = -d (mod 96) for psi's rows; the mod-48 filter leaves nothing at odd n
    hits = [(n, c) for n in range(1, 6) for c in range(1, 8) if not theta_weights(formula_spec("psi", n), c)]
    assert hits
    for n, c in hits:
        assert A_theta("psi", n, c, prec=P).real == 0


def test_theta_errors():
    with pytest.raises(DomainError):
        A_theta("f", 0, 1, prec=P)
    with pytest.raises(DomainError):
        A_theta("f", 1, 0, prec=P)
    with pytest.raises(DomainError):
        A_theta("f", 1, 4, m=2, prec=P)


def test_value_record():
    v = A_theta("omega", 3, 10, prec=P)
    assert (v.ident, v.n, v.c, v.m, v.variant) == ("omega", 3, 10, 1, "sparse")
    assert v.imag == 0


@pytest.mark.parametrize("ident", FORMULA_IDS)
def test_sparse_equals_scaled_general(ident):
    for n in (1, 2, 5, 11):
        row = formula_spec(ident, n)
        ms = (1, 2) if row.kform.family == "fifth2" else (1,)
        cn = row.c_n.to_mpc(P + 32)
        for m in ms:
            for c in range(1, 41):
                a = A_theta(ident, n, c, m=m, prec=P).value
                b = A_general(row, c, m=m, prec=P).value
                with ctx(P + 32):
                    assert abs(a - cn * b) < TOL, (ident, n, c, m)


def test_general_is_real_and_recorded():
    REALITY.reset()
    for ident in FORMULA_IDS:
        for c in range(1, 30):
            A_general(ident, c, n=3, prec=P)
    assert REALITY.count > 0
    assert REALITY.worst_log2 < 16


def test_general_nonresidue_is_zero():
    row = formula_spec("f", 1)  # d = 23, need b^2 = -23 (mod 24c)
    for c in (5, 7, 11):
        assert A_general(row, c, prec=P).value == 0


def test_reality_monitor_trips():
    mon = RealityMonitor()
    mon.record(gmpy2.mpc(1, 0), P)
    assert mon.count == 1 and mon.worst_log2 == -math.inf
    with pytest.raises(AssertionError):
        mon.record(gmpy2.mpc(1, mpfr("1e-10")), P)


def test_hist_sum():
    counts = np.zeros(8, dtype=np.int64)
    counts[0], counts[2], counts[4] = 3, 2, 1
    with ctx(P):
        z = hist_sum(counts, 8, P)
        assert abs(z - gmpy2.mpc(2, 2)) < TOL


# -- partial sums ---------------------------------------------------------------------


def test_checkpoints():
    assert log_checkpoints(100_000) == [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000, 20_000, 50_000, 100_000]
    assert log_checkpoints(1) == [1]
    assert log_checkpoints(300, start=50) == [50, 100, 200, 300]


def test_partial_sums_basic():
    tab = partial_sums("f", 1, 1)
    assert len(tab.rows()) == 1 and tab.rows()[0][0] == 1
    odd = partial_sums("f", 2, 2000, odd_only=True)
    assert not np.any(odd.partial)
    with pytest.raises(DomainError):
        partial_sums("f", 1, 0)
    with pytest.raises(DomainError):
        partial_sums("f", 0, 10)


def test_partial_sums_match_high_precision_terms():
    tab = partial_sums("chi", 2, 60)
    acc = 0.0
    for c in range(1, 61):
        acc += float(A_theta("chi", 2, c, prec=P).real) / c
        assert abs(tab.at(c) - acc) < 1e-9


def test_partial_sums_parallel_is_identical():
    one = partial_sums("f", 3, 3000)
    many = partial_sums("f", 3, 3000, workers=3)
    assert np.array_equal(one.terms, many.terms)
    assert np.array_equal(one.partial, many.partial)
