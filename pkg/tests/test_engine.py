import cmath
import math

import gmpy2
import pytest
from gmpy2 import mpfr

from mockexact.engine import (
    NonConvergenceError,
    TruncationPolicy,
    _SeriesState,
    alpha_exact,
    cancellation_report,
    partition_pn,
    poincare_const_18,
    reality_summary,
)
from mockexact.kloosterman import A_star
from mockexact.numeric import DomainError, bessel_I_half, ctx
from mockexact.qseries import oracle_coeff
from mockexact.tables import formula_spec


def test_policy_validation():
    with pytest.raises(DomainError):
        TruncationPolicy(residual_bound=0.5)
    with pytest.raises(DomainError):
        TruncationPolicy(c_start=100, c_hard_max=50)
    assert TruncationPolicy().hard_max(250) == 300_000
    assert TruncationPolicy().checkpoints(1)[:4] == [50, 100, 200, 500]


def test_partition_examples():
    assert partition_pn(1).rounded_value == 1
    rep = partition_pn(100)
    assert rep.rounded_value == 190569292 and rep.residual < 0.25
    assert partition_pn(2000).residual < 1e-3
    with pytest.raises(DomainError):
        partition_pn(0)


def test_alpha_examples():
    assert alpha_exact("f", 2).rounded_value == -2
    assert alpha_exact("omega", 1).rounded_value == 2
    with pytest.raises(DomainError):
        alpha_exact("f", 0)
    with pytest.raises(DomainError):
        alpha_exact("nu", 3)
    with pytest.raises(DomainError):
        alpha_exact("f", 3, path="sideways")


@pytest.mark.parametrize("ident", ["f", "omega", "psi", "F1", "calF0", "chi0", "chi1"])
def test_alpha_matches_oracle(ident):
    for n in (1, 4, 9):
        rep = alpha_exact(ident, n)
        assert rep.rounded_value == oracle_coeff(ident, n)
        assert rep.residual < 0.25


def test_both_paths_report_the_same_value():
    rep = alpha_exact("phi1", 7)
    assert set(rep.components) == {"k_form", "table_form"}
    with ctx(rep.precision_used):
        k, t = (mpfr(v) for v in rep.components.values())
        assert abs(k - t) < gmpy2.exp2(-rep.precision_used + 30)
    for path in ("k_form", "table_form"):
        assert alpha_exact("phi1", 7, path=path).rounded_value == rep.rounded_value


def test_combination_components():
    rep = alpha_exact("chi1", 5)
    assert set(rep.components) == {"F1(5)", "phi1(6)"}


def test_nonconvergence_carries_report():
    policy = TruncationPolicy(c_start=1, window=3, c_hard_max=2, residual_bound=0.01)
    with pytest.raises(NonConvergenceError) as exc:
        alpha_exact("psi1", 60, policy)
    assert exc.value.report.c_used == 2


def test_precision_override(monkeypatch):
    monkeypatch.setenv("MOCKEXACT_PRECISION", "400")
    assert alpha_exact("f", 3).precision_used == 400
    assert alpha_exact("f", 3, TruncationPolicy(precision=300)).precision_used == 300
    monkeypatch.delenv("MOCKEXACT_PRECISION")
    row = formula_spec("f", 3)
    want = math.ceil(math.pi * math.sqrt(row.d) / (row.N * math.log(2))) + 96
    assert alpha_exact("f", 3).precision_used == max(want, 64)


def test_report_json_shape():
    d = alpha_exact("f", 5).to_dict()
    assert d["value"] == str(oracle_coeff("f", 5))
    assert {"function", "n", "residual", "c_used", "precision_bits", "checkpoints"} <= set(d)


def test_andrews_dragonette_reindexing():
    prec = 160
    for n in range(1, 21):
        row = formula_spec("f", n)
        st = _SeriesState(row, prec, True, False)
        st.advance(400)
        ours = st.values()["k_form"]
        with ctx(prec + 16):
            x = gmpy2.const_pi() * gmpy2.sqrt(mpfr(24 * n - 1)) / 12
            ad = mpfr(0)
            for c in range(1, 201):
                ad += A_star(2 * c, n, prec + 16) / c * bessel_I_half(x / c)
            ad *= gmpy2.const_pi() / gmpy2.root(mpfr(24 * n - 1), 4)
            assert abs(ad - ours) < gmpy2.exp2(-prec + 30)
            assert int(gmpy2.rint(ad)) == oracle_coeff("f", n)


# -- level 18 constant term ---------------------------------------------------------------


def test_poincare_targets():
    z3 = cmath.exp(2j * math.pi / 3)
    r = poincare_const_18(3, "+", 1000)
    assert abs(r.target - complex(-1, -math.sqrt(3))) < 1e-12
    r = poincare_const_18(6, "plus", 1000)
    assert abs(r.target - complex(0.5, -math.sqrt(3) / 2)) < 1e-12
    assert abs(poincare_const_18(6, "-", 1000).target + 1 / z3) < 1e-12
    with pytest.raises(DomainError):
        poincare_const_18(2, "+", 1000)
    with pytest.raises(DomainError):
        poincare_const_18(3, "+", 5)
    with pytest.raises(DomainError):
        poincare_const_18(3, "*", 100)


@pytest.mark.parametrize("ell,sign", [(3, "+"), (3, "-"), (6, "+"), (6, "-")])
def test_poincare_direct_equals_collapsed(ell, sign):
    a = poincare_const_18(ell, sign, 150, method="collapsed")
    b = poincare_const_18(ell, sign, 150, method="direct")
    for ta, tb in zip(a.trace, b.trace):
        assert ta[0] == tb[0]
        assert abs(complex(ta[1], ta[2]) - complex(tb[1], tb[2])) < 1e-9


def test_poincare_error_decreases():
    r = poincare_const_18(3, "+", 10_000)
    errs = {c: e for c, *_, e in r.trace}
    assert errs[10_000] < errs[1000]


# -- partial-sum growth --------------------------------------------------------------------


def test_cancellation_report():
    rep = cancellation_report("f", 1, 5000)
    assert rep.exponent is not None and rep.exponent <= 0.75
    assert rep.rows[-1][0] == 5000
    deg = cancellation_report("f", 2, 2000, odd_only=True)
    assert deg.degenerate and deg.exponent is None
    with pytest.raises(DomainError):
        cancellation_report("f", 1, 999)


def test_reality_summary():
    alpha_exact("calF2", 2)
    s = reality_summary()
    assert s["evaluations"] > 0 and s["worst_log2_imag_plus_p"] < 16
