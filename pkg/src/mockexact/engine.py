"""Rademacher-type series: p(n), mock theta coefficients, and two numerical verifiers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpfr

from . import kernels
from .kloosterman import (
    A_partition_whiteman,
    REALITY,
    _general_sum,
    _theta_sum,
    classical_S,
    log_checkpoints,
    partial_sums,
)
from .numeric import (
    DomainError,
    bessel_I_half,
    bessel_I_three_half,
    ctx,
    env_precision,
    mobius,
    precision_for_magnitude,
    sqrt_mod,
)
from .tables import formula_spec


class NonConvergenceError(RuntimeError):
    def __init__(self, msg, report):
        super().__init__(msg)
        self.report = report


@dataclass
class TruncationPolicy:
    c_start: int = 50
    window: int = 3
    residual_bound: float = 0.25
    c_hard_max: int | None = None  # None: 10^5, scaled up for large n
    precision: int | None = None  # None: environment override, then the automatic rule

    def __post_init__(self):
        if not self.residual_bound < 0.5:
            raise DomainError("residual_bound must be < 1/2")
        if self.window < 1 or self.c_start < 1:
            raise DomainError("window and c_start must be positive")
        if self.c_hard_max is not None and self.c_hard_max < self.c_start:
            raise DomainError("c_hard_max below the first checkpoint")

    def hard_max(self, n: int) -> int:
        if self.c_hard_max is not None:
            return self.c_hard_max
        return 100_000 * max(1, math.ceil(n / 100))

    def checkpoints(self, n: int) -> list[int]:
        return log_checkpoints(self.hard_max(n), start=self.c_start)

    def prec_for(self, log_magnitude: float) -> int:
        return self.precision or env_precision() or precision_for_magnitude(log_magnitude)


@dataclass
class Checkpoint:
    c: int
    value: mpfr
    rounded: int
    residual: float


@dataclass
class EvaluationReport:
    ident: str
    n: int
    rounded_value: int
    residual: float
    c_used: int
    precision_used: int
    path: str
    checkpoints: list = field(default_factory=list)
    components: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "function": self.ident,
            "n": self.n,
            "value": str(self.rounded_value),
            "residual": float(self.residual),
            "c_used": self.c_used,
            "precision_bits": self.precision_used,
            "path": self.path,
            "checkpoints": [
                {"c": cp.c, "value": str(cp.value), "rounded": str(cp.rounded), "residual": cp.residual}
                for cp in self.checkpoints
            ],
        }


def _round(x: mpfr):
    with ctx(x.precision):
        r = gmpy2.rint(x)
        res = float(abs(x - r))
    return int(r), res


# ---------------------------------------------------------------------------
# p(n)


def partition_pn(n: int, policy: TruncationPolicy | None = None) -> EvaluationReport:
    """p(n) from the Rademacher series, truncated by a crude tail bound."""
    policy = policy or TruncationPolicy()
    if n < 1:
        raise DomainError("partition_pn needs n >= 1")
    d = 24 * n - 1
    prec = policy.prec_for(math.pi * math.sqrt(d) / 6)
    with ctx(prec + 16):
        x = gmpy2.const_pi() * gmpy2.sqrt(mpfr(d)) / 6
        pref = 2 * gmpy2.const_pi() / mpfr(d) ** mpfr(0.75)
        xf = float(x)
        # sum_{c>C} c^-1/2 I_{3/2}(x/c) <= sqrt(2/pi) e x^{3/2} / (3C) once C >= x
        crude = float(pref) * math.sqrt(2 / math.pi) * math.e * xf**1.5 / 3
        C = max(math.ceil(xf), math.ceil(crude / (policy.residual_bound / 2)), 1)
        acc = mpfr(0)
        for c in range(1, C + 1):
            A = A_partition_whiteman(c, n, prec + 16)
            if A != 0:
                acc += A / c * bessel_I_three_half(x / c)
        val = pref * acc
    val = mpfr(val, prec)
    rounded, res = _round(val)
    rep = EvaluationReport("partition", n, rounded, res, C, prec, "hrr", [Checkpoint(C, val, rounded, res)])
    if res >= policy.residual_bound:
        raise NonConvergenceError(f"p({n}) residual {res} too large", rep)
    return rep


# ---------------------------------------------------------------------------
# mock theta coefficients


COMBOS = {
    # chi0(n) = 2 F0(n) - (-1)^n phi0(n);  chi1(n) = 2 F1(n) + (-1)^(n+1) phi1(n+1)
    "chi0": lambda n: [("F0", n, 2), ("phi0", n, -((-1) ** n))],
    "chi1": lambda n: [("F1", n, 2), ("phi1", n + 1, (-1) ** (n + 1))],
}

PATHS = ("k_form", "table_form", "both")


class _SeriesState:
    """Running sums sum_c A_c^(v)/c I_{1/2}(pi v sqrt(d)/(Nc)) for both paths."""

    def __init__(self, row, prec, want_k, want_t):
        self.row = row
        self.prec = prec
        self.want_k, self.want_t = want_k, want_t
        self.vs = [v for v in range(1, row.m + 1) if row.m % v == 0]
        self.c = 0
        p = prec + 16
        with ctx(p):
            self.arg = {v: gmpy2.const_pi() * v * gmpy2.sqrt(mpfr(row.d)) / row.N for v in self.vs}
            self.k_acc = {v: mpfr(0) for v in self.vs}
            self.t_acc = {v: mpfr(0) for v in self.vs}
            pre = 2 * gmpy2.const_pi() / gmpy2.root(mpfr(row.d), 4)
            self.weights = {v: pre * mobius(row.m // v) * gmpy2.sqrt(mpfr(v)) for v in self.vs}
            self.c_n = mpfr(row.c_n.re.numerator) / row.c_n.re.denominator
        if row.c_n.im != 0:
            raise AssertionError("c_n expected real")
        self.max_gap = -math.inf

    def advance(self, c_to):
        row, p = self.row, self.prec + 16
        tol = gmpy2.exp2(-self.prec + 24)
        for c in range(self.c + 1, c_to + 1):
            roots = sqrt_mod(-row.d, 4 * row.N * c)
            if not roots:
                continue
            for v in self.vs:
                tk = _theta_sum(row, c, v, p, roots) if self.want_k else None
                tt = _general_sum(row, c, v, p, roots).real if self.want_t else None
                with ctx(p):
                    if tk is not None and tt is not None:
                        gap = abs(tk - self.c_n * tt)
                        if gap > tol:
                            raise AssertionError(f"k-form and table-form terms differ at c={c}: {gap}")
                    if tk == 0 and (tt is None or tt == 0):
                        continue
                    bes = bessel_I_half(self.arg[v] / c) / c
                    if tk is not None:
                        self.k_acc[v] += tk * bes
                    if tt is not None:
                        self.t_acc[v] += tt * bes
        self.c = c_to

    def values(self):
        out = {}
        with ctx(self.prec + 16):
            if self.want_k:
                out["k_form"] = mpfr(sum(self.weights[v] * self.k_acc[v] for v in self.vs), self.prec)
            if self.want_t:
                out["table_form"] = mpfr(
                    sum(self.weights[v] * self.c_n * self.t_acc[v] for v in self.vs), self.prec
                )
        return out


def _alpha_single(ident, n, policy, path):
    row = formula_spec(ident, n)
    if path not in PATHS:
        raise DomainError(f"unknown path {path!r}")
    prec = policy.prec_for(math.pi * row.m * math.sqrt(row.d) / row.N)
    st = _SeriesState(row, prec, path in ("k_form", "both"), path in ("table_form", "both"))
    history = []
    for cp in policy.checkpoints(n):
        st.advance(cp)
        vals = st.values()
        rounded = {k: _round(v) for k, v in vals.items()}
        main = "table_form" if path == "table_form" else "k_form"
        r, res = rounded[main]
        worst = max(x[1] for x in rounded.values())
        agree = len({x[0] for x in rounded.values()}) == 1
        history.append((Checkpoint(cp, vals[main], r, worst), agree, vals))
        recent = history[-policy.window :]
        if (
            len(recent) == policy.window
            and all(h[1] for h in recent)
            and len({h[0].rounded for h in recent}) == 1
            and all(h[0].residual < policy.residual_bound for h in recent)
        ):
            return EvaluationReport(
                ident, n, r, worst, cp, prec, path, [h[0] for h in history], {k: str(v) for k, v in vals.items()}
            )
    last = history[-1][0]
    rep = EvaluationReport(ident, n, last.rounded, last.residual, last.c, prec, path, [h[0] for h in history])
    raise NonConvergenceError(f"alpha_{ident}({n}) did not stabilise by c={last.c}", rep)


def alpha_exact(ident: str, n: int, policy: TruncationPolicy | None = None, path: str = "both") -> EvaluationReport:
    """Coefficient of q^n of a mock theta function from its exact series."""
    policy = policy or TruncationPolicy()
    if ident not in COMBOS:
        return _alpha_single(ident, n, policy, path)
    parts = [(_alpha_single(i, k, policy, path), w) for i, k, w in COMBOS[ident](n)]
    value = sum(w * rep.rounded_value for rep, w in parts)
    return EvaluationReport(
        ident,
        n,
        value,
        sum(abs(w) * rep.residual for rep, w in parts),
        max(rep.c_used for rep, _ in parts),
        max(rep.precision_used for rep, _ in parts),
        path,
        [cp for rep, _ in parts for cp in rep.checkpoints],
        {f"{rep.ident}({rep.n})": str(rep.rounded_value) for rep, _ in parts},
    )


# ---------------------------------------------------------------------------
# constant term of the level-18 Poincare series


@dataclass
class PoincareResult:
    ell: int
    sign: str
    value: complex
    target: complex
    trace: list  # (checkpoint_c, re, im, abs_err)

    @property
    def error(self):
        return abs(self.value - self.target)


def _poincare_target(ell, sgn):
    z3 = cmath.exp(2j * math.pi / 3)
    if ell == 3:
        return 2 * z3 ** (-sgn)
    return -(z3**sgn)


def _poincare_direct_terms(ell, sgn, c_max):
    ellp = 18 // ell
    out = np.zeros(c_max + 1, dtype=complex)
    for c in range(ell, c_max + 1, ell):
        s = 0j
        for k in range(ellp):
            S = float(classical_S(-ellp, c * k, c * ellp, 64))
            s += cmath.exp(-sgn * 2j * math.pi * c * k / 18) * S
        out[c] = s / (c * c * ellp)
    return out


def poincare_const_18(ell: int, sign: str = "+", c_max: int = 20_000, method: str = "collapsed") -> PoincareResult:
    """Truncated constant term a_1(0) of the level-18 Poincare series at the cusp 1/ell."""
    if ell not in (3, 6):
        raise DomainError("ell must be 3 or 6")
    if c_max < 10:
        raise DomainError("c_max must be >= 10")
    sgn = {"+": 1, "plus": 1, "-": -1, "minus": -1}.get(sign)
    if sgn is None:
        raise DomainError(f"sign must be + or -, got {sign!r}")
    ellp = 18 // ell
    if method == "collapsed":
        re, im = kernels.poincare_terms(ell, ellp, sgn, c_max)
        terms = re + 1j * im
    elif method == "direct":
        terms = _poincare_direct_terms(ell, sgn, c_max)
    else:
        raise DomainError(f"unknown method {method!r}")
    running = np.cumsum(terms) * (4 * math.pi**2 / ellp)
    target = _poincare_target(ell, sgn)
    trace = []
    for x in log_checkpoints(c_max, start=10):
        v = complex(running[x])
        trace.append((x, v.real, v.imag, abs(v - target)))
    return PoincareResult(ell, "+" if sgn > 0 else "-", complex(running[c_max]), target, trace)


# ---------------------------------------------------------------------------
# partial-sum growth


@dataclass
class CancellationReport:
    ident: str
    n: int
    m: int
    x_max: int
    exponent: float | None
    r2: float | None
    degenerate: bool
    rows: list  # (x, partial_sum, last_term)
    table: object = None  # the full PartialSumTable


def growth_exponent(partial, x_min=100, x_max=None):
    """(slope, r2) of log(running sup |partial|) against log x on [x_min, x_max]; None if the sup vanishes."""
    partial = np.asarray(partial)
    x_max = x_max or len(partial)
    sup = np.maximum.accumulate(np.abs(partial[:x_max]))
    xs = np.arange(1, x_max + 1)
    sel = xs >= x_min
    if not np.all(sup[sel] > 0):
        return None
    lx, ly = np.log(xs[sel]), np.log(sup[sel])
    slope, icpt = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + icpt)
    ss = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss if ss > 0 else 1.0
    return float(slope), r2


def cancellation_report(ident, n, x_max, m=1, odd_only=False, workers=1, x_min=100) -> CancellationReport:
    """Least-squares slope of log(running sup |partial sum|) against log x on [x_min, x_max]."""
    if x_max < 1000:
        raise DomainError("x_max must be >= 1000 for a meaningful fit")
    tab = partial_sums(ident, n, x_max, m, odd_only=odd_only, workers=workers)
    fit = growth_exponent(tab.partial, x_min)
    if fit is None:
        return CancellationReport(ident, n, m, x_max, None, None, True, tab.rows(), tab)
    return CancellationReport(ident, n, m, x_max, fit[0], fit[1], False, tab.rows(), tab)


def reality_summary():
    return {"evaluations": REALITY.count, "worst_log2_imag_plus_p": REALITY.worst_log2}
