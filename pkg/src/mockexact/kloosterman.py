"""Finite exponential sums: classical, partition, sparse theorem-level and unitary-divisor forms."""

from __future__ import annotations

import math
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from . import kernels
from .arith import QQi, psi, unitary_divisors
from .numeric import DomainError, cplx, ctx, dedekind_sum, e_of, sqrt_mod
from .tables import ResolvedRow, family_char, formula_spec

DEFAULT_PREC = 200


@dataclass(frozen=True)
class KloostermanValue:
    value: mpc
    ident: str
    n: int
    c: int
    m: int
    variant: str

    @property
    def real(self) -> mpfr:
        return self.value.real

    @property
    def imag(self) -> mpfr:
        return self.value.imag


# ---------------------------------------------------------------------------
# reality bookkeeping: every sparse or general sum is checked to be real


class RealityMonitor:
    """Tracks the worst |Im| seen, measured in units of 2^-p."""

    def __init__(self):
        self._lock = threading.Lock()
        self.reset()

    def reset(self):
        self.count = 0
        self.worst_log2 = -math.inf  # max of log2|Im| + p

    def record(self, value: mpc, prec: int, tol_bits: int = 16):
        im = abs(value.imag)
        rel = -math.inf if im == 0 else float(gmpy2.log2(im)) + prec
        with self._lock:
            self.count += 1
            self.worst_log2 = max(self.worst_log2, rel)
        if rel >= tol_bits:
            raise AssertionError(f"imaginary part 2^{rel - prec:.1f} exceeds 2^-p+{tol_bits}")


REALITY = RealityMonitor()


# ---------------------------------------------------------------------------
# evaluation of integer histograms against roots of unity


@lru_cache(maxsize=32)
def _root_table(M: int, prec: int) -> dict:
    return {}


def _root(k: int, M: int, prec: int) -> mpc:
    tab = _root_table(M, prec)
    z = tab.get(k)
    if z is None:
        z = tab[k] = e_of(Fraction(k, M), prec)
    return z


def hist_sum(counts: np.ndarray, M: int, prec: int) -> mpc:
    """sum_k counts[k] * e(k/M) at `prec` bits."""
    nz = np.nonzero(counts)[0]
    with ctx(prec + 8):
        acc = mpc(0)
        for k in nz:
            acc += int(counts[k]) * _root(int(k), M, prec + 8)
    return mpc(acc, precision=prec)


# ---------------------------------------------------------------------------
# classical and partition sums


def classical_S(m: int, n: int, c: int, prec: int = DEFAULT_PREC) -> mpfr:
    if c < 1:
        raise DomainError("c must be positive")
    val = hist_sum(kernels.classical_hist(m, n, c), c, prec)
    return val.real


def _dedekind6_exact(c: int):
    vals, unit, bad = kernels.dedekind6(c)
    for d in np.nonzero(bad)[0]:
        vals[d] = int(6 * c * dedekind_sum(int(d), c))
    return vals, unit


def A_partition(c: int, n: int, prec: int = DEFAULT_PREC) -> mpfr:
    """sum over units d mod c of e(s(d,c)/2 - dn/c)."""
    if c < 1:
        raise DomainError("c must be positive")
    vals, unit = _dedekind6_exact(c)
    d = np.nonzero(unit)[0].astype(np.int64)
    M = 12 * c
    k = (vals[d] - 12 * ((d * (n % c)) % c)) % M
    val = hist_sum(np.bincount(k, minlength=M), M, prec)
    return val.real


def A_partition_whiteman(c: int, n: int, prec: int = DEFAULT_PREC) -> mpfr:
    if c < 1:
        raise DomainError("c must be positive")
    acc = mpfr(0, prec + 8)
    with ctx(prec + 8):
        for b in sqrt_mod(1 - 24 * n, 24 * c):
            if b >= 6 * c:
                continue
            chi = int(gmpy2.kronecker(12, b))
            if chi:
                acc += chi * _root(b, 12 * c, prec + 8).real
        acc *= gmpy2.sqrt(mpfr(c) / 3)
    return mpfr(acc, prec)


def A_star(two_c: int, n: int, prec: int = DEFAULT_PREC) -> mpfr:
    if two_c < 2 or two_c % 2:
        raise DomainError("A_star needs an even positive modulus")
    c = two_c // 2
    if c % 2:
        sign, val = (-1) ** ((c + 1) // 2), A_partition(two_c, n, prec)
    else:
        sign, val = (-1) ** (c // 2), A_partition(two_c, n - c // 2, prec)
    with ctx(prec):
        return +val if sign > 0 else -val


# ---------------------------------------------------------------------------
# theorem-level sparse sums


def _as_row(ident_or_row, n=None) -> ResolvedRow:
    if isinstance(ident_or_row, ResolvedRow):
        return ident_or_row
    return formula_spec(ident_or_row, n)


def _fifth_allowed(k_n: QQi):
    # k_n * chi5(b) real forces b = +-2 mod 5 when k_n is imaginary, +-1 otherwise
    return (2, 3) if k_n.re == 0 else (1, 4)


def theta_weights(row: ResolvedRow, c: int, roots=None):
    """[(b, w_b)] over b in [0, Nc) with b^2 = -d (4Nc); w_b = k_n * char(b) is exact and real."""
    N = row.N
    if roots is None:
        roots = sqrt_mod(-row.d, 4 * N * c)
    fam = row.kform.family
    k_n = row.k_n
    filt = row.kform.b_filter
    allowed = _fifth_allowed(k_n) if fam in ("fifth", "fifth2") else None
    out = []
    for b in roots:
        if b >= N * c:
            break
        if filt is not None and not filt(b):
            continue
        ch = family_char(fam, b)
        if ch.re == 0 and ch.im == 0:
            continue
        if allowed is not None and b % 5 not in allowed:
            raise AssertionError(f"b={b} mod 5 outside {allowed} for {row.ident}")
        w = k_n * ch
        if w.im != 0:
            raise AssertionError(f"non-real weight at b={b} for {row.ident}")
        out.append((b, w.re))
    return out


def _merged_sine_weights(row: ResolvedRow, c: int, m: int, roots=None) -> dict:
    """Exact weights keyed by x in [0, Nc/2], the sum being sum_x w_x sin(-pi x/(Nc))."""
    L = row.N * c
    out = {}
    for b, w in theta_weights(row, c, roots):
        x = m * b % (2 * L)
        if x > L:
            x, w = 2 * L - x, -w
        x = min(x, L - x)
        if x:
            out[x] = out.get(x, 0) + w
    return {x: w for x, w in out.items() if w}


def _theta_sum(row: ResolvedRow, c: int, m: int, prec: int, roots=None) -> mpfr:
    N = row.N
    acc = mpfr(0, prec + 8)
    with ctx(prec + 8):
        for x, w in _merged_sine_weights(row, c, m, roots).items():
            # sin(-pi x / (Nc)) = -Im e(x / (2Nc))
            s = -_root(x, 2 * N * c, prec + 8).imag
            acc += s * w.numerator / w.denominator
        acc *= gmpy2.sqrt(2 * mpfr(c) / N)
    return mpfr(acc, prec)


def A_theta(ident, n: int, c: int, m: int = 1, prec: int = DEFAULT_PREC) -> KloostermanValue:
    row = _as_row(ident, n)
    if c < 1:
        raise DomainError("c must be positive")
    if m != 1 and row.kform.family != "fifth2":
        raise DomainError("m > 1 only applies to the second fifth-order family")
    val = cplx(_theta_sum(row, c, m, prec), 0, prec)
    return KloostermanValue(val, row.ident, row.n, c, m, "sparse")


# ---------------------------------------------------------------------------
# unitary-divisor sum


@lru_cache(maxsize=None)
def _xi_table(N: int, eps, r: int) -> dict:
    out = {}
    for u in unitary_divisors(N):
        b = r * psi(u, N) % (2 * N)
        out[b] = out.get(b, 0) + eps(u)
    return out


def _general_sum(row: ResolvedRow, c: int, m: int, prec: int, roots=None) -> mpc:
    N = row.N
    M = 2 * N * c
    if roots is None:
        roots = sqrt_mod(-row.d, 4 * N * c)
    xi = _xi_table(N, row.eps, row.r % (2 * N))
    acc = cplx(0, 0, prec + 8)
    with ctx(prec + 8):
        for b in roots:
            if b >= M:
                break
            w = xi.get(b % (2 * N), 0)
            if w:
                acc += w * _root(m * b % M, M, prec + 8)
        acc *= cplx(0, 1, prec + 8) * gmpy2.sqrt(mpfr(c) / (2 * N))
    val = mpc(acc, precision=prec)
    REALITY.record(val, prec)
    return val


def A_general(row, c: int, m: int | None = None, prec: int = DEFAULT_PREC, n: int | None = None) -> KloostermanValue:
    """The unitary-divisor sum for a resolved table row (or an id together with n)."""
    row = _as_row(row, n)
    if c < 1:
        raise DomainError("c must be positive")
    m = row.m if m is None else m
    return KloostermanValue(_general_sum(row, c, m, prec), row.ident, row.n, c, m, "general")


# ---------------------------------------------------------------------------
# float64 partial sums


def _theta_term_float(row: ResolvedRow, c: int, m: int) -> float:
    # exact weight merging first, so structurally zero terms come out as 0.0
    N = row.N
    w = _merged_sine_weights(row, c, m)
    if not w:
        return 0.0
    x = np.array(list(w), dtype=np.float64)
    wt = np.array([float(v) for v in w.values()])
    s = float(np.dot(wt, np.sin(-math.pi * x / (N * c))))
    return s * math.sqrt(2.0 * c / N)


def theta_terms_float(ident: str, n: int, c_lo: int, c_hi: int, m: int = 1, odd_only: bool = False) -> np.ndarray:
    """A_c/c as float64 for c in [c_lo, c_hi]."""
    row = formula_spec(ident, n)
    out = np.zeros(c_hi - c_lo + 1)
    for i, c in enumerate(range(c_lo, c_hi + 1)):
        if odd_only and c % 2 == 0:
            continue
        out[i] = _theta_term_float(row, c, m) / c
    return out


def _chunk_worker(args):
    return theta_terms_float(*args)


def log_checkpoints(x_max: int, start: int = 1) -> list[int]:
    """1-2-5 sequence from `start` up to x_max, always ending at x_max."""
    pts = []
    dec = 1
    while dec <= x_max:
        for f in (1, 2, 5):
            x = f * dec
            if start <= x < x_max:
                pts.append(x)
        dec *= 10
    pts.append(x_max)
    return pts


@dataclass
class PartialSumTable:
    ident: str
    n: int
    m: int
    terms: np.ndarray  # terms[c-1] = A_c/c
    partial: np.ndarray  # running sums, same indexing

    def at(self, x: int) -> float:
        return float(self.partial[x - 1])

    def rows(self, checkpoints=None):
        xs = checkpoints or log_checkpoints(len(self.terms))
        return [(x, float(self.partial[x - 1]), float(self.terms[x - 1])) for x in xs]


def partial_sums(ident: str, n: int, x_max: int, m: int = 1, odd_only: bool = False, workers: int = 1) -> PartialSumTable:
    """Running sums of A_c^(m)/c for c <= x_max, summed in ascending c.

    With workers > 1 the c-range is cut into contiguous chunks evaluated in
    separate processes; per-c terms do not depend on the chunking and the
    running sum is taken afterwards in index order, so the output is identical.
    """
    if x_max < 1:
        raise DomainError("x_max must be >= 1")
    formula_spec(ident, n)
    if workers <= 1:
        terms = theta_terms_float(ident, n, 1, x_max, m, odd_only)
    else:
        bounds = np.linspace(0, x_max, workers * 4 + 1).astype(int)
        jobs = [(ident, n, int(lo) + 1, int(hi), m, odd_only) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            terms = np.concatenate(list(ex.map(_chunk_worker, jobs)))
    partial = np.cumsum(terms)
    return PartialSumTable(ident, n, m, terms, partial)
