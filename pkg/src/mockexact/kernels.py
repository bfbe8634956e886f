"""Integer and float64 inner loops.

Each kernel exists twice: a loop version compiled with numba, and a vectorised
numpy version.  ``HAS_NUMBA`` picks one at import; the benchmark calls both.
All kernels either return exact integers (residue histograms, Dedekind
numerators) or plain float64 sums that callers treat as approximate.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import HAS_NUMBA, njit

# ---------------------------------------------------------------------------
# Dedekind numerators: 6c*s(d, c) as an integer, with a unit mask


@njit(cache=True)
def _dedekind6_loop(c):
    out = np.zeros(c, dtype=np.int64)
    unit = np.zeros(c, dtype=np.bool_)
    bad = np.zeros(c, dtype=np.bool_)
    for d in range(c):
        a = d
        b = c
        g1 = a
        g2 = b
        while g1 != 0:
            g1, g2 = g2 % g1, g1
        if g2 != 1:
            continue
        unit[d] = True
        s = 0.0
        sign = 1.0
        while a != 0:
            s += sign * ((a * a + b * b + 1.0) / (12.0 * a * b) - 0.25)
            sign = -sign
            a, b = b % a, a
        v = 6.0 * c * s
        r = math.floor(v + 0.5)
        if abs(v - r) > 0.05:
            bad[d] = True
        out[d] = np.int64(r)
    return out, unit, bad


def _dedekind6_numpy(c):
    d = np.arange(c, dtype=np.int64)
    g = np.gcd(d, c)
    out = np.zeros(c, dtype=np.int64)
    unit = g == 1
    idx = np.nonzero(unit)[0]
    ai = d[idx].copy()
    bi = np.full(idx.size, c, dtype=np.int64)
    s = np.zeros(idx.size)
    sign = np.ones(idx.size)
    act = ai != 0
    while act.any():
        A, B = ai[act].astype(np.float64), bi[act].astype(np.float64)
        s[act] += sign[act] * ((A * A + B * B + 1.0) / (12.0 * A * B) - 0.25)
        sign[act] = -sign[act]
        na = bi[act] % ai[act]
        bi[act] = ai[act]
        ai[act] = na
        act = ai != 0
    v = 6.0 * c * s
    r = np.floor(v + 0.5)
    bad = np.zeros(c, dtype=np.bool_)
    bad[idx] = np.abs(v - r) > 0.05
    out[idx] = r.astype(np.int64)
    return out, unit, bad


def dedekind6(c: int):
    """(values, unit, suspicious): values[d] = 6c*s(d,c) where unit[d], i.e. gcd(d,c)=1."""
    if HAS_NUMBA:
        return _dedekind6_loop(c)
    return _dedekind6_numpy(c)


# ---------------------------------------------------------------------------
# modular inverses of all units mod c (0 where not a unit)


@njit(cache=True)
def _inverses_loop(c):
    out = np.zeros(c, dtype=np.int64)
    for d in range(c):
        r0, r1 = c, d
        s0, s1 = 0, 1
        while r1 != 0:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        if r0 == 1:
            out[d] = s0 % c
    if c == 1:
        out[0] = 0
    return out


def _inverses_numpy(c):
    d = np.arange(c, dtype=np.int64)
    r0 = np.full(c, c, dtype=np.int64)
    r1 = d.copy()
    s0 = np.zeros(c, dtype=np.int64)
    s1 = np.ones(c, dtype=np.int64)
    act = r1 != 0
    while act.any():
        q = r0[act] // r1[act]
        r0[act], r1[act] = r1[act], r0[act] - q * r1[act]
        s0[act], s1[act] = s1[act], s0[act] - q * s1[act]
        act = r1 != 0
    out = np.where(r0 == 1, s0 % c, 0)
    return out.astype(np.int64)


def inverses(c: int) -> np.ndarray:
    if HAS_NUMBA:
        return _inverses_loop(c)
    return _inverses_numpy(c)


# ---------------------------------------------------------------------------
# classical Kloosterman sum: histogram of (m*dbar + n*d) mod c


@njit(cache=True)
def _classical_hist_loop(m, n, c):
    counts = np.zeros(c, dtype=np.int64)
    inv = _inverses_loop(c)
    for d in range(c):
        if c == 1 or inv[d] != 0:
            counts[(m * inv[d] + n * d) % c] += 1
    return counts


def _classical_hist_numpy(m, n, c):
    inv = _inverses_numpy(c)
    d = np.arange(c, dtype=np.int64)
    unit = (np.gcd(d, c) == 1)
    k = (m % c * inv[unit] + n % c * d[unit]) % c
    return np.bincount(k, minlength=c).astype(np.int64)


def classical_hist(m: int, n: int, c: int) -> np.ndarray:
    if HAS_NUMBA:
        return _classical_hist_loop(m % c, n % c, c)
    return _classical_hist_numpy(m, n, c)


# ---------------------------------------------------------------------------
# brute force square roots (test backstop for sqrt_mod)


@njit(cache=True)
def _sqrt_scan_loop(D, M):
    out = np.empty(M, dtype=np.int64)
    k = 0
    t = D % M
    for b in range(M):
        if (b * b) % M == t:
            out[k] = b
            k += 1
    return out[:k]


def _sqrt_scan_numpy(D, M):
    b = np.arange(M, dtype=np.int64)
    return b[(b * b) % M == D % M]


def sqrt_scan(D: int, M: int) -> np.ndarray:
    if HAS_NUMBA:
        return _sqrt_scan_loop(D, M)
    return _sqrt_scan_numpy(D, M)


# ---------------------------------------------------------------------------
# Weil-representation Kloosterman sums: histogram of the exponent mod 4Nc
#
# For each d coprime to c (a = d^-1 mod c) and r mod c the phase is
# e(-(E + m a + n d) / 4Nc) with E = -a t^2 + 2 h2 t - d h2^2, t = h + 2N r.


@njit(cache=True)
def _weil_hist_loop(N, c, hs, ws, h2, ms, n):
    M = 4 * N * c
    counts = np.zeros(M, dtype=np.int64)
    inv = _inverses_loop(c)
    h2m = h2 % M
    for d in range(c):
        if c > 1 and inv[d] == 0:
            continue
        a = inv[d]
        base = (-(d * (h2m * h2m % M)) + n % M * d) % M
        for j in range(hs.shape[0]):
            h = hs[j]
            w = ws[j]
            am = (ms[j] % M) * a % M
            for r in range(c):
                t = (h + 2 * N * r) % M
                E = (-(a * (t * t % M)) + 2 * h2m * t) % M
                k = (-(E + base + am)) % M
                counts[k] += w
    return counts


def _weil_hist_numpy(N, c, hs, ws, h2, ms, n):
    M = 4 * N * c
    counts = np.zeros(M, dtype=np.int64)
    inv = _inverses_numpy(c)
    ds = np.arange(c, dtype=np.int64)
    if c > 1:
        ds = ds[np.gcd(ds, c) == 1]
    a = inv[ds][:, None]
    d = ds[:, None]
    r = np.arange(c, dtype=np.int64)[None, :]
    h2m = h2 % M
    base = (-(d * (h2m * h2m % M)) + (n % M) * d) % M
    for h, w, m in zip(hs, ws, ms):
        t = (h + 2 * N * r) % M
        E = (-(a * (t * t % M)) + 2 * h2m * t) % M
        k = (-(E + base + (m % M) * a % M)) % M
        counts += w * np.bincount(k.ravel(), minlength=M)
    return counts


def weil_hist(N: int, c: int, hs, ws, h2: int, ms, n: int) -> np.ndarray:
    """Weighted histogram sum_j ws[j] * #(exponent == k) for alpha-index hs[j], m = ms[j]."""
    hs = np.asarray(hs, dtype=np.int64)
    ws = np.asarray(ws, dtype=np.int64)
    ms = np.asarray(ms, dtype=np.int64)
    if HAS_NUMBA:
        return _weil_hist_loop(N, c, hs, ws, h2, ms, n)
    return _weil_hist_numpy(N, c, hs, ws, h2, ms, n)


# ---------------------------------------------------------------------------
# Shintani sum for one gamma: histogram of E mod 4Nc over r


@njit(cache=True)
def _shintani_hist_loop(N, a, c, d, h, h2):
    M = 4 * N * c
    counts = np.zeros(M, dtype=np.int64)
    h2m = h2 % M
    dd = (d % M) * (h2m * h2m % M) % M
    am = a % M
    for r in range(c):
        t = (h + 2 * N * r) % M
        E = (-(am * (t * t % M)) + 2 * h2m * t - dd) % M
        counts[E] += 1
    return counts


def _shintani_hist_numpy(N, a, c, d, h, h2):
    M = 4 * N * c
    r = np.arange(c, dtype=np.int64)
    h2m = h2 % M
    t = (h + 2 * N * r) % M
    E = (-((a % M) * (t * t % M)) + 2 * h2m * t - (d % M) * (h2m * h2m % M)) % M
    return np.bincount(E, minlength=M).astype(np.int64)


def shintani_hist(N, a, c, d, h, h2):
    if HAS_NUMBA:
        return _shintani_hist_loop(N, a, c, d, h, h2)
    return _shintani_hist_numpy(N, a, c, d, h, h2)


# ---------------------------------------------------------------------------
# constant term of the level-18 Poincare series, collapsed form
#
# term(c) = c^-2 * sum over x mod c*l' with gcd(x, c*l') = 1 and x = t (mod l')
# of e(-x/c), t the inverse of (sign*c/l) mod l'.


@njit(cache=True)
def _poincare_loop(ell, ellp, sgn, c_max):
    re = np.zeros(c_max + 1)
    im = np.zeros(c_max + 1)
    for c in range(ell, c_max + 1, ell):
        q = c // ell
        g1, g2 = q % ellp, ellp
        while g1 != 0:
            g1, g2 = g2 % g1, g1
        if g2 != 1:
            continue
        u = (sgn * q) % ellp
        t = 0
        for y in range(ellp):
            if (u * y) % ellp == 1 % ellp:
                t = y
                break
        M = c * ellp
        sr = 0.0
        si = 0.0
        for x in range(t, M, ellp):
            g1, g2 = x, M
            while g1 != 0:
                g1, g2 = g2 % g1, g1
            if g2 == 1:
                th = -2.0 * math.pi * (x % c) / c
                sr += math.cos(th)
                si += math.sin(th)
        re[c] = sr / (c * c)
        im[c] = si / (c * c)
    return re, im


def _poincare_numpy(ell, ellp, sgn, c_max):
    re = np.zeros(c_max + 1)
    im = np.zeros(c_max + 1)
    for c in range(ell, c_max + 1, ell):
        q = c // ell
        if math.gcd(q, ellp) != 1:
            continue
        t = pow(sgn * q % ellp, -1, ellp) if ellp > 1 else 0
        M = c * ellp
        x = np.arange(t, M, ellp, dtype=np.int64)
        x = x[np.gcd(x, M) == 1]
        th = -2.0 * np.pi * (x % c) / c
        re[c] = np.cos(th).sum() / (c * c)
        im[c] = np.sin(th).sum() / (c * c)
    return re, im


def poincare_terms(ell: int, ellp: int, sgn: int, c_max: int):
    """Per-c contributions (index c) to the collapsed constant-term sum."""
    if HAS_NUMBA:
        return _poincare_loop(ell, ellp, sgn, c_max)
    return _poincare_numpy(ell, ellp, sgn, c_max)


# ---------------------------------------------------------------------------
# float64 partition Kloosterman sums A_c(n) for a batch of c


@njit(cache=True)
def _partition_A_loop(c, n):
    vals, unit, bad = _dedekind6_loop(c)
    s = 0.0
    M = 12 * c
    for d in range(c):
        if not unit[d]:
            continue
        k = (vals[d] - 12 * ((d * (n % c)) % c)) % M
        s += math.cos(2.0 * math.pi * k / M)
    return s


def _partition_A_numpy(c, n):
    vals, ok, bad = _dedekind6_numpy(c)
    d = np.arange(c, dtype=np.int64)
    M = 12 * c
    k = (vals[ok] - 12 * ((d[ok] * (n % c)) % c)) % M
    return float(np.cos(2.0 * np.pi * k / M).sum())


def partition_A_float(c: int, n: int) -> float:
    if HAS_NUMBA:
        return _partition_A_loop(c, n)
    return _partition_A_numpy(c, n)
