"""Exact truncated q-series: the ground-truth oracle for every coefficient.

Series are dense numpy object arrays of Python ints, so coefficients never
overflow.  Eulerian sums are expanded summand by summand, inverting each
Pochhammer denominator factor ``1 - s q^j`` as a strided cumulative sum.
"""

from __future__ import annotations

import threading

import numpy as np

from .numeric import DomainError

__all__ = [
    "PowerSeries",
    "pochhammer",
    "mock_theta_series",
    "partition_series",
    "oracle_coeff",
    "MOCK_THETA_IDS",
]


class PowerSeries:
    """Truncated power series sum_{n<L} a_n q^n with exact integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, length=None):
        arr = np.array([int(c) for c in coeffs], dtype=object)
        if length is not None:
            if length <= 0:
                raise DomainError("series length must be positive")
            if arr.size < length:
                arr = np.concatenate([arr, np.zeros(length - arr.size, dtype=object)])
            arr = arr[:length]
        if arr.size == 0:
            raise DomainError("series length must be positive")
        arr[arr == None] = 0  # noqa: E711
        self.coeffs = arr

    @classmethod
    def _wrap(cls, arr):
        obj = cls.__new__(cls)
        obj.coeffs = arr
        return obj

    @classmethod
    def one(cls, length):
        arr = np.zeros(length, dtype=object)
        arr[:] = 0
        arr[0] = 1
        return cls._wrap(arr)

    @classmethod
    def monomial(cls, exponent, length, coeff=1):
        arr = np.zeros(length, dtype=object)
        arr[:] = 0
        if 0 <= exponent < length:
            arr[exponent] = coeff
        return cls._wrap(arr)

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return int(self.coeffs[n])

    def tolist(self):
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.tolist() == other.tolist()

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        return f"PowerSeries([{head}{', ...' if len(self) > 8 else ''}], L={len(self)})"

    def _common(self, other):
        L = min(len(self), len(other))
        return self.coeffs[:L], other.coeffs[:L]

    def __add__(self, other):
        a, b = self._common(other)
        return PowerSeries._wrap(a + b)

    def __sub__(self, other):
        a, b = self._common(other)
        return PowerSeries._wrap(a - b)

    def __neg__(self):
        return PowerSeries._wrap(-self.coeffs)

    def scale(self, k):
        return PowerSeries._wrap(self.coeffs * int(k))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        a, b = self._common(other)
        L = a.size
        out = np.zeros(L, dtype=object)
        out[:] = 0
        for i in np.nonzero(a)[0]:
            out[i:] += a[i] * b[: L - i]
        return PowerSeries._wrap(out)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; requires constant term +-1."""
        a = self.coeffs
        a0 = int(a[0])
        if a0 not in (1, -1):
            raise DomainError("only series with unit constant term are invertible over Z")
        L = a.size
        inv = np.zeros(L, dtype=object)
        inv[:] = 0
        inv[0] = a0
        for n in range(1, L):
            s = int(np.dot(a[1 : n + 1], inv[n - 1 :: -1][:n]))
            inv[n] = -a0 * s
        return PowerSeries._wrap(inv)

    def shift(self, k):
        """Multiply by q^k (k may be negative, dropping low terms)."""
        L = len(self)
        out = np.zeros(L, dtype=object)
        out[:] = 0
        if k >= 0:
            out[k:] = self.coeffs[: L - k] if k < L else []
        else:
            out[: L + k] = self.coeffs[-k:]
        return PowerSeries._wrap(out)

    def substitute_neg_q(self):
        """f(q) -> f(-q)."""
        signs = np.array([1 if n % 2 == 0 else -1 for n in range(len(self))], dtype=object)
        return PowerSeries._wrap(self.coeffs * signs)


# ---------------------------------------------------------------------------
# in-place factor kernels on object arrays


def _mul_factor(arr, sign, j):
    """arr *= (1 - sign q^j), truncated."""
    if j >= arr.size:
        return
    if j == 0:
        arr *= 1 - sign
        return
    arr[j:] = arr[j:] - sign * arr[:-j]


def _div_factor(arr, sign, j):
    """arr /= (1 - sign q^j) for j >= 1, truncated (geometric-series inversion)."""
    L = arr.size
    if j >= L:
        return
    if j == 0:
        raise DomainError("cannot invert a factor with zero constant term")
    rows = -(-L // j)
    pad = np.zeros(rows * j, dtype=object)
    pad[:] = 0
    pad[:L] = arr
    grid = pad.reshape(rows, j)
    if sign == 1:
        grid = np.cumsum(grid, axis=0)
    else:
        # a_k + (-1) a_{k-j} + a_{k-2j} - ... : alternate signs along the column
        alt = np.array([(-1) ** i for i in range(rows)], dtype=object)[:, None]
        grid = np.cumsum(grid * alt, axis=0) * alt
    arr[:] = grid.reshape(-1)[:L]


def _poch_factors(a_sign, a_exp, step, n):
    """Factors (1 - a q^{a_exp + step*m}) for m < n of (a q^a_exp; q^step)_n."""
    return [(a_sign, a_exp + step * m) for m in range(n)]


def pochhammer(a_num_exp: int, a_sign: int, q_step: int, n: int, L: int) -> PowerSeries:
    """Truncated expansion of (a; q^step)_n for a = a_sign * q^a_num_exp."""
    if L <= 0:
        raise DomainError("series length must be positive")
    if a_sign not in (1, -1) or q_step < 1 or n < 0:
        raise DomainError("pochhammer needs a_sign = +-1, q_step >= 1, n >= 0")
    arr = PowerSeries.one(L).coeffs
    for s, j in _poch_factors(a_sign, a_num_exp, q_step, n):
        _mul_factor(arr, s, j)
    return PowerSeries._wrap(arr)


# ---------------------------------------------------------------------------
# Eulerian series


def _eulerian(L, lead, numer, denom, start=0):
    """sum_{n >= start} q^{lead(n)} * prod(numer(n)) / prod(denom(n)).

    ``numer(n)`` and ``denom(n)`` return lists of (sign, j) factors
    ``1 - sign q^j``.  Summation stops once lead(n) >= L; lead is increasing.
    """
    total = np.zeros(L, dtype=object)
    total[:] = 0
    n = start
    while True:
        e = lead(n)
        if e >= L:
            break
        term = np.zeros(L, dtype=object)
        term[:] = 0
        term[e] = 1
        for s, j in numer(n):
            _mul_factor(term, s, j)
        for s, j in denom(n):
            _div_factor(term, s, j)
        total += term
        n += 1
    return PowerSeries._wrap(total)


def _poch(sign, exp, step, count):
    return lambda n: _poch_factors(sign, exp(n) if callable(exp) else exp, step, count(n))


def _f(L):
    # q^{n^2} / (-q;q)_n^2
    return _eulerian(L, lambda n: n * n, lambda n: [], lambda n: 2 * _poch_factors(-1, 1, 1, n))


def _phi(L):
    return _eulerian(L, lambda n: n * n, lambda n: [], lambda n: _poch_factors(-1, 2, 2, n))


def _psi(L):
    return _eulerian(L, lambda n: n * n, lambda n: [], lambda n: _poch_factors(1, 1, 2, n), start=1)


def _chi(L):
    return _eulerian(
        L, lambda n: n * n, lambda n: _poch_factors(-1, 1, 1, n), lambda n: _poch_factors(-1, 3, 3, n)
    )


def _omega(L):
    return _eulerian(L, lambda n: 2 * n * (n + 1), lambda n: [], lambda n: 2 * _poch_factors(1, 1, 2, n + 1))


def _nu(L):
    return _eulerian(L, lambda n: n * (n + 1), lambda n: [], lambda n: _poch_factors(-1, 1, 2, n + 1))


def _f0(L):
    return _eulerian(L, lambda n: n * n, lambda n: [], lambda n: _poch_factors(-1, 1, 1, n))


def _f1(L):
    return _eulerian(L, lambda n: n * (n + 1), lambda n: [], lambda n: _poch_factors(-1, 1, 1, n))


def _F0(L):
    return _eulerian(L, lambda n: 2 * n * n, lambda n: [], lambda n: _poch_factors(1, 1, 2, n))


def _F1(L):
    return _eulerian(L, lambda n: 2 * n * (n + 1), lambda n: [], lambda n: _poch_factors(1, 1, 2, n + 1))


def _phi0(L):
    return _eulerian(L, lambda n: n * n, lambda n: _poch_factors(-1, 1, 2, n), lambda n: [])


def _phi1(L):
    return _eulerian(L, lambda n: (n + 1) ** 2, lambda n: _poch_factors(-1, 1, 2, n), lambda n: [])


def _psi0(L):
    return _eulerian(L, lambda n: (n + 1) * (n + 2) // 2, lambda n: _poch_factors(-1, 1, 1, n), lambda n: [])


def _psi1(L):
    return _eulerian(L, lambda n: n * (n + 1) // 2, lambda n: _poch_factors(-1, 1, 1, n), lambda n: [])


def chi0_eulerian(L):
    """chi_0 from its own definition sum q^n / (q^{n+1};q)_n."""
    return _eulerian(L, lambda n: n, lambda n: [], lambda n: _poch_factors(1, n + 1, 1, n))


def chi1_eulerian(L):
    """chi_1 from its own definition sum q^n / (q^{n+1};q)_{n+1}."""
    return _eulerian(L, lambda n: n, lambda n: [], lambda n: _poch_factors(1, n + 1, 1, n + 1))


def _chi0(L):
    # chi0(q) = 2 F0(q) - phi0(-q)
    return _F0(L).scale(2) - _phi0(L).substitute_neg_q()


def _chi1(L):
    # chi1(q) = 2 F1(q) + q^{-1} phi1(-q)
    return _F1(L).scale(2) + _phi1(L + 1).substitute_neg_q().shift(-1)._trim(L)


def _calF0(L):
    return _eulerian(L, lambda n: n * n, lambda n: [], lambda n: _poch_factors(1, n + 1, 1, n))


def _calF1(L):
    return _eulerian(L, lambda n: (n + 1) ** 2, lambda n: [], lambda n: _poch_factors(1, n + 1, 1, n + 1))


def _calF2(L):
    return _eulerian(L, lambda n: n * (n + 1), lambda n: [], lambda n: _poch_factors(1, n + 1, 1, n + 1))


def _rho_app(L):
    return _eulerian(
        L, lambda n: 2 * n * (n + 1), lambda n: _poch_factors(1, 1, 2, n + 1), lambda n: _poch_factors(1, 3, 6, n + 1)
    )


def _xi_app(L):
    # 1 + 2q sum_{n>=1} q^{6n(n-1)} / ((q;q^6)_n (q^5;q^6)_n)
    body = _eulerian(
        L,
        lambda n: 6 * n * (n - 1) + 1,
        lambda n: [],
        lambda n: _poch_factors(1, 1, 6, n) + _poch_factors(1, 5, 6, n),
        start=1,
    )
    return PowerSeries.one(L) + body.scale(2)


def _sigma_app(L):
    return _eulerian(
        L,
        lambda n: 3 * n * (n - 1),
        lambda n: [],
        lambda n: _poch_factors(-1, 1, 3, n) + _poch_factors(-1, 2, 3, n),
        start=1,
    )


def _trim(self, L):
    return PowerSeries._wrap(self.coeffs[:L].copy())


PowerSeries._trim = _trim

_GENERATORS = {
    "f": _f,
    "phi": _phi,
    "psi": _psi,
    "chi": _chi,
    "omega": _omega,
    "nu": _nu,
    "f0": _f0,
    "f1": _f1,
    "F0": _F0,
    "F1": _F1,
    "phi0": _phi0,
    "phi1": _phi1,
    "psi0": _psi0,
    "psi1": _psi1,
    "chi0": _chi0,
    "chi1": _chi1,
    "calF0": _calF0,
    "calF1": _calF1,
    "calF2": _calF2,
    "rho_app": _rho_app,
    "xi_app": _xi_app,
    "sigma_app": _sigma_app,
}

MOCK_THETA_IDS = tuple(_GENERATORS)


def mock_theta_series(ident: str, L: int) -> PowerSeries:
    """Exact coefficients alpha(0..L-1) of the named q-series."""
    if L < 1:
        raise DomainError("series length must be positive")
    try:
        gen = _GENERATORS[ident]
    except KeyError:
        raise DomainError(f"unknown mock theta id {ident!r}") from None
    return gen(L)


def partition_series(L: int) -> PowerSeries:
    """p(0..L-1) by Euler's pentagonal-number recurrence."""
    if L < 1:
        raise DomainError("series length must be positive")
    p = [0] * L
    p[0] = 1
    for n in range(1, L):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return PowerSeries(p)


_cache: dict[str, PowerSeries] = {}
_cache_lock = threading.Lock()


def oracle_coeff(ident: str, n: int) -> int:
    """alpha_ident(n) exactly; ``ident='partition'`` gives p(n)."""
    if n < 0:
        raise DomainError("coefficient index must be >= 0")
    with _cache_lock:
        series = _cache.get(ident)
    if series is None or len(series) <= n:
        L = max(2 * n + 1, 64, 0 if series is None else 2 * len(series))
        series = partition_series(L) if ident == "partition" else mock_theta_series(ident, L)
        with _cache_lock:
            cur = _cache.get(ident)
            if cur is None or len(cur) < len(series):
                _cache[ident] = series
    return series[n]
