"""Exact and high-precision arithmetic primitives.

Integers are Python ints, rationals are :class:`fractions.Fraction`, and
high-precision reals/complexes are ``gmpy2.mpfr`` / ``gmpy2.mpc`` values, which
carry their own precision (``x.precision``).
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

MIN_PRECISION = 64
GUARD_BITS = 96


class DomainError(ValueError):
    """Input outside the domain of a formula or primitive."""


# ---------------------------------------------------------------------------
# precision handling


def precision_for_magnitude(log_magnitude: float) -> int:
    """Working precision for a target of size about ``exp(log_magnitude)``."""
    p = math.ceil(max(log_magnitude, 0.0) / math.log(2)) + GUARD_BITS
    return max(p, MIN_PRECISION)


def env_precision():
    """Precision override from ``MOCKEXACT_PRECISION`` (None when unset)."""
    raw = os.environ.get("MOCKEXACT_PRECISION", "").strip()
    if not raw:
        return None
    p = int(raw)
    if p < MIN_PRECISION:
        raise DomainError(f"MOCKEXACT_PRECISION must be >= {MIN_PRECISION}")
    return p


def ctx(prec: int):
    """A gmpy2 local context at ``prec`` bits."""
    if prec < MIN_PRECISION:
        raise DomainError(f"precision must be >= {MIN_PRECISION} bits, got {prec}")
    return gmpy2.context(gmpy2.get_context(), precision=prec)


def to_real(x, prec: int) -> mpfr:
    if isinstance(x, Fraction):
        with ctx(prec):
            return mpfr(x.numerator) / mpfr(x.denominator)
    return mpfr(x, prec)


# ---------------------------------------------------------------------------
# integer arithmetic


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a, n."""
    return int(gmpy2.kronecker(a, n))


def chi5(b: int) -> mpc:
    """The Dirichlet character mod 5 with 2 -> i (values as exact Gaussian units)."""
    return _CHI5[b % 5]


# powers of 2 mod 5: 2^0=1, 2^1=2, 2^2=4, 2^3=3
_CHI5 = {0: mpc(0), 1: mpc(1), 2: mpc(0, 1), 4: mpc(-1), 3: mpc(0, -1)}
# same character as integer pair (re, im), for exact work
CHI5_EXACT = {0: (0, 0), 1: (1, 0), 2: (0, 1), 4: (-1, 0), 3: (0, -1)}


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError("mobius needs n >= 1")
    result = 1
    for p, e in factorize(n).items():
        if e > 1:
            return 0
        result = -result
    return result


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def omega_odd(c: int) -> int:
    """Number of distinct odd primes dividing c."""
    return sum(1 for p in factorize(c) if p != 2)


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


_SPF_LIMIT = 1 << 20
_spf = None


def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer (trial division + sieve table)."""
    global _spf
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    if n <= _SPF_LIMIT:
        if _spf is None:
            _spf = _spf_table(_SPF_LIMIT)
        while n > 1:
            p = int(_spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); moduli coprime."""
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


# ---------------------------------------------------------------------------
# Dedekind sums


def _sawtooth(x: Fraction) -> Fraction:
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """s(d, c) straight from the sawtooth definition, O(c)."""
    if c < 1:
        raise DomainError("dedekind_sum needs c >= 1")
    return sum((_sawtooth(Fraction(k, c)) * _sawtooth(Fraction(d * k, c)) for k in range(1, c)), Fraction(0))


def dedekind_sum(d: int, c: int) -> Fraction:
    """Exact Dedekind sum s(d, c) by the reciprocity (Euclidean) recursion."""
    if c < 1:
        raise DomainError("dedekind_sum needs c >= 1")
    if math.gcd(d, c) != 1:
        raise DomainError(f"dedekind_sum needs gcd(d, c) = 1, got ({d}, {c})")
    a, b = c, d % c
    total = Fraction(0)
    sign = 1
    # s(b, a) = (a^2 + b^2 + 1)/(12ab) - 1/4 - s(a mod b, b)
    while b > 0:
        total += sign * (Fraction(a * a + b * b + 1, 12 * a * b) - Fraction(1, 4))
        a, b = b, a % b
        sign = -sign
    return total


# ---------------------------------------------------------------------------
# square roots modulo M


@lru_cache(maxsize=1 << 16)
def _sqrt_mod_prime_power(d: int, p: int, k: int) -> tuple[int, ...]:
    """Sorted roots of x^2 = d mod p^k."""
    pk = p**k
    d %= pk
    if d == 0:
        step = p ** ((k + 1) // 2)
        return tuple(range(0, pk, step))
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    if v:
        if v % 2:
            return ()
        w = v // 2
        inner = _sqrt_mod_prime_power(d, p, k - v)
        if not inner:
            return ()
        # x = p^w * y with y^2 = d mod p^(k-2w); y is only fixed mod p^(k-2w)
        mod_small = p ** (k - v)
        out = set()
        for y0 in inner:
            for t in range(p**w):
                out.add(p**w * (y0 + t * mod_small) % pk)
        return tuple(sorted(out))
    if p == 2:
        return _sqrt_mod_2k_unit(d, k)
    if pow(d, (p - 1) // 2, p) != 1:
        return ()
    x = _tonelli_shanks(d % p, p)
    # Hensel lift: p odd, p does not divide 2x
    mod = p
    for _ in range(1, k):
        mod *= p
        fx = x * x - d
        x = (x - fx * pow(2 * x, -1, mod)) % mod
    return tuple(sorted({x % pk, (-x) % pk}))


def _sqrt_mod_2k_unit(d: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (1,)
    if k == 2:
        return (1, 3) if d % 4 == 1 else ()
    if d % 8 != 1:
        return ()
    x = 1
    for j in range(3, k):
        if (x * x - d) % (1 << (j + 1)):
            x += 1 << (j - 1)
    pk = 1 << k
    half = 1 << (k - 1)
    return tuple(sorted({x % pk, -x % pk, (x + half) % pk, (-x + half) % pk}))


def _tonelli_shanks(n: int, p: int) -> int:
    if p == 2 or n == 0:
        return n % p
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(n, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_mod(d: int, M: int) -> list[int]:
    """All residues b mod M with b^2 = d (mod M), sorted."""
    if M < 1:
        raise DomainError("sqrt_mod needs M >= 1")
    if M == 1:
        return [0]
    roots = [0]
    mod = 1
    for p, k in sorted(factorize(M).items()):
        local = _sqrt_mod_prime_power(d % p**k, p, k)
        if not local:
            return []
        pk = p**k
        roots = [crt_pair(r, mod, s, pk) for r in roots for s in local]
        mod *= pk
    roots.sort()
    return roots


# ---------------------------------------------------------------------------
# transcendental primitives


def cplx(re, im, prec: int) -> mpc:
    """re + i*im rounded to `prec` bits."""
    with ctx(prec):
        return mpc(mpfr(re), mpfr(im))


def e_of(t, prec: int) -> mpc:
    """exp(2 pi i t) for rational t; t is reduced mod 1 exactly first."""
    t = Fraction(t)
    num, den = t.numerator % t.denominator, t.denominator
    if num == 0:
        return cplx(1, 0, prec)
    if 2 * num == den:
        return cplx(-1, 0, prec)
    if 4 * num == den:
        return cplx(0, 1, prec)
    if 4 * num == 3 * den:
        return cplx(0, -1, prec)
    with ctx(prec + 16):
        theta = 2 * gmpy2.const_pi() * num / den
        s, c = gmpy2.sin_cos(theta)
    return cplx(c, s, prec)


def sin_pi_rational(num: int, den: int, prec: int) -> mpfr:
    """sin(pi * num / den) with exact reduction of num/den mod 2."""
    num %= 2 * den
    if num == 0 or num == den:
        return mpfr(0, prec)
    with ctx(prec + 16):
        val = gmpy2.sin(gmpy2.const_pi() * num / den)
    return mpfr(val, prec)


def _check_positive(x):
    if not x > 0:
        raise DomainError(f"Bessel argument must be positive, got {x}")


def bessel_I_half(x) -> mpfr:
    """I_{1/2}(x) = sqrt(2/(pi x)) sinh x, at the precision of x."""
    _check_positive(x)
    prec = x.precision if isinstance(x, type(mpfr(1))) else MIN_PRECISION
    with ctx(prec + 16):
        xx = mpfr(x)
        val = gmpy2.sqrt(2 / (gmpy2.const_pi() * xx)) * gmpy2.sinh(xx)
    return mpfr(val, prec)


def bessel_I_three_half(x) -> mpfr:
    """I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh(x)/x), at the precision of x.

    For small x the bracket loses ~2 log2(1/x) bits to cancellation, so below
    2^(-p/4) the Taylor series of the bracket is summed instead.
    """
    _check_positive(x)
    prec = x.precision if isinstance(x, type(mpfr(1))) else MIN_PRECISION
    with ctx(prec + 16):
        xx = mpfr(x)
        if xx < gmpy2.exp2(-(prec // 4)):
            bracket = _i32_bracket_series(xx, prec + 16)
        else:
            # cancellation costs about 2*log2(1/x) bits for x < 1
            extra = 0 if xx >= 1 else 2 * int(-gmpy2.log2(xx)) + 8
            with ctx(prec + 16 + extra):
                xe = mpfr(x)
                bracket = gmpy2.cosh(xe) - gmpy2.sinh(xe) / xe
        val = gmpy2.sqrt(2 / (gmpy2.const_pi() * xx)) * bracket
    return mpfr(val, prec)


def _i32_bracket_series(x, prec):
    # cosh x - sinh(x)/x = sum_{k>=1} x^(2k) (1/(2k)! - 1/(2k+1)!) = sum x^(2k) * 2k/(2k+1)!
    with ctx(prec):
        x2 = x * x
        term = mpfr(1)
        total = mpfr(0)
        k = 1
        fact = mpfr(1)  # (2k+1)!
        while True:
            term *= x2
            fact *= (2 * k) * (2 * k + 1)
            add = term * (2 * k) / fact
            total += add
            if add == 0 or abs(add) < abs(total) * gmpy2.exp2(-prec - 4):
                break
            k += 1
        return total


def bessel_I_three_half_naive(x) -> mpfr:
    """The closed form evaluated directly at the precision of x (test oracle)."""
    prec = x.precision
    with ctx(prec):
        return gmpy2.sqrt(2 / (gmpy2.const_pi() * x)) * (gmpy2.cosh(x) - gmpy2.sinh(x) / x)
