"""Weil representation of the rank-one lattice L(N) and its Kloosterman sums.

Discriminant-group elements are residues h mod 2N standing for h/2N, with
q(h/2N) = -h^2/4N and <x, y> = -2Nxy.  Weight is fixed at k = 1/2.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from . import kernels
from .arith import psi, unitary_divisors
from .kloosterman import DEFAULT_PREC, hist_sum
from .numeric import DomainError, cplx, ctx, e_of

DEBUG = os.environ.get("MOCKEXACT_DEBUG", "").strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class WeilLattice:
    N: int

    @property
    def level_disc(self) -> int:
        return -2 * self.N

    @property
    def signature(self):
        return (0, 1)

    @property
    def size(self) -> int:
        return 2 * self.N

    def q(self, h: int) -> Fraction:
        return Fraction(-h * h, 4 * self.N) % 1

    def bil(self, h: int, h2: int) -> Fraction:
        return Fraction(-h * h2, 2 * self.N) % 1


@dataclass(frozen=True)
class GammaElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError("determinant must be 1")


def rho_T(lat: WeilLattice, h: int, prec: int = DEFAULT_PREC) -> mpc:
    return e_of(lat.q(h), prec)


def _eighth_root(prec):
    # i^((b- - b+)/2) = i^(1/2) = e(1/8)
    return e_of(Fraction(1, 8), prec)


def rho_S(lat: WeilLattice, h: int, h2: int, prec: int = DEFAULT_PREC) -> mpc:
    with ctx(prec + 8):
        z = _eighth_root(prec + 8) * e_of(-lat.bil(h, h2), prec + 8) / gmpy2.sqrt(mpfr(2 * lat.N))
    return mpc(z, precision=prec)


def rho_shintani(lat: WeilLattice, h: int, h2: int, g: GammaElement, prec: int = DEFAULT_PREC) -> mpc:
    """Coefficient rho_{h,h2}(g) for c > 0."""
    if g.c <= 0:
        raise DomainError("Shintani's formula needs c > 0")
    N, c = lat.N, g.c
    counts = kernels.shintani_hist(N, g.a, c, g.d, h % (2 * N), h2 % (2 * N))
    s = hist_sum(counts, 4 * N * c, prec + 8)
    with ctx(prec + 8):
        z = _eighth_root(prec + 8) * s / gmpy2.sqrt(mpfr(2 * N * c))
    return mpc(z, precision=prec)


def _check_admissible(lat: WeilLattice, h: int, m: int):
    if (h * h - m) % (4 * lat.N):
        raise DomainError(f"m={m} is not admissible for the class {h}/{2 * lat.N}")


def _weil_counts(lat, hs, ws, h2, ms, n, c):
    return kernels.weil_hist(lat.N, c, [x % (2 * lat.N) for x in hs], ws, h2 % (2 * lat.N), ms, n)


def _finish(counts, N, c, prec):
    # e(-k/4) with k = 1/2, times the conjugated e(1/8) from rho, is e(-1/4) = -i
    s = hist_sum(counts, 4 * N * c, prec + 8)
    with ctx(prec + 8):
        z = cplx(0, -1, prec + 8) * s / gmpy2.sqrt(mpfr(2 * N * c))
    return mpc(z, precision=prec)


def S_weil(lat: WeilLattice, h_alpha: int, h_beta: int, m: int, n: int, c: int, prec: int = DEFAULT_PREC) -> mpc:
    """Kloosterman sum S_{alpha,beta}(m, n, c) for weight 1/2."""
    if c == 0:
        raise DomainError("c must be nonzero")
    _check_admissible(lat, h_alpha, m)
    _check_admissible(lat, h_beta, n)
    if c < 0:
        z = S_weil(lat, h_alpha, h_beta, m, n, -c, prec)
        with ctx(prec):
            return z.conjugate()
    val = _finish(_weil_counts(lat, [h_alpha], [1], h_beta, [m], n, c), lat.N, c, prec)
    if DEBUG:
        alt = S_weil_by_gamma(lat, h_alpha, h_beta, m, n, c, prec, shift=1)
        with ctx(prec):
            if abs(alt - val) > gmpy2.exp2(-prec + 24):
                raise AssertionError("Kloosterman sum depends on the completion of (c, d)")
    return val


def S_weil_by_gamma(lat, h_alpha, h_beta, m, n, c, prec=DEFAULT_PREC, shift=0) -> mpc:
    """Reference evaluation term by term via rho_shintani; `shift` moves a to a + shift*c."""
    _check_admissible(lat, h_alpha, m)
    _check_admissible(lat, h_beta, n)
    N = lat.N
    p = prec + 16
    with ctx(p):
        acc = cplx(0, 0, p)
        for d in range(c):
            if math.gcd(d, c) != 1:
                continue
            a = (pow(d, -1, c) if c > 1 else 0) + shift * c
            b = (a * d - 1) // c
            rho = rho_shintani(lat, h_alpha, h_beta, GammaElement(a, b, c, d), p)
            acc += rho.conjugate() * e_of(Fraction(-(m * a + n * d), 4 * N * c), p)
        acc *= e_of(Fraction(-1, 8), p)
    return mpc(acc, precision=prec)


def S_r_eps(N: int, eps, r: int, u: int, D: int, c: int, prec: int = DEFAULT_PREC) -> mpc:
    """sum over unitary q of eps(q) S_{psi(q)u/2N, -r/2N}(u^2, D, c)."""
    lat = WeilLattice(N)
    if c < 1:
        raise DomainError("c must be positive")
    hs, ws, ms = [], [], []
    for q in unitary_divisors(N):
        h = psi(q, N) * u % (2 * N)
        _check_admissible(lat, h, u * u)
        hs.append(h)
        ws.append(eps(q))
        ms.append(u * u)
    _check_admissible(lat, -r, D)
    return _finish(_weil_counts(lat, hs, ws, -r, ms, D, c), N, c, prec)
