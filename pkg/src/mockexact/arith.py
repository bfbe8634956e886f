"""Unitary divisors, the psi isomorphism, Atkin-Lehner action on quadratic forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpc

from .numeric import DomainError, ctx, factorize, sqrt_mod


# ---------------------------------------------------------------------------
# exact Gaussian rationals


@dataclass(frozen=True)
class QQi:
    """Exact complex rational re + i*im."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, x) -> "QQi":
        if isinstance(x, QQi):
            return x
        if isinstance(x, tuple):
            return cls(Fraction(x[0]), Fraction(x[1]))
        return cls(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = QQi.of(other)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QQi.of(other))

    def __mul__(self, other):
        o = QQi.of(other)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return QQi(self.re, -self.im)

    def is_real(self):
        return self.im == 0

    def to_mpc(self, prec):
        with ctx(prec):
            re = gmpy2.mpfr(self.re.numerator) / self.re.denominator
            im = gmpy2.mpfr(self.im.numerator) / self.im.denominator
            return mpc(re, im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


I = QQi(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# unitary divisors


def is_unitary(u: int, N: int) -> bool:
    return u >= 1 and N % u == 0 and math.gcd(u, N // u) == 1


@lru_cache(maxsize=None)
def unitary_divisors(N: int) -> tuple[int, ...]:
    if N < 1:
        raise DomainError("level must be positive")
    out = [1]
    for p, e in factorize(N).items():
        out += [u * p**e for u in out]
    return tuple(sorted(out))


@dataclass(frozen=True)
class LevelData:
    N: int
    unitary_divisors: tuple[int, ...]

    @classmethod
    def of(cls, N):
        return cls(N, unitary_divisors(N))


def _check_unitary(u, N):
    if not is_unitary(u, N):
        raise DomainError(f"{u} is not a unitary divisor of {N}")


def star(a: int, b: int, N: int) -> int:
    """Group law on U_N: a*b/gcd(a,b)^2."""
    _check_unitary(a, N)
    _check_unitary(b, N)
    g = math.gcd(a, b)
    return a * b // (g * g)


def psi(u: int, N: int) -> int:
    """The residue x mod 2N with x = 1 (mod 2N/u) and x = -1 (mod 2u)."""
    _check_unitary(u, N)
    M = 2 * N
    # moduli 2N/u and 2u overlap in the factor 2, so search the small range directly
    hits = [x for x in range(1, M, 2) if (x - 1) % (M // u) == 0 and (x + 1) % (2 * u) == 0]
    if len(hits) != 1:
        raise AssertionError(f"psi({u}) not unique mod {M}")
    return hits[0]


@dataclass(frozen=True)
class EpsCharacter:
    """Character of U_N: eps(u) = -1 raised to the number of listed primes dividing u."""

    prime_set: frozenset

    @classmethod
    def of(cls, *primes):
        return cls(frozenset(primes))

    def __call__(self, u: int) -> int:
        return -1 if sum(1 for p in self.prime_set if u % p == 0) % 2 else 1

    def label(self):
        return "".join(f"eps{p}" for p in sorted(self.prime_set))


def psi_group(N: int) -> tuple[int, ...]:
    """Psi_{2N} = psi(U_N), sorted."""
    return tuple(sorted(psi(u, N) for u in unitary_divisors(N)))


def xi_of_b(b: int, r: int, N: int, eps: EpsCharacter) -> int:
    """sum of eps(q) over unitary q with r*psi(q) = b (mod 2N)."""
    M = 2 * N
    return sum(eps(q) for q in unitary_divisors(N) if (r * psi(q, N) - b) % M == 0)


# ---------------------------------------------------------------------------
# quadratic forms


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def act(self, M) -> "QuadForm":
        """Action of an integral matrix [[A, B], [C, D]] scaled by 1/sqrt(det)."""
        (A, B), (C, D) = M
        det = A * D - B * C
        x0, y0 = D, -C  # image of (1, 0)
        x1, y1 = -B, A  # image of (0, 1)
        a = self.a * x0 * x0 + self.b * x0 * y0 + self.c * y0 * y0
        c = self.a * x1 * x1 + self.b * x1 * y1 + self.c * y1 * y1
        b = 2 * self.a * x0 * x1 + self.b * (x0 * y1 + x1 * y0) + 2 * self.c * y0 * y1
        if a % det or b % det or c % det:
            raise DomainError("matrix does not preserve integrality of the form")
        return QuadForm(a // det, b // det, c // det)


def atkin_lehner_matrix(u: int, N: int):
    """Integral W_u = [[u, beta], [N, delta*u]] with det u, beta minimal nonnegative."""
    _check_unitary(u, N)
    w = N // u
    beta = (-pow(w, -1, u)) % u if u > 1 else 0
    delta, rem = divmod(1 + beta * w, u)
    assert rem == 0
    return ((u, beta), (N, delta * u))


def atkin_lehner_b(u: int, Q: QuadForm, N: int) -> int:
    """Middle-coefficient class mod 2N of W_u Q, i.e. psi(u) * b mod 2N."""
    if Q.a % N:
        raise DomainError(f"form {Q} does not have N | a for N={N}")
    via_psi = psi(u, N) * Q.b % (2 * N)
    moved = Q.act(atkin_lehner_matrix(u, N))
    if moved.a % N or moved.b % (2 * N) != via_psi:
        raise AssertionError(f"W_{u} matrix action disagrees with psi for {Q}")
    return via_psi


def gamma_infty_reps(N: int, D: int, a_max: int) -> list[tuple[int, int]]:
    """Pairs (a, b) with N | a <= a_max, 0 <= b < 2a and b^2 = D (mod 4a)."""
    if D >= 0:
        raise DomainError("discriminant must be negative")
    if D % 4 not in (0, 1):
        return []  # b^2 = D (mod 4) has no solution
    out = []
    for a in range(N, a_max + 1, N):
        out += [(a, b) for b in sqrt_mod(D, 4 * a) if b < 2 * a]
    return out


def heegner_point(Q: QuadForm, prec: int = 128) -> mpc:
    """Root of Q(tau, 1) = 0 in the upper half plane."""
    D = Q.disc
    if D >= 0 or Q.a <= 0:
        raise DomainError(f"{Q} is not positive definite")
    with ctx(prec):
        two_a = gmpy2.mpfr(2 * Q.a)
        return mpc(-Q.b / two_a, gmpy2.sqrt(gmpy2.mpfr(-D)) / two_a)
