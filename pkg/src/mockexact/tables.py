"""Formula data for the mock theta functions with exact Rademacher-type series.

Each function carries a level N, a character eps of U_N, a parameter m and a
set of rows keyed by the residue of n modulo some modulus.  A row stores the
normalising constant c_n, the linear discriminant d_n = d_A*n + d_B and the
class r mod 2N.  The "k-form" data (k_n and the summation character) drive the
direct sparse sums; both descriptions must agree, and that is checked in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import I, QQi, EpsCharacter
from .numeric import DomainError, kronecker

ORACLE_ONLY = ("nu", "rho_app", "xi_app", "sigma_app")
COMBINATIONS = ("chi0", "chi1")


@dataclass(frozen=True)
class Row:
    c_n: QQi
    d_A: int
    d_B: int
    r: int


@dataclass(frozen=True)
class KForm:
    """Direct sparse-sum data: family tag, k_n rule, extra filter on b."""

    family: str  # third | fifth | seventh | fifth2
    k_rule: Callable[[int], QQi]
    b_filter: Callable[[int], bool] | None = None


@dataclass(frozen=True)
class FormulaSpec:
    ident: str
    N: int
    eps: EpsCharacter
    m: int
    modulus: int
    rows: dict  # residue -> Row
    kform: KForm

    def row(self, n: int) -> Row:
        return self.rows[n % self.modulus]


@dataclass(frozen=True)
class ResolvedRow:
    ident: str
    n: int
    N: int
    eps: EpsCharacter
    m: int
    c_n: QQi
    d: int
    r: int
    kform: KForm

    @property
    def k_n(self) -> QQi:
        return self.kform.k_rule(self.n)


def family_char(family: str, b: int) -> QQi:
    """Summation character of a family, as an exact Gaussian integer."""
    if family == "third":
        return QQi.of(kronecker(-3, b))
    if family == "seventh":
        return QQi.of(kronecker(-21, b))
    if family in ("fifth", "fifth2"):
        k = kronecker(3, b)
        if k == 0 or b % 5 == 0:
            return QQi.of(0)
        unit = {1: QQi.of(1), 2: I, 4: QQi.of(-1), 3: -I}[b % 5]
        return unit * k
    raise KeyError(family)


def _sgn(n):
    return 1 if n % 2 == 0 else -1


def _const(z):
    z = QQi.of(z)
    return lambda n: z


_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)
E3 = EpsCharacter.of(3)
E235 = EpsCharacter.of(2, 3, 5)
E237 = EpsCharacter.of(2, 3, 7)


def _psi_filter(b):
    return b % 48 in (2, 14, 34, 46)


def _build():
    T = {}

    def add(ident, N, eps, m, modulus, rows, kform):
        T[ident] = FormulaSpec(
            ident, N, eps, m, modulus, {k: Row(QQi.of(c), dA, dB, r) for k, (c, dA, dB, r) in rows.items()}, kform
        )

    # order three
    add("f", 6, E3, 1, 1, {0: (1, 24, -1, 1)}, KForm("third", _const(1)))
    add(
        "omega", 6, E3, 1, 2,
        {0: (-_QUARTER, 12, 8, 4), 1: (-_QUARTER, 12, 8, 2)},
        KForm("third", lambda n: QQi.of(-_HALF * _sgn(n))),
    )
    add(
        "chi", 18, E3, 1, 3,
        {0: (1, 24, -1, 1), 1: (1, 24, -1, 7), 2: (-1, 24, -1, 5)},
        KForm("third", _const(1)),
    )
    add(
        "phi", 24, E3, 1, 4,
        {0: (1, 24, -1, 1), 1: (-1, 24, -1, 13), 2: (1, 24, -1, 7), 3: (1, 24, -1, 5)},
        KForm("third", lambda n: QQi.of(_sgn(n))),
    )
    add("psi", 24, E3, 1, 1, {0: (-1, 96, -4, 2)}, KForm("third", _const(1), _psi_filter))

    # order five, m = 1
    add("psi0", 60, E235, 1, 1, {0: (-1, 240, -4, 2)}, KForm("fifth", _const(-I)))
    add("psi1", 60, E235, 1, 1, {0: (-1, 240, 44, 14)}, KForm("fifth", _const(1)))
    add("phi0", 60, E235, 1, 2, {0: (1, 120, -1, 1), 1: (-1, 120, -1, 11)}, KForm("fifth", lambda n: QQi.of(_sgn(n))))
    add(
        "phi1", 60, E235, 1, 2,
        {0: (-1, 120, -49, 7), 1: (1, 120, -49, 13)},
        KForm("fifth", lambda n: -I * _sgn(n)),
    )

    # order five, m = 2
    add("f0", 60, E235, 2, 1, {0: (1, 240, -4, 2)}, KForm("fifth2", _const(I)))
    add("f1", 60, E235, 2, 1, {0: (1, 240, 44, 14)}, KForm("fifth2", _const(-1)))
    add("F0", 60, E235, 2, 2, {0: (-_HALF, 120, -1, 1), 1: (-_HALF, 120, -1, 11)}, KForm("fifth2", _const(-_HALF)))
    add(
        "F1", 60, E235, 2, 2,
        {0: (-_HALF, 120, 71, 13), 1: (-_HALF, 120, 71, 7)},
        KForm("fifth2", _const(QQi(Fraction(0), -_HALF))),
    )

    # order seven
    add("calF0", 42, E237, 1, 1, {0: (1, 168, -1, 1)}, KForm("seventh", _const(1)))
    add("calF1", 42, E237, 1, 1, {0: (-1, 168, -25, 5)}, KForm("seventh", _const(-1)))
    add("calF2", 42, E237, 1, 1, {0: (-1, 168, 47, 11)}, KForm("seventh", _const(-1)))
    return T


TABLES = _build()
FORMULA_IDS = tuple(TABLES)


def _self_check():
    for spec in TABLES.values():
        M = 4 * spec.N
        assert spec.N % 2 == 0
        for res, row in spec.rows.items():
            assert row.d_A > 0 and row.r % 2 == row.d_B % 2
            # check a full period of n in the row's class
            for n in range(res, res + spec.modulus * M, spec.modulus):
                d = row.d_A * n + row.d_B
                if (row.r * row.r + d) % M:
                    raise AssertionError(f"table row for {spec.ident} (n={n}) fails r^2 = -d mod 4N")


_self_check()


def formula_spec(ident: str, n: int) -> ResolvedRow:
    if ident in ORACLE_ONLY:
        raise DomainError(f"{ident} has no exact formula; use the q-series oracle")
    if ident not in TABLES:
        raise DomainError(f"unknown function {ident!r}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    spec = TABLES[ident]
    row = spec.row(n)
    d = row.d_A * n + row.d_B
    if d <= 0:
        raise DomainError(f"d_n = {d} <= 0 for {ident}, n={n}: outside the formula's range")
    return ResolvedRow(ident, n, spec.N, spec.eps, spec.m, row.c_n, d, row.r, spec.kform)
