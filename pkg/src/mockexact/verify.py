"""Named verification suites used by ``mockexact verify``.

Each suite returns a list of (check name, passed, detail) triples.  The sizes
here are the desk-scale ones; the test suite runs the full ranges.
"""

from __future__ import annotations

import math

import gmpy2

from . import kernels
from .arith import psi, psi_group, star, unitary_divisors, xi_of_b
from .engine import alpha_exact, partition_pn, poincare_const_18
from .kloosterman import A_general, A_partition, A_partition_whiteman, A_star, A_theta
from .numeric import ctx, divisors, omega_odd
from .qseries import oracle_coeff
from .tables import TABLES, family_char, formula_spec
from .weilrep import S_r_eps

LEVELS = (6, 18, 24, 42, 60)


def suite_identities():
    out = []
    for N in LEVELS:
        U = unitary_divisors(N)
        ok = all(star(u, u, N) == 1 for u in U)
        ok &= all(psi(star(u, v, N), N) == psi(u, N) * psi(v, N) % (2 * N) for u in U for v in U)
        ok &= len(set(psi_group(N))) == len(U)
        out.append((f"psi isomorphism N={N}", ok, ""))
    bad = 0
    for spec in TABLES.values():
        for res, row in spec.rows.items():
            for n in range(res, res + 4 * spec.modulus, spec.modulus):
                for p in psi_group(spec.N):
                    b = row.r * p % (2 * spec.N)
                    lhs = row.c_n * xi_of_b(b, row.r, spec.N, spec.eps)
                    if lhs != spec.kform.k_rule(n) * family_char(spec.kform.family, b):
                        bad += 1
    out.append(("c_n xi(b) = k_n char(b), all rows", bad == 0, f"{bad} mismatches"))
    prec = 200
    with ctx(prec):
        worst = max(abs(A_partition(c, n, prec) - A_partition_whiteman(c, n, prec)) for c in range(1, 61) for n in range(4))
    out.append(("Whiteman = Dedekind form, c<=60", worst < gmpy2.exp2(-180), f"max gap {float(worst):.3g}"))
    return out


def suite_kloosterman():
    out = []
    prec = 200
    tol = gmpy2.exp2(-180)
    with ctx(prec):
        z = all(A_theta("f", n, c, prec=prec).real == 0 for c in range(1, 100, 2) for n in range(1, 4))
        out.append(("f sums vanish for odd c", z, ""))
        g = max(abs(A_theta("f", n, 2 * c, prec=prec).real - A_star(2 * c, n, prec)) for c in range(1, 51) for n in range(1, 6))
        out.append(("A(n|f) = A* on even c", g < tol, f"{float(g):.3g}"))
        worst = 0
        for ident in TABLES:
            row = formula_spec(ident, 5)
            for m in range(1, row.m + 1):
                for c in range(1, 31):
                    a = A_theta(ident, 5, c, m=m, prec=prec).value
                    b = A_general(row, c, m=m, prec=prec).value
                    worst = max(worst, abs(a - row.c_n.to_mpc(prec) * b))
        out.append(("sparse sums = c_n * general sums", worst < tol, f"{float(worst):.3g}"))
    slack = min(
        2 ** omega_odd(c) * math.sqrt(c) - abs(kernels.partition_A_float(c, n)) for c in range(1, 1001) for n in (1, 5, 10)
    )
    out.append(("Weil bound c<=1000", slack > -1e-9, f"min slack {slack:.3g}"))
    return out


def suite_aaw():
    prec = 200
    worst = 0
    with ctx(prec):
        for ident in ("f", "chi", "phi", "psi0", "calF0", "F1"):
            row = formula_spec(ident, 2)
            for c in range(1, 25):
                m = row.m
                lhs = 0
                for u in divisors(math.gcd(m, c)):
                    lhs -= gmpy2.sqrt(u) * S_r_eps(row.N, row.eps, row.r, m // u, -row.d, c // u, prec)
                worst = max(worst, abs(lhs - A_general(row, c, m=m, prec=prec).value))
    return [("AAW decomposition", worst < gmpy2.exp2(-170), f"{float(worst):.3g}")]


def suite_coefficients():
    out = []
    for ident in list(TABLES) + ["chi0", "chi1"]:
        bad = []
        for n in (1, 2, 3, 10):
            try:
                rep = alpha_exact(ident, n)
            except Exception as exc:  # reported, not raised
                bad.append(f"n={n}: {exc}")
                continue
            if rep.rounded_value != oracle_coeff(ident, n):
                bad.append(f"n={n}")
        out.append((f"alpha_{ident}", not bad, ", ".join(bad)))
    ok = all(partition_pn(n).rounded_value == oracle_coeff("partition", n) for n in range(1, 201))
    out.append(("p(n), n<=200", ok, ""))
    return out


def suite_poincare():
    out = []
    for ell in (3, 6):
        for sign in "+-":
            r = poincare_const_18(ell, sign, 2000)
            out.append((f"const-18 ell={ell} sign={sign}", r.error < 0.1, f"err {r.error:.3g}"))
    return out


SUITES = {
    "identities": suite_identities,
    "kloosterman": suite_kloosterman,
    "aaw": suite_aaw,
    "coefficients": suite_coefficients,
    "poincare": suite_poincare,
}


def run_suite(name):
    if name == "all":
        return [r for fn in SUITES.values() for r in fn()]
    return SUITES[name]()


__all__ = ["SUITES", "run_suite"]
