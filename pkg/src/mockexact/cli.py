"""Command-line front end.

stdout carries only JSON or CSV; failures are signalled by exit status:
2 domain error, 3 non-convergence, 4 oracle/exact mismatch (or a failed suite).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import gmpy2

from .engine import NonConvergenceError, TruncationPolicy, alpha_exact, cancellation_report, partition_pn, poincare_const_18
from .kloosterman import A_general, A_partition, A_theta, partial_sums
from .numeric import DomainError, ctx
from .qseries import MOCK_THETA_IDS, oracle_coeff
from .tables import formula_spec

EXIT_DOMAIN, EXIT_NONCONV, EXIT_MISMATCH = 2, 3, 4
FUNCTIONS = tuple(MOCK_THETA_IDS) + ("partition",)


class _Fail(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _decimal(x, prec):
    """Decimal string of an mpfr; exact zero prints as '0'."""
    if x == 0:
        return "0"
    digits = max(1, int(prec * math.log10(2)))
    with ctx(prec):
        return format(x, f".{digits}g")


def _emit_json(rec):
    sys.stdout.write(json.dumps(rec) + "\n")


def _emit_csv(header, rows, path=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _check_function(name):
    if name not in FUNCTIONS:
        raise _Fail(EXIT_DOMAIN, f"unknown function {name!r}")


def _policy(args):
    kw = {}
    if getattr(args, "precision", None):
        kw["precision"] = args.precision
    if getattr(args, "c_max", None):
        kw["c_hard_max"] = args.c_max
    return TruncationPolicy(**kw)


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeff(args):
    _check_function(args.function)
    if args.n < 0:
        raise _Fail(EXIT_DOMAIN, "n must be nonnegative")
    t0 = time.perf_counter()
    rec = {
        "command": "coeff",
        "function": args.function,
        "n": args.n,
        "method": args.method,
        "value": None,
        "residual": None,
        "c_used": None,
        "precision_bits": None,
        "elapsed_ms": None,
    }
    exact = oracle = None
    if args.method in ("exact", "both"):
        policy = _policy(args)
        if args.function == "partition":
            rep = partition_pn(args.n, policy)
        else:
            rep = alpha_exact(args.function, args.n, policy, args.path)
        exact = rep.rounded_value
        rec.update(residual=rep.residual, c_used=rep.c_used, precision_bits=rep.precision_used)
    if args.method in ("oracle", "both"):
        oracle = oracle_coeff(args.function, args.n)
    rec["value"] = str(exact if exact is not None else oracle)
    if args.method == "both":
        rec["oracle_value"] = str(oracle)
        rec["match"] = exact == oracle
    rec["elapsed_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    _emit_json(rec)
    if args.method == "both" and exact != oracle:
        raise _Fail(EXIT_MISMATCH, f"exact {exact} != oracle {oracle}")


def cmd_kloosterman(args):
    _check_function(args.function)
    if args.c < 1:
        raise _Fail(EXIT_DOMAIN, "c must be >= 1")
    prec = args.precision or 200
    t0 = time.perf_counter()
    extra = {}
    if args.function == "partition":
        val = A_partition(args.c, args.n, prec)
        variant = "dedekind"
    else:
        row = formula_spec(args.function, args.n)
        m = args.m or 1
        variant = args.variant
        if variant == "sparse":
            val = A_theta(row, args.n, args.c, m=m, prec=prec).real
        else:
            raw = A_general(row, args.c, m=m, prec=prec).real
            with ctx(prec):
                val = raw * gmpy2.mpfr(row.c_n.re.numerator) / row.c_n.re.denominator
            extra = {"raw_value": _decimal(raw, prec), "c_n": str(row.c_n)}
    rec = {
        "command": "kloosterman",
        "function": args.function,
        "n": args.n,
        "method": variant,
        "value": _decimal(val, prec),
        "residual": None,
        "c_used": args.c,
        "precision_bits": prec,
        "elapsed_ms": round(1000 * (time.perf_counter() - t0), 3),
    }
    rec.update(extra)
    _emit_json(rec)


def cmd_partial_sums(args):
    _check_function(args.function)
    tab = partial_sums(args.function, args.n, args.x_max, args.m, odd_only=args.odd_only, workers=args.threads)
    _emit_csv(["x", "partial_sum", "last_term"], [(x, repr(s), repr(t)) for x, s, t in tab.rows()], args.output)


def cmd_cancellation(args):
    _check_function(args.function)
    t0 = time.perf_counter()
    rep = cancellation_report(args.function, args.n, args.x_max, args.m, odd_only=args.odd_only, workers=args.threads)
    if args.output:
        _emit_csv(["x", "partial_sum", "last_term"], rep.rows, args.output)
    _emit_json(
        {
            "command": "cancellation",
            "function": args.function,
            "n": args.n,
            "method": "odd-c" if args.odd_only else "all-c",
            "value": None if rep.exponent is None else repr(rep.exponent),
            "residual": None,
            "c_used": args.x_max,
            "precision_bits": 53,
            "elapsed_ms": round(1000 * (time.perf_counter() - t0), 3),
            "r2": rep.r2,
            "degenerate": rep.degenerate,
            "table": [list(r) for r in rep.rows],
        }
    )


def cmd_poincare18(args):
    r = poincare_const_18(args.ell, args.sign, args.c_max, method=args.method)
    _emit_csv(["checkpoint_c", "re", "im", "abs_err"], [(c, repr(a), repr(b), repr(e)) for c, a, b, e in r.trace], args.output)


def cmd_verify(args):
    from .verify import SUITES, run_suite

    if args.suite not in SUITES and args.suite != "all":
        raise _Fail(EXIT_DOMAIN, f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
    results = run_suite(args.suite)
    for name, ok, detail in results:
        _emit_json({"command": "verify", "suite": args.suite, "check": name, "passed": bool(ok), "detail": detail})
    if not all(ok for _, ok, _ in results):
        raise _Fail(EXIT_MISMATCH, "verification failed")


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="mockexact", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeff", help="one coefficient by q-series and/or exact formula")
    c.add_argument("--function", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--method", choices=("oracle", "exact", "both"), default="both")
    c.add_argument("--path", choices=("k_form", "table_form", "both"), default="both")
    c.add_argument("--precision", type=int)
    c.add_argument("--c-max", type=int)
    c.set_defaults(fn=cmd_coeff)

    k = sub.add_parser("kloosterman", help="a single Kloosterman-type sum")
    k.add_argument("--function", required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--c", type=int, required=True)
    k.add_argument("--m", type=int)
    k.add_argument("--variant", choices=("sparse", "general"), default="sparse")
    k.add_argument("--precision", type=int)
    k.set_defaults(fn=cmd_kloosterman)

    for name, fn, hlp in (
        ("partial-sums", cmd_partial_sums, "running sums of A_c/c as CSV"),
        ("cancellation", cmd_cancellation, "growth exponent of the running sums"),
    ):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--function", required=True)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--x-max", type=int, required=True)
        s.add_argument("--m", type=int, default=1)
        s.add_argument("--odd-only", action="store_true")
        s.add_argument("--threads", type=int, default=1)
        s.add_argument("--output")
        s.set_defaults(fn=fn)

    q = sub.add_parser("poincare18", help="constant term of the level-18 Poincare series")
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--sign", choices=("plus", "minus", "+", "-"), default="plus")
    q.add_argument("--c-max", type=int, default=20_000)
    q.add_argument("--method", choices=("collapsed", "direct"), default="collapsed")
    q.add_argument("--output")
    q.set_defaults(fn=cmd_poincare18)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", required=True)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_DOMAIN if exc.code else 0
    try:
        args.fn(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    return 0


if __name__ == "__main__":
    sys.exit(main())
