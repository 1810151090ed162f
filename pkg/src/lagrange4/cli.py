"""Command-line front end: ``lgr4 {expsum,density,verify,report}``.

JSON (schema 1) is the canonical output; ``--format csv`` projects the results
table. Exit status: 0 when every check passes, 1 on a failed check, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from typing import Any, Sequence

import numpy as np

from . import __version__, arith, expsum, lagrange, localdata, verify
from .verify import Check

SCHEMA = 1


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _vec4(text: str) -> tuple[int, int, int, int]:
    v = _ints(text)
    if len(v) != 4:
        raise argparse.ArgumentTypeError(f"expected four integers, got {text!r}")
    return tuple(v)  # type: ignore[return-value]


def _cx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _envelope(command: str, params: dict, results: Any, checks: list[Check]) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "params": params,
        "results": results,
        "checks": [c.as_dict() for c in checks],
    }


# --------------------------------------------------------------------------
# expsum


def cmd_expsum(args) -> dict:
    kind = args.kind
    checks: list[Check] = []
    if kind == "gauss":
        closed = expsum.gauss_closed(args.q, args.m, args.n)
        direct = expsum.gauss_direct(args.q, args.m, args.n)
        diff = abs(closed - direct)
        checks.append(Check("closed form = direct summation", diff <= expsum.SIMPLE_RTOL * args.q, diff, expsum.SIMPLE_RTOL * args.q))
        params = {"q": args.q, "m": args.m, "n": args.n}
        results = {"closed": _cx(closed), "direct": _cx(direct)}
    elif kind == "kloosterman":
        k = expsum.kloosterman(args.q, args.m, args.n)
        bound = expsum.weil_bound(args.q, args.m, args.n)
        checks.append(Check("Weil bound", abs(k) <= bound + expsum.SIMPLE_RTOL * args.q, abs(k), bound))
        params = {"q": args.q, "m": args.m, "n": args.n}
        results = {"value": _cx(k), "weil_bound": bound}
    elif kind == "ramanujan":
        closed = expsum.ramanujan_closed(args.q, args.m)
        direct = expsum.kloosterman(args.q, args.m, 0)
        diff = abs(direct - closed)
        checks.append(Check("closed form = K(q, m, 0)", diff <= expsum.SIMPLE_RTOL * args.q, diff, expsum.SIMPLE_RTOL * args.q))
        params = {"q": args.q, "m": args.m}
        results = {"closed": closed, "direct": _cx(direct)}
    elif kind == "charsum":
        if not arith.is_prime(args.p) or args.p == 2:
            raise UsageError("--p must be an odd prime")
        coeffs = args.coeffs
        value = expsum.char_sum_poly(args.p, coeffs)
        square = expsum.is_constant_times_square(args.p, coeffs)
        degree = max((i for i, c in enumerate(coeffs) if c % args.p), default=0)
        bound = (degree - 1) * math.sqrt(args.p)
        if not square:
            checks.append(Check("|sum| <= (k-1) sqrt(p)", abs(value) <= bound + 1e-9, abs(value), bound))
        params = {"p": args.p, "coeffs": coeffs}
        results = {"value": _cx(value), "constant_times_square": square, "degree": degree}
    else:  # vq
        P = expsum.VqParams(args.q, args.N, args.d, args.v, args.b, args.n)
        if not P.is_standard:
            raise UsageError("need N and d odd with d squarefree")
        fast = expsum.vq_fast(P)
        direct = expsum.vq_direct(P)
        tol = expsum.vq_tolerance(P)
        bound = expsum.vq_bound(P, 4.0)
        checks.append(Check("fast = direct", abs(fast - direct) <= tol, abs(fast - direct), tol))
        checks.append(Check("bound with constant 4", abs(fast) <= bound, abs(fast), bound))
        if expsum.vanishes_by_divisibility(P):
            checks.append(Check("vanishes when (q,d) does not divide some n_j", abs(direct) <= tol, abs(direct), tol))
        params = {"q": P.q, "N": P.N, "d": P.d, "v": P.v, "b": list(P.b), "n": list(P.n)}
        results = {"fast": _cx(fast), "direct": _cx(direct)}
    return _envelope(f"expsum {kind}", params, results, checks)


# --------------------------------------------------------------------------
# density


def cmd_density(args) -> dict:
    N = args.N
    if N < 1 or N % 2 == 0:
        raise UsageError("N must be a positive odd integer")
    rows = []
    checks: list[Check] = []
    if args.d:
        for d in args.d:
            if d < 1 or d % 2 == 0 or not arith.is_squarefree(d):
                raise UsageError(f"d = {d} is not odd and squarefree")
            rec = localdata.local_density(N, d)
            rows.append({"d": d, "L": rec.L, "alpha": str(rec.alpha), "psi": rec.psi})
    else:
        for p in arith.primes_up_to(args.p_max)[1:]:
            rec = localdata.local_density(N, p)
            dev = abs(rec.L - p * p) / p**1.5
            rows.append({
                "p": p,
                "L": rec.L,
                "dev": dev,
                "dev_ok": dev <= 30,
                "L_over_4(p-1)^2": rec.L / (4 * (p - 1) ** 2),
                "alpha": str(rec.alpha),
                "psi": rec.psi,
                "psi_ok": rec.psi < 0.9,
            })
        if rows:
            worst = max(r["dev"] for r in rows)
            checks.append(Check("|L - p^2| / p^1.5 <= 30", worst <= 30, worst, 30.0))
            top = max(r["L_over_4(p-1)^2"] for r in rows)
            checks.append(Check("L <= 4(p-1)^2", top <= 1, top, 1.0))
            psi_top = max(r["psi"] for r in rows)
            checks.append(Check("Psi(N, p) < 0.9", psi_top < 0.9, psi_top, 0.9))
    return _envelope("density", {"N": N, "d": args.d, "p_max": args.p_max}, rows, checks)


# --------------------------------------------------------------------------
# verify


def _suite_checks(args, rng) -> tuple[list[Check], Any]:
    s = args.suite
    q = args.quick
    if s == "expsum":
        if q:
            return (verify.check_gauss(rng, 16, 500, 128) + verify.check_kloosterman(rng, 200, 10)
                    + verify.check_vq(rng, 40, 500, 20, 20)), None
        return verify.check_gauss(rng) + verify.check_kloosterman(rng) + verify.check_vq(rng), None
    if s == "local":
        if q:
            return (verify.check_L(rng, 3, 35, 31, 100, 50) + verify.check_psi(rng, 2, 1000, 10)
                    + verify.check_singular_series(rng, (1, 3, 15), 2, 10**4)), None
        return verify.check_L(rng) + verify.check_psi(rng) + verify.check_singular_series(rng), None
    if s == "kappa":
        from . import oscillatory

        a, b = oscillatory.kappa_oscillatory(), oscillatory.kappa_surface()
        res = {m.method: {"value": m.value, "normalized": m.normalized, "error_estimate": m.error_estimate} for m in (a, b)}
        res["relative_gap"] = abs(a.value - b.value) / b.value
        return verify.check_kappa(), res
    if s == "jacobi":
        return verify.check_jacobi(rng, n_max=args.n_max, n_random=5 if q else 20), None
    if s == "sieve":
        return verify.check_sieve(p0=args.p0), None
    if s == "mainterm":
        return verify.check_main_term(rng, n_N=4 if q else 20), None
    # endtoend
    if args.N % 2 == 0:
        raise UsageError("N must be odd")
    return verify.check_end_to_end(args.N, args.z_exp, args.d_exp, args.p0)


def cmd_verify(args) -> dict:
    rng = np.random.default_rng(args.seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        checks, results = _suite_checks(args, rng)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command", "format", "out")}
    return _envelope(f"verify {args.suite}", params, results, checks)


# --------------------------------------------------------------------------
# report


def cmd_report(args) -> dict:
    rows = []
    for N in args.N:
        if N % 2 == 0 or N < 1:
            raise UsageError(f"N = {N} must be a positive odd integer")
        if N > lagrange.ENUM_CEILING:
            raise UsageError(f"N = {N} exceeds the enumeration ceiling {lagrange.ENUM_CEILING}")
        rs = lagrange.enumerate_solutions(N, cache_dir=args.cache)
        for d in args.d:
            if d % 2 == 0 or not arith.is_squarefree(d):
                raise UsageError(f"d = {d} is not odd and squarefree")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rows.append(lagrange.remainder(rs, d).as_dict())
    checks = [Check(f"R = F - M (N={r['N']}, d={r['d']})", r["R"] == r["F"] - r["M"], r["R"], r["F"] - r["M"]) for r in rows]
    return _envelope("report", {"N": args.N, "d": args.d, "cache": args.cache}, rows, checks)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lgr4", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    ap.add_argument("--format", choices=["json", "csv"], default="json")
    ap.add_argument("--out", help="also write the JSON envelope to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("expsum", help="evaluate one exponential or character sum")
    exs = ex.add_subparsers(dest="kind", required=True)
    for kind in ("gauss", "kloosterman"):
        p = exs.add_parser(kind)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
    p = exs.add_parser("ramanujan")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = exs.add_parser("charsum")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--coeffs", type=_ints, required=True, help="c0,c1,...: coefficient of x^i at position i")
    p = exs.add_parser("vq")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--v", type=int, default=0)
    p.add_argument("--b", type=_vec4, default=(1, 1, 1, 1))
    p.add_argument("--n", type=_vec4, default=(0, 0, 0, 0))
    for p in exs.choices.values():
        p.set_defaults(func=cmd_expsum)

    de = sub.add_parser("density", help="L, alpha and Psi table")
    de.add_argument("--N", type=int, required=True)
    g = de.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=_ints)
    g.add_argument("--p-max", type=int)
    de.set_defaults(func=cmd_density)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("suite", choices=["expsum", "local", "sieve", "kappa", "jacobi", "mainterm", "endtoend"])
    ve.add_argument("--quick", action="store_true", help="smaller parameter ranges")
    ve.add_argument("--n-max", type=int, default=10_000)
    ve.add_argument("--N", type=int, default=1_000_003)
    ve.add_argument("--z-exp", type=float, default=0.05)
    ve.add_argument("--d-exp", type=float, default=0.08)
    ve.add_argument("--p0", type=int, default=7)
    ve.set_defaults(func=cmd_verify)

    re_ = sub.add_parser("report", help="F vs M table")
    re_.add_argument("--N", type=_ints, required=True)
    re_.add_argument("--d", type=_ints, default=[1])
    re_.add_argument("--cache", help="directory for the binary representation cache (default $LGR_CACHE_DIR)")
    re_.set_defaults(func=cmd_report)
    return ap


def _csv(results: Any) -> str:
    rows = results if isinstance(results, list) else [results] if isinstance(results, dict) else []
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        env = args.func(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"lgr4: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(env, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    sys.stdout.write(_csv(env["results"]) if args.format == "csv" else text + "\n")
    return 0 if all(c["passed"] for c in env["checks"]) else 1


if __name__ == "__main__":
    sys.exit(main())
