"""Batch command-line front end.

Exit codes: 0 success / PASS, 1 verification FAIL, 2 usage error.
Results go to stdout, progress to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .lambda_fn import LambdaSpec, lambda_expansion, theta
from .modgroup import UniMat, brace, transversal
from .modpoly import ModPoly, ModPolyError, modular_polynomial
from .numerics import (PrecisionError, QuadPoint, certify_algebraic_integer, j_value,
                       lambda_paths)
from . import scans

log = logging.getLogger("genlambda")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PREC_ENV = "GENLAMBDA_PREC"


class UsageError(Exception):
    pass


def _default_prec() -> int:
    raw = os.environ.get(PREC_ENV, "150")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PREC_ENV} must be an integer, got {raw!r}") from None


def _emit(payload, as_json: bool, text: str, out: str | None = None) -> None:
    body = json.dumps(payload, indent=2, sort_keys=False) + "\n" if as_json else text + "\n"
    if out:
        Path(out).write_text(body)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(body)


def _level(N: int, minimum: int = 7) -> int:
    if N < minimum:
        raise UsageError(f"precondition violated: level N >= {minimum} (got N={N})")
    return N


def _spec(args) -> LambdaSpec:
    N = _level(args.level)
    if not (2 < args.k and 2 * args.k < N):
        raise UsageError(f"precondition violated: 2 < k < N/2 (got k={args.k}, N={N})")
    return LambdaSpec(args.k, N)


def _matrix(text: str) -> UniMat:
    try:
        return UniMat.parse(text)
    except ValueError as exc:
        raise UsageError(f"precondition violated: --matrix a,b,c,d with ad - bc = 1 ({exc})") from None


def _point(text: str) -> QuadPoint:
    try:
        return QuadPoint.parse(text)
    except ValueError as exc:
        raise UsageError(f"precondition violated: --point D or a,b,c imaginary quadratic ({exc})") from None


# ---------------------------------------------------------------------------
# commands


def cmd_expand(args) -> int:
    spec = _spec(args)
    if args.k < 3:
        raise UsageError("precondition violated: 3 <= k")
    A = _matrix(args.matrix)
    f = lambda_expansion(spec, A, args.trunc)
    payload = {"level": spec.level, "k": spec.k, "matrix": A.rows(),
               "integral": f.coefficients_integral(), "order": f.order() if f.terms else None,
               "series": f.to_json()}
    _emit(payload, args.json, str(f))
    return EXIT_OK


def cmd_theta(args) -> int:
    N = _level(args.level)
    r, s = args.r, args.s
    if not (0 < r <= N // 2 and 0 < s <= N // 2 and r != s):
        raise UsageError(f"precondition violated: 0 < r != s <= N/2 (got r={r}, s={s})")
    A = _matrix(args.matrix)
    th = theta(r, s, A, N)
    ell = min(brace(r * A.c, N).brace, brace(s * A.c, N).brace)
    payload = {"level": N, "r": r, "s": s, "matrix": A.rows(), "order": ell, "theta": th.to_json()}
    _emit(payload, args.json, f"theta = {th}  (order {ell})")
    return EXIT_OK


def cmd_transversal(args) -> int:
    N = _level(args.level, minimum=5)
    reps = transversal(N)
    payload = [A.rows() for A in reps]
    # the matrix list is the interface; always JSON
    _emit(payload, True, "")
    log.info("%d representatives", len(reps))
    return EXIT_OK


def cmd_modpoly(args) -> int:
    spec = _spec(args)
    if not spec.qualifies:
        log.warning("(N, k) = (%d, %d) is outside the integrality hypotheses", spec.level, spec.k)
    try:
        phi = modular_polynomial(spec, args.trunc)
    except ModPolyError as exc:
        log.error("modular polynomial check failed: %s", exc)
        return EXIT_FAIL
    text = "\n".join(f"X^{i}: {c}" for i, c in enumerate(phi.coeffs))
    _emit(phi.to_json(), args.json or bool(args.out), text, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    spec = _spec(args)
    point = _point(args.point)
    prec = args.prec or _default_prec()
    A = _matrix(args.matrix)
    alpha = point.alpha(prec).value
    paths = lambda_paths(spec, alpha, prec, A)
    jv = j_value(alpha, prec)
    payload = {"level": spec.level, "k": spec.k, "point": point.describe(), "matrix": A.rows(),
               "prec": prec, "value": paths.direct.to_json(min(prec, 60)),
               "j": jv.to_json(min(prec, 60)),
               "cross_path": f"{float(paths.difference):.3g}"}
    _emit(payload, args.json, f"Lambda_{spec.k} o A(alpha) = {paths.direct}\nj(alpha) = {jv}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _spec(args)
    point = _point(args.point)
    prec = args.prec or _default_prec()
    phi = None
    if args.modpoly:
        phi = ModPoly.from_json(json.loads(Path(args.modpoly).read_text()))
        if (phi.level, phi.k) != (spec.level, spec.k):
            raise UsageError("precondition violated: --modpoly file is for a different (N, k)")
    try:
        report = certify_algebraic_integer(spec, point, prec, phi)
    except (ModPolyError, PrecisionError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    data = report.to_json()
    text = (f"{report.verdict}: Lambda_{spec.k}(alpha) = {report.value}, j = {report.j}, "
            f"residual = {data['residual']}")
    _emit(data, args.json, text)
    return EXIT_FAIL if report.verdict == "FAIL" else EXIT_OK


def _summary(results, as_json: bool) -> int:
    payload = {"verdict": "PASS" if all(r.passed for r in results) else "FAIL",
               "suites": [r.to_json() for r in results]}
    lines = [f"{r.name}: {'PASS' if r.passed else 'FAIL'} ({r.checked} checks, "
             f"{len(r.failures)} failures)" for r in results]
    for r in results:
        if r.failures:
            lines.append(f"  first counterexample [{r.name}]: {json.dumps(r.failures[0])}")
        for rec in r.records:
            lines.append(f"  record [{r.name}]: {json.dumps(rec)}")
    _emit(payload, as_json, "\n".join(lines))
    return EXIT_OK if payload["verdict"] == "PASS" else EXIT_FAIL


def cmd_lemma_scan(args) -> int:
    if args.max_level < 2:
        raise UsageError("precondition violated: --max-level >= 2")
    results = [scans.unit_scan(args.max_level)]
    log.info("unit suite done")
    if not args.skip_divisibility:
        results.append(scans.divisibility_scan(args.max_level))
        log.info("divisibility suite done")
    hi = min(args.max_level, args.nonvanishing_max)
    if hi >= 7:
        results.append(scans.nonvanishing_scan(7, hi))
        log.info("nonvanishing suite done")
    return _summary(results, args.json)


def _parse_levels(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def cmd_prop_scan(args) -> int:
    if args.case:
        parts = [int(x) for x in args.case.split(",")]
        if len(parts) != 7:
            raise UsageError("precondition violated: --case N,r,s,a,b,c,d")
        N, r, s = parts[:3]
        A = UniMat(*parts[3:])
        res1, res2 = scans.ScanResult("congruences"), scans.ScanResult("leading-terms")
        res1.checked = res2.checked = 1
        if not scans.check_congruence_case(N, r, s, A):
            res1.failures.append({"N": N, "r": r, "s": s, "matrix": parts[3:]})
        ok, why = scans.check_leading_case(N, r, s, A)
        if not ok:
            res2.failures.append({"N": N, "r": r, "s": s, "matrix": parts[3:], "reason": why})
        return _summary([res1, res2], args.json)
    try:
        levels = _parse_levels(args.levels)
    except ValueError:
        raise UsageError(f"precondition violated: --levels like 7..9 or 7,8 (got {args.levels})") from None
    for N in levels:
        _level(N)
        if N > 12:
            log.warning("level %d is beyond desk scale; expect long runtimes", N)
    p1, p2 = scans.difference_scan(levels, jobs=args.jobs)
    p3 = scans.integrality_scan(levels, include_excluded=args.include_excluded, jobs=args.jobs)
    results = [p1, p2, p3]
    if not args.no_distinct:
        results.append(scans.distinctness_scan(levels, jobs=args.jobs))
    return _summary(results, args.json)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genlambda", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def lam(sp):
        sp.add_argument("--level", "-N", type=int, required=True)
        sp.add_argument("--k", "-k", type=int, required=True)

    sp = sub.add_parser("expand", help="q-expansion of Lambda_k o A")
    lam(sp)
    sp.add_argument("--matrix", default="1,0,0,1")
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("theta", help="leading coefficient theta_{r,s}(A)")
    sp.add_argument("--level", "-N", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--matrix", default="1,0,0,1")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("transversal", help="coset representatives of Gamma_1(N){+-1}")
    sp.add_argument("--level", "-N", type=int, required=True)
    sp.set_defaults(func=cmd_transversal)

    sp = sub.add_parser("modpoly", help="modular equation Phi(X, j)")
    lam(sp)
    sp.add_argument("--trunc", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_modpoly)

    for name, fn, hlp in (("eval", cmd_eval, "numeric value of Lambda_k o A and j at a point"),
                          ("verify", cmd_verify, "algebraic-integer certificate at a CM point")):
        sp = sub.add_parser(name, help=hlp)
        lam(sp)
        sp.add_argument("--point", required=True, help="discriminant D or a,b,c")
        sp.add_argument("--prec", type=int, default=None, help=f"decimal digits (default ${PREC_ENV} or 150)")
        sp.add_argument("--json", action="store_true")
        if name == "eval":
            sp.add_argument("--matrix", default="1,0,0,1")
        else:
            sp.add_argument("--modpoly", default=None, help="reuse a Phi JSON file from `modpoly --out`")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("lemma-scan", help="exhaustive cyclotomic lemma checks")
    sp.add_argument("--max-level", type=int, default=40)
    sp.add_argument("--nonvanishing-max", type=int, default=30)
    sp.add_argument("--skip-divisibility", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lemma_scan)

    sp = sub.add_parser("prop-scan", help="exhaustive expansion checks over levels")
    sp.add_argument("--levels", default="7..12")
    sp.add_argument("--include-excluded", action="store_true",
                    help="record integrality for (N, k) outside the hypotheses")
    sp.add_argument("--case", default=None, help="single case N,r,s,a,b,c,d")
    sp.add_argument("--no-distinct", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_prop_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"genlambda: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
