"""Exhaustive verification suites over desk-scale levels.

Each suite returns a :class:`ScanResult`; failures carry enough data to
reproduce the single case.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable

from .cyclotomic import CycNum, NotDivisibleError, zeta_pow
from .lambda_fn import (LambdaSpec, is_prime_power, lambda_expansion, lambda_order, omega_ratio,
                        phi_cofactor, phi_diff_slash, difference_closed_form, theta)
from .modgroup import E2, UniMat, brace, same_coset, transversal

log = logging.getLogger(__name__)


@dataclass
class ScanResult:
    name: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "ScanResult") -> "ScanResult":
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.records.extend(other.records)
        return self

    def to_json(self, max_failures: int = 5) -> dict:
        return {
            "suite": self.name,
            "checked": self.checked,
            "verdict": "PASS" if self.passed else "FAIL",
            "failures": self.failures[:max_failures],
            "failure_count": len(self.failures),
            "records": self.records,
        }


def _parallel_map(fn: Callable, items: Iterable, jobs: int) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# cyclotomic suites


def unit_scan(max_level: int) -> ScanResult:
    """|norm(1 - zeta^k)| = 1 exactly when N/(k, N) is not a prime power."""
    res = ScanResult("units")
    for N in range(2, max_level + 1):
        for k in range(1, N):
            nrm = abs((1 - zeta_pow(N, k)).norm())
            unit_expected = not is_prime_power(N // gcd(k, N))
            ok = nrm == 1 if unit_expected else nrm > 1
            res.checked += 1
            if not ok:
                res.failures.append({"N": N, "k": k, "norm": str(nrm)})
    return res


def divisibility_scan(max_level: int) -> ScanResult:
    """(1 - zeta^l) / (1 - zeta^k) lies in Z[zeta] whenever (k, N) divides l."""
    res = ScanResult("divisibility")
    for N in range(2, max_level + 1):
        for k in range(1, N):
            delta = gcd(k, N)
            den = 1 - zeta_pow(N, k)
            for ell in range(0, N, delta):
                res.checked += 1
                try:
                    (1 - zeta_pow(N, ell)).divide_exact(den)
                except NotDivisibleError:
                    res.failures.append({"N": N, "k": k, "l": ell})
    return res


def nonvanishing_scan(min_level: int, max_level: int) -> ScanResult:
    """zeta^{r*-s*} != 1 when {rc} = {sc}; also zeta^{r*+s*} != 1 when that brace is 0 or N/2."""
    res = ScanResult("nonvanishing")
    for N in range(min_level, max_level + 1):
        one = CycNum.one(N)
        for c in range(N):
            for d in range(N):
                if gcd(c, d) != 1:
                    continue
                data = {}
                for r in range(1, N // 2 + 1):
                    b = brace(r * c, N)
                    data[r] = (b.brace, b.mu * r * d)
                for r in range(1, N // 2 + 1):
                    br, rs = data[r]
                    for s in range(1, N // 2 + 1):
                        bs, ss = data[s]
                        if s == r or bs != br:
                            continue
                        res.checked += 1
                        if zeta_pow(N, rs - ss) == one:
                            res.failures.append({"N": N, "c": c, "d": d, "r": r, "s": s, "kind": "minus"})
                        if br == 0 or 2 * br == N:
                            res.checked += 1
                            if zeta_pow(N, rs + ss) == one:
                                res.failures.append({"N": N, "c": c, "d": d, "r": r, "s": s, "kind": "plus"})
    return res


# ---------------------------------------------------------------------------
# expansion suites


def _case(A: UniMat, N: int, r: int, s: int) -> dict:
    return {"N": N, "r": r, "s": s, "matrix": [A.a, A.b, A.c, A.d]}


def check_congruence_case(N: int, r: int, s: int, A: UniMat) -> bool:
    diff = phi_diff_slash(r, s, A, N, N)
    return diff.congruent_mod(difference_closed_form(r, s, A, N), N)


def check_leading_case(N: int, r: int, s: int, A: UniMat, extra: int | None = None) -> tuple[bool, str]:
    """theta equals the leading coefficient, the order is min({rc},{sc}), and the
    cofactor is 1 + q * (integral series)."""
    extra = 2 * N if extra is None else extra
    th = theta(r, s, A, N)
    if th.is_zero():
        return False, "theta is zero"
    ell = min(brace(r * A.c, N).brace, brace(s * A.c, N).brace)
    diff = phi_diff_slash(r, s, A, N, ell + 1)
    if diff.order() != ell:
        return False, f"order {diff.order()} != {ell}"
    if diff.leading_coefficient() != th:
        return False, f"leading coefficient {diff.leading_coefficient()} != theta {th}"
    cof = phi_cofactor(r, s, A, N, extra)
    if cof.order() != 0 or cof[0] != 1:
        return False, "cofactor constant term is not 1"
    if not cof.coefficients_integral():
        return False, "cofactor has non-integral coefficients"
    return True, ""


def _difference_level(N: int) -> tuple[ScanResult, ScanResult]:
    p1, p2 = ScanResult("congruences"), ScanResult("leading-terms")
    for A in transversal(N):
        for r in range(1, N // 2 + 1):
            for s in range(1, r):
                p1.checked += 1
                if not check_congruence_case(N, r, s, A):
                    p1.failures.append(_case(A, N, r, s))
                for rr, ss in ((r, s), (s, r)):
                    p2.checked += 1
                    ok, why = check_leading_case(N, rr, ss, A)
                    if not ok:
                        p2.failures.append({**_case(A, N, rr, ss), "reason": why})
    log.info("congruences, leading terms: level %d done", N)
    return p1, p2


def difference_scan(levels: Iterable[int], jobs: int = 1) -> tuple[ScanResult, ScanResult]:
    p1, p2 = ScanResult("congruences"), ScanResult("leading-terms")
    for a, b in _parallel_map(_difference_level, levels, jobs):
        p1.merge(a)
        p2.merge(b)
    return p1, p2


def lambda_specs(levels: Iterable[int], qualifying_only: bool = True) -> list[LambdaSpec]:
    out = []
    for N in levels:
        for k in range(3, (N + 1) // 2):
            spec = LambdaSpec(k, N)
            if 2 * k < N and (spec.qualifies or not qualifying_only):
                out.append(spec)
    return out


def _integrality_spec(args) -> ScanResult:
    spec, trunc_factor = args
    N = spec.level
    res = ScanResult("integrality")
    integral_all = True
    for A in transversal(N):
        f = lambda_expansion(spec, A, trunc_factor * N)
        ok = (f.coefficients_integral() and f.order() == lambda_order(spec, A)
              and f.leading_coefficient() == omega_ratio(spec, A))
        integral_all &= f.coefficients_integral()
        res.checked += 1
        if spec.qualifies and not ok:
            res.failures.append({"N": N, "k": spec.k, "matrix": [A.a, A.b, A.c, A.d]})
    res.records.append({"N": N, "k": spec.k, "case": spec.integrality_case,
                        "all_integral": integral_all})
    log.info("integrality: N=%d k=%d done", N, spec.k)
    return res


def integrality_scan(levels: Iterable[int], include_excluded: bool = False, jobs: int = 1,
               trunc_factor: int = 3) -> ScanResult:
    """Integrality of every conjugate Lambda_k o A through q^{3N}.

    Hypothesis-violating (N, k) are only recorded, never asserted.
    """
    specs = lambda_specs(levels, qualifying_only=not include_excluded)
    res = ScanResult("integrality")
    for r in _parallel_map(_integrality_spec, [(s, trunc_factor) for s in specs], jobs):
        res.merge(r)
    return res


def _distinct_spec(args) -> ScanResult:
    spec, trunc_factor = args
    N = spec.level
    res = ScanResult("distinctness")
    reps = transversal(N)
    seen: dict[tuple, UniMat] = {}
    for A in reps:
        f = lambda_expansion(spec, A, trunc_factor * N)
        key = tuple(sorted((e, c) for e, c in f.terms.items()))
        res.checked += 1
        if key in seen:
            res.failures.append({"N": N, "k": spec.k, "matrix": [A.a, A.b, A.c, A.d],
                                 "equal_to": [seen[key].a, seen[key].b, seen[key].c, seen[key].d]})
        else:
            seen[key] = A
    # the identity's expansion must come only from the identity coset
    base = lambda_expansion(spec, E2, trunc_factor * N)
    for A in reps:
        if not same_coset(A, E2, N) and lambda_expansion(spec, A, trunc_factor * N) == base:
            res.failures.append({"N": N, "k": spec.k, "matrix": [A.a, A.b, A.c, A.d],
                                 "equal_to": "identity"})
    log.info("distinctness: N=%d k=%d done", N, spec.k)
    return res


def distinctness_scan(levels: Iterable[int], jobs: int = 1, trunc_factor: int = 4) -> ScanResult:
    specs = [LambdaSpec(k, N) for N in levels for k in range(3, N) if 2 * k < N]
    res = ScanResult("distinctness")
    for r in _parallel_map(_distinct_spec, [(s, trunc_factor) for s in specs], jobs):
        res.merge(r)
    return res
