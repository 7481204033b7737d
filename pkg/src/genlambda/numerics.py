"""Arbitrary-precision evaluation of wp, j and Lambda_k at points of the
upper half plane, and the algebraic-integer certificate at CM points.

Every function builds its own mpmath context from the requested precision;
no global precision state is touched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .cyclotomic import CycNum
from .lambda_fn import LambdaSpec, lambda_expansion
from .modgroup import E2, S, UniMat
from .modpoly import ModPoly, j_expansion, modular_polynomial
from .qseries import QSeries

__all__ = [
    "APComplex",
    "CertReport",
    "PrecisionError",
    "QuadPoint",
    "certify_algebraic_integer",
    "division_ratio_value",
    "evaluate_series",
    "j_value",
    "lambda_paths",
    "lambda_value",
    "reduce_point",
    "wp_value",
]

GUARD = 15
CROSS_MARGIN = 50
MAX_REDUCTION_STEPS = 10_000


class PrecisionError(ArithmeticError):
    pass


def _ctx(prec: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = prec + GUARD
    return ctx


def _num(ctx, x):
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


@dataclass(frozen=True)
class APComplex:
    """A complex value together with the decimal precision it was computed at."""

    value: mpmath.mpc
    prec: int

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def to_json(self, digits: int | None = None) -> dict:
        digits = digits or self.prec
        return {"re": mpmath.nstr(self.re, digits, min_fixed=-5, max_fixed=digits),
                "im": mpmath.nstr(self.im, digits, min_fixed=-5, max_fixed=digits)}

    def __str__(self):
        return mpmath.nstr(self.value, min(self.prec, 30))


def _is_fundamental(D: int) -> bool:
    def squarefree(n):
        n = abs(n)
        p = 2
        while p * p <= n:
            if n % (p * p) == 0:
                return False
            p += 1
        return True

    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


@dataclass(frozen=True)
class QuadPoint:
    """Imaginary quadratic point alpha, root of a alpha^2 + b alpha + c = 0 with Im > 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0 or self.discriminant >= 0:
            raise ValueError(f"{self.a}x^2 + {self.b}x + {self.c} has no root in the upper half plane")

    @classmethod
    def from_discriminant(cls, D: int) -> "QuadPoint":
        """D = 0 mod 4 gives sqrt(D)/2, D = 1 mod 4 gives (1 + sqrt(D))/2."""
        if D >= 0 or D % 4 not in (0, 1):
            raise ValueError(f"{D} is not a negative discriminant")
        if D % 4 == 0:
            return cls(1, 0, -D // 4)
        return cls(1, -1, (1 - D) // 4)

    @classmethod
    def parse(cls, text: str) -> "QuadPoint":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) == 1:
            return cls.from_discriminant(int(parts[0]))
        if len(parts) == 3:
            return cls(*(int(p) for p in parts))
        raise ValueError(f"point must be D or a,b,c; got {text!r}")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def maximal_order(self) -> bool:
        return abs(self.a) == 1 and _is_fundamental(self.discriminant)

    def alpha(self, prec: int) -> APComplex:
        ctx = _ctx(prec)
        a, b = (self.a, self.b) if self.a > 0 else (-self.a, -self.b)
        val = (-b + ctx.sqrt(self.discriminant)) / (2 * a)
        return APComplex(ctx.mpc(val), prec)

    def describe(self) -> str:
        return f"{self.a}x^2{self.b:+d}x{self.c:+d} (D={self.discriminant})"


def reduce_point(tau, prec: int = 50) -> tuple[object, UniMat]:
    """(tau', M) with tau' = M tau, |Re tau'| <= 1/2 and |tau'| >= 1."""
    ctx = _ctx(prec)
    tau = ctx.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("point is not in the upper half plane")
    M = E2
    for _ in range(MAX_REDUCTION_STEPS):
        n = int(ctx.nint(tau.real))
        if n:
            tau -= n
            M = UniMat(1, -n, 0, 1) @ M
        if abs(tau) < 1 - ctx.eps * 100:
            tau = -1 / tau
            M = S @ M
        else:
            return tau, M
    raise PrecisionError("point reduction did not converge")


def _wp_normalized(ctx, z, tau):
    """(2 pi i)^-2 wp(z; Z + Z tau) for reduced tau and |Im z| <= Im tau / 2."""
    two_pi_i = 2j * ctx.pi
    w = ctx.exp(two_pi_i * z)
    q = ctx.exp(two_pi_i * tau)
    wi = 1 / w
    total = ctx.mpf(1) / 12 + w / (1 - w) ** 2
    eps = ctx.mpf(10) ** (-(ctx.dps + 5))
    qn = q
    aq = abs(q)
    tail_factor = 1 / (1 - aq)
    for _ in range(100000):
        a = qn * w
        b = qn * wi
        term = a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
        total += term
        if abs(term) * tail_factor < eps and abs(qn) < eps ** 0.5:
            return total
        qn *= q
    raise PrecisionError("wp series did not converge")


def wp_value(z, tau, prec: int) -> APComplex:
    """wp(z; Z + Z tau) to ``prec`` digits."""
    ctx = _ctx(prec)
    z, tau = _num(ctx, z), _num(ctx, tau)
    tau_r, M = reduce_point(tau, prec)
    factor = M.c * tau + M.d
    zr = z / factor
    # reduce zr modulo Z + Z tau_r
    y = zr.imag / tau_r.imag
    zr -= ctx.nint(y) * tau_r
    zr -= ctx.nint(zr.real)
    if abs(zr) < ctx.mpf(10) ** (-(prec // 2)):
        raise ZeroDivisionError("z lies on the period lattice (pole of wp)")
    val = _wp_normalized(ctx, zr, tau_r) * (2j * ctx.pi) ** 2 / factor ** 2
    return APComplex(val, prec)


# ---------------------------------------------------------------------------
# series evaluation


def _cyc_numeric(ctx, level: int):
    zeta = ctx.expjpi(ctx.mpf(2) / level)
    powers = [ctx.mpc(1)]
    for _ in range(level):
        powers.append(powers[-1] * zeta)

    def value(c):
        if isinstance(c, CycNum):
            acc = ctx.mpc(0)
            for i, x in enumerate(c.num):
                if x:
                    acc += x * powers[i]
            return acc / c.den
        return ctx.mpf(c.numerator) / c.denominator if hasattr(c, "numerator") else ctx.mpf(c)

    return value


def evaluate_series(series: QSeries, q, prec: int, level: int | None = None):
    """Sum of the known terms of ``series`` at q; returns (value, largest tail term)."""
    ctx = _ctx(prec)
    q = ctx.mpc(q)
    value = _cyc_numeric(ctx, level or series.ring.level)
    total = ctx.mpc(0)
    tail = ctx.mpf(0)
    exps = series.exponents()
    cut = (series.trunc - (level or 1)) if series.trunc != math.inf else None
    for e in exps:
        t = value(series.terms[e]) * q ** e
        total += t
        if cut is not None and e >= cut:
            tail = max(tail, abs(t))
    return total, tail


@lru_cache(maxsize=64)
def _cached_expansion(spec: LambdaSpec, A: UniMat, trunc: int) -> QSeries:
    return lambda_expansion(spec, A, trunc)


def _series_terms_needed(im_tau, level: int, prec: int) -> int:
    rate = 2 * math.pi * float(im_tau) / level / math.log(10)
    return int(math.ceil((prec + GUARD) / rate * 1.15)) + 2 * level


def _lambda_series_value(spec: LambdaSpec, A: UniMat, tau, prec: int):
    """Lambda_k o A at tau from its q-expansion, q = exp(2 pi i tau / N)."""
    ctx = _ctx(prec)
    tau = ctx.mpc(tau)
    N = spec.level
    q = ctx.exp(2j * ctx.pi * tau / N)
    trunc = _series_terms_needed(tau.imag, N, prec)
    eps = ctx.mpf(10) ** (-(prec + 5))
    for _ in range(6):
        ser = _cached_expansion(spec, A, trunc)
        total, tail = evaluate_series(ser, q, prec, N)
        if tail < eps:
            return total
        trunc = int(trunc * 1.3) + N
    raise PrecisionError(f"q-series did not converge at Im(tau)={mpmath.nstr(tau.imag, 5)}")


def _lambda_direct(spec: LambdaSpec, tau, prec: int):
    N = spec.level
    wk = wp_value(Fraction(spec.k, N), tau, prec).value
    w2 = wp_value(Fraction(2, N), tau, prec).value
    w1 = wp_value(Fraction(1, N), tau, prec).value
    den = w2 - w1
    if abs(den) < mpmath.mpf(10) ** (-(prec // 2)):
        raise PrecisionError("denominator wp(2/N) - wp(1/N) below precision floor")
    return (wk - w1) / den


@dataclass
class LambdaPaths:
    direct: APComplex
    series: APComplex
    difference: object


def lambda_paths(spec: LambdaSpec, alpha, prec: int, A: UniMat = E2) -> LambdaPaths:
    """(Lambda_k o A)(alpha) two ways: wp at A(alpha), and the q-expansion of
    Lambda_k o A at q(alpha)."""
    ctx = _ctx(prec)
    alpha = ctx.mpc(alpha)
    direct = _lambda_direct(spec, A.act(alpha), prec)
    series = _lambda_series_value(spec, A, alpha, prec)
    return LambdaPaths(APComplex(direct, prec), APComplex(series, prec), abs(direct - series))


def lambda_value(spec: LambdaSpec, point, prec: int, A: UniMat = E2) -> APComplex:
    """(Lambda_k o A)(alpha); the wp and q-series paths must agree to prec - 50 digits."""
    alpha = point.alpha(prec).value if isinstance(point, QuadPoint) else point
    paths = lambda_paths(spec, alpha, prec, A)
    if paths.difference > mpmath.mpf(10) ** (-(prec - CROSS_MARGIN)):
        raise PrecisionError(
            f"wp and series paths disagree by {mpmath.nstr(paths.difference, 5)}")
    return paths.direct


def division_ratio_value(spec: LambdaSpec, alpha, prec: int) -> APComplex:
    """(wp(k tau/N) - wp(tau/N)) / (wp(2 tau/N) - wp(tau/N)) on Z + Z tau at tau = alpha."""
    ctx = _ctx(prec)
    alpha = ctx.mpc(alpha)
    N = spec.level
    wk = wp_value(spec.k * alpha / N, alpha, prec).value
    w2 = wp_value(2 * alpha / N, alpha, prec).value
    w1 = wp_value(alpha / N, alpha, prec).value
    return APComplex((wk - w1) / (w2 - w1), prec)


def _j_terms_needed(im_tau: float, prec: int) -> int:
    # c(n) <= exp(4 pi sqrt n); stop when c(n)|q|^n < 10^-(prec+guard)
    target = (prec + GUARD) * math.log(10)
    n = 2
    while 4 * math.pi * math.sqrt(n) - 2 * math.pi * im_tau * n > -target:
        n += 1
    return n + 2


def j_value(point, prec: int) -> APComplex:
    """j(alpha) from its exact q-expansion at the SL2(Z)-reduced point."""
    ctx = _ctx(prec)
    alpha = point.alpha(prec).value if isinstance(point, QuadPoint) else ctx.mpc(point)
    tau, _ = reduce_point(alpha, prec)
    q = ctx.exp(2j * ctx.pi * tau)
    ser = _j_series(_j_terms_needed(float(tau.imag), prec))
    total = ctx.mpc(0)
    for e in sorted(ser.terms, reverse=True):
        total += ser.terms[e] * q ** e
    return APComplex(total, prec)


@lru_cache(maxsize=8)
def _j_series(trunc: int) -> QSeries:
    return j_expansion(trunc)


# ---------------------------------------------------------------------------
# certificate


@dataclass
class CertReport:
    level: int
    k: int
    point: str
    prec: int
    value: APComplex | None = None
    j_numeric: APComplex | None = None
    j: int | None = None
    residual: object = None
    cross_path: object = None
    verdict: str = "INCONCLUSIVE"
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is None else mpmath.nstr(x, 3, min_fixed=1, max_fixed=0)

        return {
            "level": self.level,
            "k": self.k,
            "point": self.point,
            "prec": self.prec,
            "value": self.value.to_json(min(self.prec, 60)) if self.value else None,
            "j": None if self.j is None else str(self.j),
            "residual": fmt(self.residual),
            "cross_path": fmt(self.cross_path),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


@lru_cache(maxsize=16)
def _cached_modpoly(spec: LambdaSpec) -> ModPoly:
    return modular_polynomial(spec)


def certify_algebraic_integer(spec: LambdaSpec, point: QuadPoint, prec: int = 150,
                              phi: ModPoly | None = None) -> CertReport:
    """Exhibit Lambda_k(alpha) as a root of the monic integer polynomial Phi(X, j(alpha)).

    PASS needs j(alpha) within 10^-(prec/2) of an integer J and
    |Phi(Lambda_k(alpha), J)| < 10^-(prec/3).  Points whose j-value is not a
    rational integer are INCONCLUSIVE.
    """
    report = CertReport(spec.level, spec.k, point.describe(), prec)
    ctx = _ctx(prec)
    alpha = point.alpha(prec).value
    paths = lambda_paths(spec, alpha, prec)
    report.cross_path = paths.difference
    report.value = paths.direct
    if paths.difference > ctx.mpf(10) ** (-(prec - CROSS_MARGIN)):
        report.verdict = "FAIL"
        report.notes.append("wp and q-series evaluations disagree")
        return report
    jv = j_value(alpha, prec)
    report.j_numeric = jv
    J = int(ctx.nint(jv.re))
    if abs(jv.value - J) >= ctx.mpf(10) ** (-(prec / 2)):
        report.notes.append("j(alpha) is not a rational integer at this precision")
        return report
    report.j = J
    phi = phi or _cached_modpoly(spec)
    coeffs = phi.at_j(J)
    x = paths.direct.value
    acc = ctx.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    report.residual = abs(acc)
    report.verdict = "PASS" if report.residual < ctx.mpf(10) ** (-(prec / 3)) else "FAIL"
    return report
