"""The modular equation Phi(X, j) = prod_A (X - Lambda_k o A) over a transversal.

Coefficients of Phi are recovered from q-expansions: the elementary symmetric
functions of the conjugates are SL2(Z)-invariant, so each one is a polynomial
in j and is found by cancelling its pole against powers of j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lambda_fn import LambdaSpec, lambda_conjugates, lambda_expansion
from .modgroup import E2, transversal
from .qseries import QQ, ZZ, QSeries

__all__ = [
    "JPoly",
    "ModPoly",
    "ModPolyError",
    "default_truncation",
    "delta_expansion",
    "eisenstein_e4",
    "eisenstein_e6",
    "express_in_j",
    "j_expansion",
    "modular_polynomial",
    "symmetric_functions",
]

log = logging.getLogger(__name__)


class ModPolyError(ArithmeticError):
    """Elimination failed: irrational symmetric function, nonzero residual, or
    non-integral coefficient."""


# ---------------------------------------------------------------------------
# Eisenstein series, Delta and j in q_full = exp(2 pi i tau)


def _sigma_table(k: int, n: int) -> list[int]:
    sig = [0] * n
    for d in range(1, n):
        p = d ** k
        for m in range(d, n, d):
            sig[m] += p
    return sig


def eisenstein_e4(trunc: int) -> QSeries:
    sig = _sigma_table(3, trunc)
    return QSeries(ZZ, {0: 1, **{n: 240 * sig[n] for n in range(1, trunc)}}, trunc)


def eisenstein_e6(trunc: int) -> QSeries:
    sig = _sigma_table(5, trunc)
    return QSeries(ZZ, {0: 1, **{n: -504 * sig[n] for n in range(1, trunc)}}, trunc)


def _euler_product(trunc: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) from the pentagonal number theorem."""
    terms = {0: 1}
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 >= trunc:
            break
        terms[p1] = sign
        if p2 < trunc:
            terms[p2] = sign
        k += 1
    return QSeries(ZZ, terms, trunc)


def delta_expansion(trunc: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24, known below q^trunc."""
    return (_euler_product(max(trunc - 1, 1)) ** 24).shift(1).truncate(trunc)


def j_expansion(trunc: int, level: int = 1) -> QSeries:
    """j = E4^3 / Delta below q^trunc, in the variable q = q_full^(1/level).

    Only exponents divisible by ``level`` occur.
    """
    if trunc < 1:
        raise ValueError("truncation must be positive")
    full = -(-trunc // level) + 1
    e4 = eisenstein_e4(full + 1)
    j = (e4 ** 3 * delta_expansion(full + 2).invert()).truncate(full)
    if level == 1:
        return j.truncate(trunc)
    return QSeries._raw(ZZ, {e * level: c for e, c in j.terms.items()}, j.trunc * level).truncate(trunc)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JPoly:
    """Polynomial in j with rational coefficients, constant term first."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (int(c) if c.denominator == 1 else c)
        return acc

    def to_series(self, j_series: QSeries) -> QSeries:
        """Substitute a j-expansion."""
        out = QSeries.zero(QQ)
        for c in reversed(self.coeffs):
            out = out * j_series + QSeries.constant(QQ, c)
        return out if self.coeffs else QSeries.zero(QQ)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(str(c) if i == 0 else f"{c}*j" if i == 1 else f"{c}*j^{i}")
        return " + ".join(parts)


def express_in_j(s: QSeries, level: int = 1, j_series: QSeries | None = None) -> JPoly:
    """The polynomial P with P(j) = s through the available truncation.

    Repeatedly cancels the most negative term with a multiple of a power of j,
    then requires the remainder to vanish below the truncation.
    """
    for e, c in s.terms.items():
        if e % level:
            raise ModPolyError(f"exponent {e} is not a multiple of {level}")
        if s.ring.kind == "cyc" and not c.is_rational():
            raise ModPolyError(f"irrational coefficient {c} at q^{e}")
    rem = s.change_ring(QQ)
    if rem.trunc <= 0:
        raise ModPolyError(f"truncation {rem.trunc} does not reach the constant term")
    top = max(0, -rem.order() // level) if rem.terms else 0
    if j_series is None:
        span = rem.trunc + top * level if rem.trunc != float("inf") else (top + 1) * level
        j_series = j_expansion(span + level, level)
    powers = [QSeries.constant(QQ, 1)]
    for _ in range(top):
        powers.append(powers[-1] * j_series)
    coeffs = [Fraction(0)] * (top + 1)
    while rem.terms and rem.order() <= 0:
        e = rem.order()
        m = -e // level
        c = rem.terms[e]
        coeffs[m] += c
        rem = rem - powers[m].scalar_mul(c)
    if rem.terms:
        e = rem.order()
        raise ModPolyError(f"nonzero residual at q^{e} (coefficient {rem.terms[e]}) "
                           f"below truncation {rem.trunc}")
    return JPoly(tuple(coeffs))


def symmetric_functions(spec: LambdaSpec, trunc: int, conjugates=None) -> list[QSeries]:
    """e_1, ..., e_m of the conjugates Lambda_k o A, as series over QQ.

    Raises ModPolyError if any coefficient is irrational or any exponent is
    not a multiple of N: both certify invariance under SL2(Z).
    """
    if conjugates is None:
        conjugates = [f for _, f in lambda_conjugates(spec, trunc)]
    N = spec.level
    one = QSeries.constant(conjugates[0].ring, 1)
    e = [one]
    for idx, f in enumerate(conjugates, 1):
        nxt = [one]
        for i in range(1, idx):
            nxt.append(e[i] + f * e[i - 1])
        nxt.append(f * e[idx - 1])
        e = nxt
        log.debug("symmetric functions: folded %d/%d", idx, len(conjugates))
    out = []
    for i, s in enumerate(e[1:], 1):
        for ex, c in s.terms.items():
            if not c.is_rational():
                raise ModPolyError(f"e_{i} has irrational coefficient {c} at q^{ex}")
            if ex % N:
                raise ModPolyError(f"e_{i} has exponent {ex} not divisible by {N}")
        out.append(s.change_ring(QQ))
    return out


@dataclass
class ModPoly:
    """Phi(X, j) = sum_i coeffs[i](j) X^i, monic in X."""

    level: int
    k: int
    coeffs: list[JPoly]
    trunc: int = 0
    residual_trunc: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return self.coeffs[-1] == JPoly((1,))

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs)

    def j_degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    def at_j(self, J) -> list:
        """Coefficients in X after substituting j = J (exact for integer J)."""
        return [c(J) for c in self.coeffs]

    def evaluate(self, x, J):
        acc = 0
        for c in reversed(self.at_j(J)):
            acc = acc * x + c
        return acc

    def residual_series(self, f: QSeries, j_series: QSeries) -> QSeries:
        """Phi(f, j) as a series; should vanish through its truncation."""
        acc = QSeries.zero(f.ring)
        for c in reversed(self.coeffs):
            acc = acc * f + c.to_series(j_series)
        return acc

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "k": self.k,
            "degree": self.degree,
            "coeffs": [[i, [[d, str(int(v))] for d, v in enumerate(c.coeffs) if v]]
                       for i, c in enumerate(self.coeffs)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModPoly":
        deg = int(data["degree"])
        coeffs = [JPoly()] * (deg + 1)
        for i, terms in data["coeffs"]:
            top = max((int(d) for d, _ in terms), default=-1)
            vals = [0] * (top + 1)
            for d, v in terms:
                vals[int(d)] = int(v)
            coeffs[int(i)] = JPoly(tuple(vals))
        return cls(int(data["level"]), int(data["k"]), coeffs)


def default_truncation(spec: LambdaSpec) -> int:
    return spec.level * (len(transversal(spec.level)) + 4)


def modular_polynomial(spec: LambdaSpec, trunc: int | None = None) -> ModPoly:
    """Build Phi(X, j) exactly and check it.

    Checks: rational invariant symmetric functions, zero elimination
    residual, integer coefficients, and Phi(Lambda_k, j) = 0 as series.
    """
    N = spec.level
    if trunc is None:
        trunc = default_truncation(spec)
    conj = [f for _, f in lambda_conjugates(spec, trunc)]
    sym = symmetric_functions(spec, trunc, conj)
    m = len(sym)
    pole = max((max(0, -s.order()) for s in sym), default=0)
    j_ser = j_expansion(trunc + pole + 2 * N, N)
    coeffs = [JPoly()] * (m + 1)
    coeffs[m] = JPoly((1,))
    for i, s in enumerate(sym, 1):
        p = express_in_j(s, N, j_ser)
        if i % 2:
            p = JPoly(tuple(-c for c in p.coeffs))
        if not p.is_integral():
            bad = next(c for c in p.coeffs if c.denominator != 1)
            raise ModPolyError(f"coefficient of X^{m - i} has non-integer entry {bad}")
        coeffs[m - i] = p
    phi = ModPoly(N, spec.k, coeffs, trunc=trunc,
                  meta={"min_sym_trunc": min(s.trunc for s in sym)})
    lam = lambda_expansion(spec, E2, trunc)
    res = phi.residual_series(lam, j_ser)
    if not res.is_zero():
        e = res.order()
        raise ModPolyError(f"Phi(Lambda_k, j) nonzero at q^{e}: {res.terms[e]}")
    phi.residual_trunc = res.trunc
    return phi


def coefficient_table(phi: ModPoly) -> Sequence[tuple[int, int, int]]:
    """(X-degree, j-degree, integer) triples, for display."""
    return [(i, d, int(v)) for i, c in enumerate(phi.coeffs) for d, v in enumerate(c.coeffs) if v]
