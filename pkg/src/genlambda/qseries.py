"""Truncated Laurent series in q with exact coefficients.

A :class:`QSeries` stores a sparse map ``exponent -> coefficient`` together
with a truncation ``trunc``: every coefficient with exponent below ``trunc`` is
known exactly, nothing at or above it is.  Exact polynomials use
``trunc = math.inf``.  Every operation computes the truncation its output
actually determines, so precision is never over-reported.

Multiplication packs both operands into single big integers (Kronecker
substitution in q and zeta), multiplies once and unpacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping

from .cyclotomic import CycNum, LevelMismatchError, _reduce, euler_phi

__all__ = [
    "CoeffRing",
    "QQ",
    "QSeries",
    "RingMismatchError",
    "TruncationError",
    "ZZ",
    "cyc",
]

INF = math.inf


class RingMismatchError(TypeError):
    pass


class TruncationError(ValueError):
    """Raised when a request needs coefficients beyond the known truncation."""


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring marker: ``ZZ``, ``QQ`` or ``cyc(N)``."""

    kind: str
    level: int = 1

    def __str__(self):
        return f"Q(zeta_{self.level})" if self.kind == "cyc" else self.kind

    @property
    def width(self) -> int:
        return euler_phi(self.level) if self.kind == "cyc" else 1

    def zero(self):
        if self.kind == "cyc":
            return CycNum.zero(self.level)
        return 0 if self.kind == "ZZ" else Fraction(0)

    def one(self):
        if self.kind == "cyc":
            return CycNum.one(self.level)
        return 1 if self.kind == "ZZ" else Fraction(1)

    def coerce(self, x):
        if self.kind == "cyc":
            if isinstance(x, CycNum):
                if x.level != self.level:
                    raise LevelMismatchError(f"level {x.level} coefficient in {self}")
                return x
            return CycNum.from_rational(self.level, x)
        if isinstance(x, CycNum):
            if not x.is_rational():
                raise RingMismatchError(f"irrational coefficient {x} in {self}")
            x = x.rational_part()
        if self.kind == "ZZ":
            x = Fraction(x)
            if x.denominator != 1:
                raise RingMismatchError(f"non-integer coefficient {x} in ZZ")
            return int(x)
        return Fraction(x)

    def is_zero(self, x) -> bool:
        return x.is_zero() if isinstance(x, CycNum) else x == 0

    # integer-vector views used by the packed multiplication kernel

    def to_vec(self, x) -> tuple[tuple[int, ...], int]:
        if self.kind == "cyc":
            return x.num, x.den
        if self.kind == "ZZ":
            return (x,), 1
        return (x.numerator,), x.denominator

    def from_vec(self, vec: list[int], den: int):
        if self.kind == "cyc":
            return CycNum(self.level, vec, den)
        if self.kind == "ZZ" and den == 1:
            return vec[0]
        return Fraction(vec[0], den)


ZZ = CoeffRing("ZZ")
QQ = CoeffRing("QQ")


def cyc(level: int) -> CoeffRing:
    return CoeffRing("cyc", level)


def _join(r1: CoeffRing, r2: CoeffRing) -> CoeffRing:
    if r1 == r2:
        return r1
    if r1.kind == "cyc" and r2.kind == "cyc":
        raise RingMismatchError(f"cannot combine {r1} and {r2}")
    if r1.kind == "cyc":
        return r1
    if r2.kind == "cyc":
        return r2
    return QQ


# ---------------------------------------------------------------------------
# packed multiplication kernel


def _rows(s: "QSeries", lo: int, hi: int):
    """Dense integer rows for exponents lo..hi-1 over a common denominator."""
    width = s.ring.width
    den = 1
    vecs = {}
    for e, c in s.terms.items():
        if lo <= e < hi:
            v, d = s.ring.to_vec(c)
            vecs[e] = (v, d)
            den = den * d // gcd(den, d)
    rows = []
    zero = (0,) * width
    for e in range(lo, hi):
        item = vecs.get(e)
        if item is None:
            rows.append(zero)
        else:
            v, d = item
            f = den // d
            rows.append(v if f == 1 else tuple(x * f for x in v))
    return rows, den


def _pack(rows, stride: int, nbytes: int) -> int:
    width = len(rows[0]) if rows else 0
    blank = b"\x00" * nbytes
    pos, neg = [], []
    pad = blank * (stride - width)
    for row in rows:
        for x in row:
            if x > 0:
                pos.append(x.to_bytes(nbytes, "little"))
                neg.append(blank)
            elif x < 0:
                pos.append(blank)
                neg.append((-x).to_bytes(nbytes, "little"))
            else:
                pos.append(blank)
                neg.append(blank)
        pos.append(pad)
        neg.append(pad)
    return int.from_bytes(b"".join(pos), "little") - int.from_bytes(b"".join(neg), "little")


def _unpack(value: int, nslots: int, nbytes: int) -> list[int]:
    total = nslots * nbytes
    raw = (value & ((1 << (8 * total)) - 1)).to_bytes(total, "little")
    full = 1 << (8 * nbytes)
    half = full >> 1
    out = []
    carry = 0
    frm = int.from_bytes
    for k in range(nslots):
        u = frm(raw[k * nbytes:(k + 1) * nbytes], "little") + carry
        if u >= half:
            u -= full
            carry = 1
        else:
            carry = 0
        out.append(u)
    return out


def _maxbits(rows) -> int:
    m = 0
    for row in rows:
        for x in row:
            b = x.bit_length()
            if b > m:
                m = b
    return m


def _kernel_mul(ring: CoeffRing, a: "QSeries", b: "QSeries", lo_a: int, lo_b: int, out_trunc):
    """Coefficients of a*b with exponents in [lo_a + lo_b, out_trunc)."""
    hi_a = out_trunc - lo_b
    hi_b = out_trunc - lo_a
    ra, da = _rows(a, lo_a, hi_a)
    rb, db = _rows(b, lo_b, hi_b)
    if not ra or not rb:
        return {}
    width = ring.width
    stride = 2 * width - 1
    bits = _maxbits(ra) + _maxbits(rb) + (min(len(ra), len(rb)) * width).bit_length() + 2
    nbytes = (bits + 7) // 8
    prod = _pack(ra, stride, nbytes) * _pack(rb, stride, nbytes)
    nrows = out_trunc - lo_a - lo_b
    flat = _unpack(prod, nrows * stride, nbytes)
    den = da * db
    terms = {}
    cyclo = ring.kind == "cyc"
    for i in range(nrows):
        chunk = flat[i * stride:(i + 1) * stride]
        if not any(chunk):
            continue
        if cyclo:
            chunk = _reduce(chunk, ring.level)
            if not any(chunk):
                continue
        terms[lo_a + lo_b + i] = ring.from_vec(chunk, den)
    return terms


# ---------------------------------------------------------------------------


class QSeries:
    """Truncated Laurent series over ZZ, QQ or Q(zeta_N)."""

    __slots__ = ("ring", "terms", "trunc")

    def __init__(self, ring: CoeffRing, terms: Mapping[int, object] | Iterable = (), trunc=INF):
        self.ring = ring
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for e, c in items:
            if e >= trunc:
                continue
            c = ring.coerce(c)
            if ring.is_zero(c):
                continue
            if e in clean:
                c = clean[e] + c
                if ring.is_zero(c):
                    del clean[e]
                    continue
            clean[int(e)] = c
        self.terms = clean
        self.trunc = trunc

    @classmethod
    def _raw(cls, ring, terms, trunc):
        obj = object.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj.trunc = trunc
        return obj

    @classmethod
    def constant(cls, ring: CoeffRing, value, trunc=INF) -> "QSeries":
        return cls(ring, {0: value}, trunc)

    @classmethod
    def monomial(cls, ring: CoeffRing, exponent: int, value=1, trunc=INF) -> "QSeries":
        return cls(ring, {exponent: value}, trunc)

    @classmethod
    def zero(cls, ring: CoeffRing, trunc=INF) -> "QSeries":
        return cls._raw(ring, {}, trunc)

    # basic queries

    def order(self):
        """Smallest exponent with nonzero coefficient; ``trunc`` if none is known."""
        return min(self.terms) if self.terms else self.trunc

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, e: int):
        if e >= self.trunc:
            raise TruncationError(f"coefficient of q^{e} unknown (truncation {self.trunc})")
        return self.terms.get(e, self.ring.zero())

    def leading_coefficient(self):
        if not self.terms:
            raise TruncationError("series is zero up to its truncation")
        return self.terms[self.order()]

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def truncate(self, t) -> "QSeries":
        if t >= self.trunc:
            return self
        return QSeries._raw(self.ring, {e: c for e, c in self.terms.items() if e < t}, t)

    def change_ring(self, ring: CoeffRing) -> "QSeries":
        return QSeries(ring, self.terms, self.trunc)

    def map_coefficients(self, fn: Callable, ring: CoeffRing | None = None) -> "QSeries":
        ring = ring or self.ring
        return QSeries(ring, {e: fn(c) for e, c in self.terms.items()}, self.trunc)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries._raw(self.ring, {e + k: c for e, c in self.terms.items()}, self.trunc + k)

    # ring operations

    def _lift(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            ring = self.ring if not isinstance(other, CycNum) else cyc(other.level)
            return QSeries.constant(ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ring = _join(self.ring, other.ring)
        trunc = min(self.trunc, other.trunc)
        terms = {}
        for src in (self, other):
            same = src.ring == ring
            for e, c in src.terms.items():
                if e >= trunc:
                    continue
                if not same:
                    c = ring.coerce(c)
                if e in terms:
                    c = terms[e] + c
                    if ring.is_zero(c):
                        del terms[e]
                        continue
                terms[e] = c
        return QSeries._raw(ring, terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(self.ring, {e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, c) -> "QSeries":
        if isinstance(c, CycNum):
            ring = _join(self.ring, cyc(c.level))
        else:
            ring = self.ring if self.ring != ZZ or isinstance(c, int) else QQ
        c = ring.coerce(c)
        if ring.is_zero(c):
            return QSeries.zero(ring, self.trunc)
        terms = {}
        for e, x in self.terms.items():
            y = ring.coerce(x) * c if self.ring != ring else x * c
            if not ring.is_zero(y):
                terms[e] = y
        return QSeries._raw(ring, terms, self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scalar_mul(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        ring = _join(self.ring, other.ring)
        a = self if self.ring == ring else self.change_ring(ring)
        b = other if other.ring == ring else other.change_ring(ring)
        oa, ob = a.order(), b.order()
        trunc = min(a.trunc + ob, b.trunc + oa)
        if not a.terms or not b.terms:
            return QSeries.zero(ring, trunc)
        if trunc == INF:
            # exact polynomials: product is exact up to the top degree
            hi = max(a.terms) + max(b.terms) + 1
            terms = _kernel_mul(ring, a, b, oa, ob, hi)
        else:
            terms = _kernel_mul(ring, a, b, oa, ob, trunc)
        return QSeries._raw(ring, terms, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.invert() ** (-n)
        result = QSeries.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse by Newton iteration.

        For order v and truncation T the result has order -v and truncation T - 2v.
        """
        if not self.terms:
            raise ZeroDivisionError("series is zero up to its truncation")
        v = self.order()
        lead = self.terms[v]
        ring = self.ring
        if ring.kind == "cyc":
            inv_lead = lead.inverse()
        elif ring.kind == "ZZ" and lead in (1, -1):
            inv_lead = lead
        else:
            ring = QQ if ring.kind == "ZZ" else ring
            inv_lead = 1 / Fraction(lead)
        if self.trunc == INF and len(self.terms) == 1:
            return QSeries._raw(ring, {-v: inv_lead}, INF)
        if self.trunc == INF:
            raise TruncationError("inverse of a non-monomial exact polynomial needs a truncation")
        prec = self.trunc - v
        # unit part u = self / (lead q^v), constant term 1
        u = self.shift(-v).scalar_mul(inv_lead)
        g = QSeries.constant(ring, 1, trunc=1)
        cur = 1
        while cur < prec:
            cur = min(2 * cur, prec)
            ut = u.truncate(cur)
            err = (QSeries.constant(ring, 1) - ut * g.extend(cur)).truncate(cur)
            g = (g.extend(cur) + g.extend(cur) * err).truncate(cur)
        return g.scalar_mul(inv_lead).shift(-v)

    def extend(self, t) -> "QSeries":
        """Reinterpret the known terms as exact up to ``t`` (used in Newton steps)."""
        return QSeries._raw(self.ring, self.terms, t)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        if isinstance(other, CycNum):
            return self.scalar_mul(other.inverse())
        return self.scalar_mul(1 / Fraction(other))

    # predicates

    def coefficients_integral(self) -> bool:
        if self.ring.kind == "cyc":
            return all(c.is_integral() for c in self.terms.values())
        if self.ring.kind == "ZZ":
            return True
        return all(c.denominator == 1 for c in self.terms.values())

    def congruent_mod(self, other: "QSeries", m: int) -> bool:
        """True iff both series agree on every exponent below ``m``."""
        if self.trunc < m or other.trunc < m:
            raise TruncationError(
                f"congruence mod q^{m} needs truncations >= {m}, have {self.trunc}, {other.trunc}")
        diff = self.truncate(m) - other.truncate(m)
        return diff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and (self - other).is_zero()

    __hash__ = None

    # evaluation

    def evaluate(self, q, coeff_value: Callable | None = None):
        """Sum of the known terms at a numeric q (e.g. an mpmath mpc)."""
        if coeff_value is None:
            coeff_value = _default_value
        total = 0
        for e in sorted(self.terms, reverse=True):
            total += coeff_value(self.terms[e]) * q ** e
        return total

    # formatting / serialization

    def __repr__(self):
        return f"QSeries({self.ring}, {self})"

    def __str__(self):
        parts = []
        for e in self.exponents():
            c = self.terms[e]
            cs = str(c)
            if " " in cs or cs.startswith("-") and e:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            elif cs == "1":
                parts.append(f"q^{e}")
            else:
                parts.append(f"{cs} q^{e}")
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.trunc == INF else f" + O(q^{self.trunc})"
        return body + tail

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, CycNum):
                return c.to_json()
            if isinstance(c, Fraction):
                return f"{c.numerator}/{c.denominator}"
            return str(c)

        return {
            "ring": str(self.ring),
            "trunc": None if self.trunc == INF else self.trunc,
            "terms": [[e, enc(self.terms[e])] for e in self.exponents()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        ring_name = data["ring"]
        if ring_name in ("ZZ", "QQ"):
            ring = ZZ if ring_name == "ZZ" else QQ
            terms = {int(e): Fraction(c) for e, c in data["terms"]}
        else:
            level = int(ring_name.split("_")[1].rstrip(")"))
            ring = cyc(level)
            terms = {int(e): CycNum.from_json(c) for e, c in data["terms"]}
        trunc = INF if data["trunc"] is None else int(data["trunc"])
        return cls(ring, terms, trunc)


def _default_value(c):
    if isinstance(c, CycNum):
        return c.to_complex()
    return complex(c)
