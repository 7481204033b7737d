"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) modulo
the N-th cyclotomic polynomial, as an integer numerator vector over a positive
common denominator.  The power basis is an integral basis of Z[zeta_N], so an
element is a cyclotomic integer exactly when its denominator is 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "CycNum",
    "LevelMismatchError",
    "NotDivisibleError",
    "cyclotomic_polynomial",
    "euler_phi",
    "poly_resultant",
    "zeta_pow",
]


class LevelMismatchError(ValueError):
    """Raised when elements of different cyclotomic fields are combined."""


class NotDivisibleError(ArithmeticError):
    """Raised by :meth:`CycNum.divide_exact` when the quotient is not in Z[zeta]."""


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    # den monic (leading coefficient +-1); integer coefficients, low degree first
    num = list(num)
    dl = len(den) - 1
    lead = den[-1]
    quot = [0] * max(len(num) - dl, 1)
    for i in range(len(num) - 1, dl - 1, -1):
        c = num[i] * lead  # lead is a unit
        if c:
            quot[i - dl] = c
            for j in range(dl + 1):
                num[i - dl + j] -= c * den[j]
    return quot, num[:dl]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial.

    Computed by exact division of X^n - 1 by the cyclotomic polynomials of the
    proper divisors of n.
    """
    if n < 1:
        raise ValueError(f"cyclotomic_polynomial needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise AssertionError("cyclotomic division left a remainder")
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


@lru_cache(maxsize=None)
def _zeta_table(n: int) -> tuple[tuple[int, ...], ...]:
    # power-basis vectors of zeta^0 .. zeta^(n-1)
    cp = cyclotomic_polynomial(n)
    deg = len(cp) - 1
    rows = []
    vec = [1] + [0] * (deg - 1) if deg > 0 else []
    for _ in range(n):
        rows.append(tuple(vec))
        # multiply by X and reduce by the monic cp
        top = vec[-1] if deg else 0
        vec = [0] + vec[:-1]
        if top:
            for j in range(deg):
                vec[j] -= top * cp[j]
    return tuple(rows)


def _reduce(prod: list[int], n: int) -> list[int]:
    """Reduce an integer polynomial modulo the (monic) n-th cyclotomic polynomial."""
    cp = cyclotomic_polynomial(n)
    deg = len(cp) - 1
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            base = i - deg
            for j in range(deg):
                if cp[j]:
                    prod[base + j] -= c * cp[j]
    if len(prod) < deg:
        prod = prod + [0] * (deg - len(prod))
    return prod[:deg]


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def poly_resultant(f: Sequence, g: Sequence) -> Fraction:
    """Resultant of two polynomials given by coefficient lists (constant first)."""
    f = _trim([_fr(c) for c in f])
    g = _trim([_fr(c) for c in g])
    if not f or not g:
        return Fraction(0)
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    _, r = _qpoly_divmod(f, g)
    if not r:
        return Fraction(0)
    k = len(r) - 1
    sign = -1 if (m * n) % 2 else 1
    return sign * g[-1] ** (m - k) * poly_resultant(g, r)


def _qpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


@lru_cache(maxsize=4096)
def _inverse_vec(level: int, num: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    f = [Fraction(c) for c in cyclotomic_polynomial(level)]
    g = _trim([Fraction(c) for c in num])
    # invariant: r1 = s1 * g (mod f)
    r0, s0 = f, []
    r1, s1 = g, [Fraction(1)]
    while len(r1) > 1:
        q, r = _qpoly_divmod(r0, r1)
        r0, s0, r1, s1 = r1, s1, r, _qpoly_sub(s0, _qpoly_mul(q, s1))
    c = r1[0]
    inv = CycNum(level, [x / c for x in s1])
    return inv.num, inv.den


class CycNum:
    """An element of Q(zeta_N), immutable.

    ``CycNum(N, coeffs)`` accepts any iterable of rationals (ints, Fractions or
    "p/q" strings) of length at most phi(N); longer vectors are reduced modulo
    the cyclotomic polynomial.
    """

    __slots__ = ("level", "num", "den", "_hash")

    def __init__(self, level: int, coeffs: Iterable = (), den: int | None = None):
        if level < 1:
            raise ValueError(f"level must be positive, got {level}")
        deg = euler_phi(level)
        if den is not None:
            # fast path: integer numerator vector already in the basis
            num = list(coeffs)
        else:
            fr = [_fr(c) for c in coeffs]
            den = 1
            for c in fr:
                den = den * c.denominator // gcd(den, c.denominator)
            num = [int(c * den) for c in fr]
        if len(num) > deg:
            num = _reduce(num, level)
        elif len(num) < deg:
            num = num + [0] * (deg - len(num))
        if den < 0:
            num = [-x for x in num]
            den = -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den != 1:
            g = den
            for x in num:
                if g == 1:
                    break
                g = gcd(g, x)
            if g > 1:
                num = [x // g for x in num]
                den //= g
        self.level = level
        self.num = tuple(num)
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, level: int, num: tuple, den: int) -> "CycNum":
        obj = object.__new__(cls)
        obj.level = level
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, level: int) -> "CycNum":
        return cls._raw(level, (0,) * euler_phi(level), 1)

    @classmethod
    def one(cls, level: int) -> "CycNum":
        return cls.from_rational(level, 1)

    @classmethod
    def from_rational(cls, level: int, x) -> "CycNum":
        x = _fr(x)
        deg = euler_phi(level)
        return cls._raw(level, (x.numerator,) + (0,) * (deg - 1), x.denominator)

    @classmethod
    def zeta(cls, level: int, e: int = 1) -> "CycNum":
        return zeta_pow(level, e)

    # views

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_part(self) -> Fraction:
        """The coordinate on 1; meaningful as a value only when ``is_rational``."""
        return Fraction(self.num[0], self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    # arithmetic

    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.level != self.level:
                raise LevelMismatchError(
                    f"cannot combine elements of levels {self.level} and {other.level}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(self.level, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycNum(self.level, [a + b for a, b in zip(self.num, other.num)], self.den)
        return CycNum(self.level,
                      [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.level, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _fr(other)
            return CycNum(self.level, [a * other.numerator for a in self.num],
                          self.den * other.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, other.num
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum(self.level, _reduce(prod, self.level), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Multiplicative inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        num, den = _inverse_vec(self.level, self.num)
        return CycNum(self.level, [x * self.den for x in num], den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNum.one(self.level)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def norm(self) -> Fraction:
        """Field norm to Q, computed as resultant(Phi_N, representative)."""
        deg = len(self.num)
        res = poly_resultant(cyclotomic_polynomial(self.level), self.num)
        return res / Fraction(self.den) ** deg

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def divide_exact(self, other: "CycNum") -> "CycNum":
        """Quotient in Z[zeta]; raises NotDivisibleError when it leaves the ring."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Z[zeta]")
        q = self / other
        if not q.is_integral():
            raise NotDivisibleError(f"{self} is not divisible by {other} in Z[zeta_{self.level}]")
        return q

    def conjugate(self, t: int) -> "CycNum":
        """Image under the automorphism zeta -> zeta^t, with t a unit mod N."""
        if gcd(t, self.level) != 1:
            raise ValueError(f"{t} is not a unit modulo {self.level}")
        table = _zeta_table(self.level)
        acc = [0] * len(self.num)
        for i, x in enumerate(self.num):
            if x:
                row = table[(i * t) % self.level]
                for j, y in enumerate(row):
                    if y:
                        acc[j] += x * y
        return CycNum(self.level, acc, self.den)

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.level)
        return sum(x * z ** i for i, x in enumerate(self.num)) / self.den

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.level == other.level and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_part() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # formatting

    def __repr__(self):
        return f"CycNum({self.level}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNum":
        return cls(int(data["level"]), [Fraction(c) for c in data["coeffs"]])


def zeta_pow(level: int, e: int) -> CycNum:
    """zeta_N^e in the power basis; e is taken modulo N."""
    return CycNum._raw(level, _zeta_table(level)[e % level], 1)
