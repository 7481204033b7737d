"""SL2(Z) matrices, the {x}/mu(x) reduction data, and coset transversals
of Gamma_1(N){+-1} in SL2(Z)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

__all__ = [
    "BraceData",
    "SlashData",
    "UniMat",
    "brace",
    "coset_count",
    "coset_key",
    "same_coset",
    "slash_data",
    "transversal",
]


@dataclass(frozen=True)
class UniMat:
    """Integer matrix (a b; c d) with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def identity(cls) -> "UniMat":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "UniMat":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def parse(cls, text: str) -> "UniMat":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ValueError(f"matrix must be a,b,c,d; got {text!r}")
        return cls(*(int(p) for p in parts))

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "UniMat") -> "UniMat":
        return UniMat(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> "UniMat":
        return UniMat(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "UniMat":
        return UniMat(-self.a, -self.b, -self.c, -self.d)

    def act(self, tau):
        """Moebius action on a point of the upper half plane."""
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def __str__(self):
        return f"({self.a} {self.b}; {self.c} {self.d})"


E2 = UniMat(1, 0, 0, 1)
S = UniMat(0, -1, 1, 0)
T_LOWER = UniMat(1, 0, 1, 1)


class BraceData(NamedTuple):
    brace: int
    mu: int


def brace(x: int, level: int) -> BraceData:
    """The pair ({x}, mu(x)): 0 <= {x} <= N/2 and x = mu(x){x} mod N.

    At x = 0 and x = N/2 mod N the sign is fixed to +1.
    """
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    r = x % level
    if r == 0 or 2 * r == level:
        return BraceData(r, 1)
    if 2 * r < level:
        return BraceData(r, 1)
    return BraceData(level - r, -1)


class SlashData(NamedTuple):
    s_star: int
    brace_sc: int

    def u_s(self) -> tuple[int, int]:
        """u_s = zeta^{s*} q^{{sc}} as (zeta exponent, q exponent)."""
        return self.s_star, self.brace_sc


def slash_data(s: int, A: UniMat, level: int) -> SlashData:
    if s % level == 0:
        raise ValueError(f"s = {s} is divisible by the level {level}")
    bd = brace(s * A.c, level)
    return SlashData((bd.mu * s * A.d) % level, bd.brace)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def coset_key(A: UniMat, level: int) -> tuple[int, int]:
    """Canonical label of the coset Gamma_1(N){+-1} A: the bottom row mod N up to sign."""
    c, d = A.c % level, A.d % level
    nc, nd = (-c) % level, (-d) % level
    return min((c, d), (nc, nd))


def same_coset(A: UniMat, B: UniMat, level: int) -> bool:
    """True iff A B^-1 lies in Gamma_1(N){+-1}."""
    M = A @ B.inverse()
    if M.c % level:
        return False
    return (M.a - 1) % level == 0 or (M.a + 1) % level == 0


def _lift(c: int, d: int, level: int) -> UniMat:
    # c in [0, N), d minimal non-negative with gcd(c, d) = 1
    if c == 0:
        if d % level in (1, level - 1) or level <= 2:
            return E2
        c = level
    while gcd(c, d) != 1:
        d += level
    g, x, y = _egcd(d, c)
    # x d + y c = 1  ->  a = x, b = -y
    return UniMat(x, -y, c, d)


def transversal(level: int) -> list[UniMat]:
    """Representatives of Gamma_1(N){+-1} backslash SL2(Z), one per bottom-row class.

    Classes are ordered by their canonical key; the identity represents (0, 1).
    """
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    keys = set()
    for c in range(level):
        for d in range(level):
            if gcd(gcd(c, d), level) == 1:
                keys.add(min((c, d), ((-c) % level, (-d) % level)))
    return [_lift(c, d, level) for c, d in sorted(keys)]


def coset_count(level: int) -> int:
    """(N^2 / 2) prod_{p | N} (1 - p^-2) for N >= 3."""
    num, den = level * level, 2
    m, p = level, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            num *= p * p - 1
            den *= p * p
        p += 1
    if m > 1:
        num *= m * m - 1
        den *= m * m
    return num // den
