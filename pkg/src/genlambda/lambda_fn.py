"""q-expansions of phi_s[A]_2, their differences, leading coefficients, and
Lambda_k o A = (phi_k - phi_1)[A]_2 / (phi_2 - phi_1)[A]_2.

Here phi_s(tau) = (2 pi i)^-2 wp(s/N; Z + Z tau) - 1/12 and the series
variable is q = exp(2 pi i tau / N).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .cyclotomic import CycNum, _zeta_table, euler_phi, zeta_pow
from .modgroup import E2, UniMat, brace, slash_data, transversal
from .qseries import QSeries, cyc

__all__ = [
    "LambdaSpec",
    "is_prime_power",
    "lambda_conjugates",
    "lambda_expansion",
    "lambda_order",
    "omega_ratio",
    "phi_cofactor",
    "phi_diff_slash",
    "phi_slash",
    "difference_closed_form",
    "theta",
]


def is_prime_power(n: int) -> bool:
    """True for p^e with e >= 1."""
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


@dataclass(frozen=True)
class LambdaSpec:
    """The function Lambda_k = W_[k,2,1] at level N."""

    k: int
    level: int

    @property
    def delta(self) -> int:
        return gcd(self.k, self.level)

    @property
    def in_generator_range(self) -> bool:
        return 2 < self.k and 2 * self.k < self.level

    @property
    def integrality_case(self) -> str | None:
        """'i' or 'ii' when the integrality hypotheses hold, else None."""
        if not (3 <= self.k and 2 * self.k < self.level):
            return None
        d = self.delta
        if d == 1:
            return "i"
        if d % 3 and not is_prime_power(self.level // d):
            return "ii"
        return None

    @property
    def qualifies(self) -> bool:
        return self.integrality_case is not None

    def validate(self) -> None:
        if self.level < 7:
            raise ValueError(f"level must be at least 7, got {self.level}")
        if not self.in_generator_range:
            raise ValueError(f"need 2 < k < N/2, got k={self.k}, N={self.level}")


def _check_index(s: int, level: int) -> None:
    if s % level == 0:
        raise ValueError(f"phi index {s} is divisible by the level {level}")


class _Acc:
    """Accumulates integer multiples of powers of zeta per q-exponent."""

    def __init__(self, level: int):
        self.level = level
        self.table = _zeta_table(level)
        self.width = euler_phi(level)
        self.rows: dict[int, list[int]] = {}

    def add(self, q_exp: int, coef: int, zeta_exp: int) -> None:
        row = self.rows.get(q_exp)
        if row is None:
            row = self.rows[q_exp] = [0] * self.width
        for j, v in enumerate(self.table[zeta_exp % self.level]):
            if v:
                row[j] += coef * v

    def series(self, trunc) -> QSeries:
        ring = cyc(self.level)
        terms = {}
        for e, row in self.rows.items():
            if any(row):
                terms[e] = CycNum(self.level, row, 1)
        return QSeries._raw(ring, terms, trunc)


def phi_slash(s: int, A: UniMat, level: int, trunc: int) -> QSeries:
    """Expansion of phi_s[A]_2 below q^trunc.

    With u = zeta^{s*} q^{{sc}}:
      {sc} = 0:  zeta^{s*}/(1-zeta^{s*})^2 - sum_{m,n} n (1-zeta^{s*n})(1-zeta^{-s*n}) q^{mnN}
      else:      sum_n n u^n - sum_{m,n} n (1-u^n)(1-u^{-n}) q^{mnN}
    The products (1-u^n)(1-u^{-n}) q^{mnN} are expanded into their three
    monomials before truncating, so the q^{mnN - n{sc}} terms are kept.
    """
    _check_index(s, level)
    if trunc < 1:
        raise ValueError("truncation must be positive")
    N = level
    sd = slash_data(s, A, N)
    t, b = sd.s_star, sd.brace_sc
    acc = _Acc(N)
    if b == 0:
        n = 1
        while n * N < trunc:
            m = 1
            while m * n * N < trunc:
                e = m * n * N
                # -n (2 - zeta^{tn} - zeta^{-tn})
                acc.add(e, -2 * n, 0)
                acc.add(e, n, t * n)
                acc.add(e, n, -t * n)
                m += 1
            n += 1
        series = acc.series(trunc)
        z = zeta_pow(N, t)
        const = z / (1 - z) ** 2
        return series + QSeries._raw(series.ring, {0: const}, trunc)
    n = 1
    while b * n < trunc:
        acc.add(b * n, n, t * n)
        n += 1
    n = 1
    while n * (N - b) < trunc:
        m = 1
        while m * n * N - b * n < trunc:
            base = m * n * N
            if base < trunc:
                acc.add(base, -2 * n, 0)
            if base + b * n < trunc:
                acc.add(base + b * n, n, t * n)
            acc.add(base - b * n, n, -t * n)
            m += 1
        n += 1
    return acc.series(trunc)


def phi_diff_slash(r: int, s: int, A: UniMat, level: int, trunc: int) -> QSeries:
    """(phi_r - phi_s)[A]_2 below q^trunc."""
    if (r - s) % level == 0:
        raise ValueError(f"r and s must differ modulo {level}, got r={r}, s={s}")
    return phi_slash(r, A, level, trunc) - phi_slash(s, A, level, trunc)


def difference_closed_form(r: int, s: int, A: UniMat, level: int) -> QSeries:
    """Closed form of (phi_r - phi_s)[A]_2 modulo q^N, by the three-case table.

    Built directly from the u_r, u_s monomials, independently of phi_slash.
    """
    if r == s:
        raise ValueError("r and s must differ")
    N = level
    sr, ss = slash_data(r, A, N), slash_data(s, A, N)
    br, bs = sr.brace_sc, ss.brace_sc
    if br != 0 and bs == 0:
        return -difference_closed_form(s, r, A, level)
    acc = _Acc(N)

    def u_terms(sign: int, data) -> None:
        t, b = data.s_star, data.brace_sc
        n = 1
        while b * n < N:
            acc.add(b * n, sign * n, t * n)
            n += 1
        # u^{-1} q^N
        acc.add(N - b, sign, -t)

    if br != 0 and bs != 0:
        u_terms(1, sr)
        u_terms(-1, ss)
        return acc.series(N)
    if br == 0 and bs != 0:
        u_terms(-1, ss)
        z = zeta_pow(N, r * A.d)
        out = acc.series(N)
        return out + QSeries._raw(out.ring, {0: z / (1 - z) ** 2}, N)
    d = A.d
    zs = zeta_pow(N, s * d)
    val = -zs * (1 - zeta_pow(N, (r - s) * d)) * (1 - zeta_pow(N, (r + s) * d))
    val = val / ((1 - zeta_pow(N, r * d)) ** 2 * (1 - zs) ** 2)
    return QSeries._raw(cyc(N), {0: val}, N)


def theta(r: int, s: int, A: UniMat, level: int) -> CycNum:
    """Leading coefficient of (phi_r - phi_s)[A]_2 from the closed-form case table.

    When {rc} > {sc} the table is applied to (s, r) and the sign flipped.
    """
    if (r - s) % level == 0:
        raise ValueError(f"r and s must differ modulo {level}, got r={r}, s={s}")
    N = level
    sr, ss = slash_data(r, A, N), slash_data(s, A, N)
    br, bs = sr.brace_sc, ss.brace_sc
    rs, st = sr.s_star, ss.s_star
    z = lambda e: zeta_pow(N, e)  # noqa: E731
    if br == bs:
        ell = br
        base = -z(st) * (1 - z(rs - st))
        if 2 * ell == N:
            # q^{N/2} collects u^{+-1} from both sides: the factor is 1 - zeta^{-(r*+s*)}
            return base * (1 - z(-rs - st))
        if ell == 0:
            return base * (1 - z(rs + st)) / ((1 - z(rs)) ** 2 * (1 - z(st)) ** 2)
        return base
    if br > bs:
        return -theta(s, r, A, level)
    if br == 0:
        return z(rs) / (1 - z(rs)) ** 2
    return z(rs)


def phi_cofactor(r: int, s: int, A: UniMat, level: int, trunc: int) -> QSeries:
    """(phi_r - phi_s)[A]_2 / (theta q^l), with l = min({rc}, {sc})."""
    ell = min(brace(r * A.c, level).brace, brace(s * A.c, level).brace)
    diff = phi_diff_slash(r, s, A, level, trunc + ell)
    return diff.scalar_mul(theta(r, s, A, level).inverse()).shift(-ell)


def lambda_order(spec: LambdaSpec, A: UniMat) -> int:
    """min({kc},{c}) - min({2c},{c})."""
    N = spec.level
    bc = brace(A.c, N).brace
    return min(brace(spec.k * A.c, N).brace, bc) - min(brace(2 * A.c, N).brace, bc)


def lambda_expansion(spec: LambdaSpec, A: UniMat, trunc: int) -> QSeries:
    """Lambda_k o A below q^trunc.

    The weight-2 factors of numerator and denominator cancel, so the ratio of
    the slashed differences is the plain composition.
    """
    N = spec.level
    if not (3 <= spec.k and 2 * spec.k < N):
        raise ValueError(f"need 3 <= k < N/2, got k={spec.k}, N={N}")
    bc = brace(A.c, N).brace
    ord_num = min(brace(spec.k * A.c, N).brace, bc)
    ord_den = min(brace(2 * A.c, N).brace, bc)
    # inverse of the denominator has truncation T2 - 2*ord_den
    t_num = trunc + ord_den
    t_den = trunc + 2 * ord_den - ord_num
    num = phi_diff_slash(spec.k, 1, A, N, max(t_num, 1))
    den = phi_diff_slash(2, 1, A, N, max(t_den, ord_den + 1))
    out = (num * den.invert()).truncate(trunc)
    if out.trunc < trunc:
        raise AssertionError("lambda expansion lost precision")
    return out


def omega_ratio(spec: LambdaSpec, A: UniMat) -> CycNum:
    """theta_{k,1}(A) / theta_{2,1}(A), the leading coefficient of Lambda_k o A."""
    N = spec.level
    return theta(spec.k, 1, A, N) / theta(2, 1, A, N)


def lambda_conjugates(spec: LambdaSpec, trunc: int, reps=None) -> list[tuple[UniMat, QSeries]]:
    """(A, Lambda_k o A) for every transversal representative A."""
    reps = transversal(spec.level) if reps is None else reps
    return [(A, lambda_expansion(spec, A, trunc)) for A in reps]


__all__ += ["E2"]
