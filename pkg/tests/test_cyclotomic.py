import cmath
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genlambda.cyclotomic import (CycNum, LevelMismatchError, NotDivisibleError,
                                  cyclotomic_polynomial, euler_phi, zeta_pow)


def mobius(n):
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def cyclotomic_by_mobius(n):
    """Phi_n = prod_{d|n} (X^d - 1)^{mu(n/d)}, numerator and denominator multiplied out."""
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d == 0:
            f = [-1] + [0] * (d - 1) + [1]
            m = mobius(n // d)
            if m == 1:
                num = poly_mul(num, f)
            elif m == -1:
                den = poly_mul(den, f)
    # exact division num / den (den monic up to sign)
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - 1, len(den) - 2, -1):
        c = num[i] // den[-1]
        q[i - len(den) + 1] = c
        for j, y in enumerate(den):
            num[i - len(den) + 1 + j] -= c * y
    assert not any(num)
    return tuple(q)


def numeric_norm(a: CycNum) -> complex:
    N = a.level
    prod = 1
    for t in range(1, N + 1):
        if gcd(t, N) == 1:
            z = cmath.exp(2j * cmath.pi * t / N)
            prod *= sum(float(c) * z ** i for i, c in enumerate(a.coeffs))
    return prod


def Z(N, e=1):
    return zeta_pow(N, e)


class TestCyclotomicPolynomial:
    def test_base_cases(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)

    def test_level_12(self):
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    @pytest.mark.parametrize("n", range(1, 61))
    def test_matches_mobius_product(self, n):
        cp = cyclotomic_polynomial(n)
        assert cp == cyclotomic_by_mobius(n)
        assert len(cp) - 1 == euler_phi(n)
        assert cp[-1] == 1

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            cyclotomic_polynomial(0)


class TestZetaPow:
    def test_examples(self):
        assert zeta_pow(7, 0) == 1
        assert zeta_pow(7, 7) == 1
        assert zeta_pow(4, 3) == -Z(4)

    @pytest.mark.parametrize("N", [5, 7, 9, 12, 15])
    def test_matches_numeric_root_of_unity(self, N):
        for e in range(-N, 2 * N):
            assert abs(zeta_pow(N, e).to_complex() - cmath.exp(2j * cmath.pi * e / N)) < 1e-9


class TestRingOps:
    def test_examples(self):
        z = Z(7)
        assert (1 - z) + z == 1
        assert z * Z(7, 6) == 1
        assert (1 - z) * (1 + z) == 1 - Z(7, 2)

    def test_level_mismatch(self):
        with pytest.raises(LevelMismatchError):
            Z(7) + Z(9)

    def test_inverse_examples(self):
        assert CycNum.one(7).inverse() == 1
        assert Z(11).inverse() == Z(11, 10)
        assert (1 - Z(4)).inverse() == CycNum(4, [Fraction(1, 2), Fraction(1, 2)])

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            CycNum.zero(7).inverse()

    def test_json_round_trip(self):
        a = CycNum(9, [1, "2/3", 0, -5, 0, "1/7"])
        assert CycNum.from_json(a.to_json()) == a
        assert a.to_json()["coeffs"][1] == "2/3"


class TestNorm:
    def test_examples(self):
        assert CycNum.one(7).norm() == 1
        assert (1 - Z(7)).norm() == 7
        assert abs((1 - Z(12, 2)).norm()) == 1

    @pytest.mark.parametrize("N", [5, 8, 9, 12, 15, 16])
    def test_against_product_of_embeddings(self, N):
        a = CycNum(N, [3, -1, 2] + [0] * (euler_phi(N) - 3)) if euler_phi(N) >= 3 else CycNum(N, [3, -1])
        assert abs(numeric_norm(a) - float(a.norm())) < 1e-6 * max(1, abs(float(a.norm())))


class TestIntegralityAndUnits:
    def test_is_integral(self):
        assert (1 - Z(7)).is_integral()
        assert not CycNum(4, [Fraction(1, 2), Fraction(1, 2)]).is_integral()
        assert ((1 - Z(9, 3)) / (1 - Z(9))).is_integral()

    def test_is_unit(self):
        assert Z(7).is_unit()
        assert not (1 - Z(7)).is_unit()
        assert (1 - Z(12, 2)).is_unit()

    def test_divide_exact(self):
        assert (1 - Z(7, 2)).divide_exact(1 - Z(7)) == 1 + Z(7)
        assert (1 - Z(12, 8)).divide_exact(1 - Z(12, 4)) == 1 + Z(12, 4)
        with pytest.raises(NotDivisibleError):
            (1 - Z(7)).divide_exact((1 - Z(7)) ** 2)
        with pytest.raises(ZeroDivisionError):
            Z(7).divide_exact(CycNum.zero(7))


def is_prime_power(n):
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


@pytest.mark.parametrize("N", range(2, 41))
def test_divisibility_of_one_minus_zeta(N):
    for k in range(1, N):
        delta = gcd(k, N)
        for ell in range(0, 2 * N, delta):
            (1 - Z(N, ell)).divide_exact(1 - Z(N, k))


@pytest.mark.parametrize("N", range(2, 41))
def test_units_among_one_minus_zeta(N):
    for k in range(1, N):
        n = abs((1 - Z(N, k)).norm())
        if is_prime_power(N // gcd(k, N)):
            assert n > 1
        else:
            assert n == 1 and (1 - Z(N, k)).is_unit()


levels = st.sampled_from([5, 7, 8, 9, 12])


@st.composite
def cycnums(draw, level=None):
    N = draw(levels) if level is None else level
    frac = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
    coeffs = draw(st.lists(frac, min_size=euler_phi(N), max_size=euler_phi(N)))
    return CycNum(N, coeffs)


@st.composite
def triples(draw):
    N = draw(levels)
    return tuple(draw(cycnums(N)) for _ in range(3))


@settings(max_examples=60, deadline=None)
@given(triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(triples())
def test_norm_multiplicative_and_inverse(t):
    a, b, _ = t
    assert (a * b).norm() == a.norm() * b.norm()
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert a.inverse() * a == 1


@pytest.mark.parametrize("N", [5, 7, 9, 12, 20])
def test_norm_of_roots_of_unity(N):
    for e in range(N):
        assert abs(Z(N, e).norm()) == 1


def test_conjugation_is_automorphism():
    a, b = CycNum(9, [1, 2, 0, -1, 0, 3]), CycNum(9, [0, 1, 1, 0, -2, 0])
    for t in (2, 4, 5, 7, 8):
        assert (a * b).conjugate(t) == a.conjugate(t) * b.conjugate(t)
        assert Z(9).conjugate(t) == Z(9, t)
