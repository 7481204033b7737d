
import mpmath
import pytest

from _oracles import lambda_numeric, phi_slash_numeric, series_at
from genlambda.cyclotomic import CycNum, zeta_pow
from genlambda.lambda_fn import (LambdaSpec, is_prime_power, lambda_expansion, lambda_order,
                                 omega_ratio, phi_cofactor, phi_diff_slash, phi_slash,
                                 difference_closed_form, theta)
from genlambda.modgroup import E2, T_LOWER, UniMat, brace, slash_data, transversal
from genlambda.qseries import QSeries, cyc

N7 = 7


def z(e, N=N7):
    return zeta_pow(N, e)


class TestLambdaSpec:
    @pytest.mark.parametrize("k,N,case", [(3, 7, "i"), (3, 10, "i"), (4, 10, None), (3, 9, None),
                                          (4, 12, None), (3, 12, None), (4, 14, None), (4, 24, "ii"), (5, 30, "ii"), (5, 11, "i")])
    def test_integrality_case(self, k, N, case):
        assert LambdaSpec(k, N).integrality_case == case

    def test_validate(self):
        LambdaSpec(3, 7).validate()
        for k, N in [(2, 7), (4, 7), (3, 6)]:
            with pytest.raises(ValueError):
                LambdaSpec(k, N).validate()

    def test_prime_power(self):
        assert [n for n in range(1, 20) if is_prime_power(n)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]


class TestPhiSlash:
    def test_constant_term_identity(self):
        f = phi_slash(1, E2, 7, 7)
        assert f[0] == z(1) / (1 - z(1)) ** 2
        assert f.order() == 0

    def test_lower_unipotent_start(self):
        f = phi_slash(1, T_LOWER, 7, 3)
        assert f[0] == 0 and f[1] == z(1) and f[2] == 2 * z(2)

    def test_order_three(self):
        f = phi_slash(3, T_LOWER, 7, 7)
        assert f.order() == 3 and f.leading_coefficient() == z(3)

    def test_rejects_multiple_of_level(self):
        with pytest.raises(ValueError):
            phi_slash(7, E2, 7, 5)

    @pytest.mark.parametrize("N", [7, 8, 10])
    def test_even_in_index(self, N):
        for A in transversal(N):
            for s in range(1, N):
                assert phi_slash(s, A, N, 2 * N) == phi_slash(N - s, A, N, 2 * N)

    @pytest.mark.parametrize("N", [7, 9, 12])
    def test_depends_on_bottom_row_mod_level_up_to_sign(self, N):
        for A in transversal(N)[:12]:
            for B in (UniMat(A.a + 3 * A.c, A.b + 3 * A.d, A.c, A.d),
                      UniMat(A.a + A.c * (N - 1), A.b + A.d * (N - 1), A.c, A.d) @ E2,
                      -A):
                for s in range(1, N // 2 + 1):
                    assert phi_slash(s, A, N, 2 * N) == phi_slash(s, B, N, 2 * N)
            # shifting the bottom row by N changes the matrix but not the class
            M = UniMat(1, 0, N, 1) @ A
            assert phi_slash(1, M, N, 2 * N) == phi_slash(1, A, N, 2 * N)

    @pytest.mark.parametrize("N", [7, 8, 12])
    def test_matches_theta_function_oracle(self, N):
        tau = mpmath.mpc("0.13", "1.07")
        for A in transversal(N)[::3]:
            for s in (1, 2, N // 2):
                f = phi_slash(s, A, N, 14 * N)
                got = series_at(f, tau, N)
                want = phi_slash_numeric(s, A, N, tau)
                assert abs(got - want) < mpmath.mpf(10) ** -20, (A, s)


class TestPhiDiff:
    def test_case_iii_example(self):
        d = phi_diff_slash(3, 1, E2, 7, 7)
        expect = -z(1) * (1 - z(2)) * (1 - z(4)) / ((1 - z(3)) ** 2 * (1 - z(1)) ** 2)
        assert d[0] == expect
        assert all(d[e] == 0 for e in range(1, 7))

    def test_case_i_example(self):
        d = phi_diff_slash(2, 1, T_LOWER, 7, 7)
        ring = cyc(7)
        expect = QSeries(ring, {}, 7)
        for n in range(1, 7):
            expect = expect + QSeries(ring, {2 * n: n * z(2 * n), n: -n * z(n)}, 7)
        # u_r^-1 q^N - u_s^-1 q^N with u_2 = zeta^2 q^2, u_1 = zeta q
        expect = expect + QSeries(ring, {5: z(-2), 6: -z(-1)}, 7)
        assert d.congruent_mod(expect, 7)

    def test_antisymmetry(self):
        for A in transversal(7):
            assert phi_diff_slash(3, 1, A, 7, 14) == -phi_diff_slash(1, 3, A, 7, 14)

    def test_equal_indices_rejected(self):
        with pytest.raises(ValueError):
            phi_diff_slash(2, 2, E2, 7, 7)

    @pytest.mark.parametrize("N", [7, 10, 12])
    def test_closed_forms(self, N):
        for A in transversal(N):
            for r in range(2, N // 2 + 1):
                for s in range(1, r):
                    assert phi_diff_slash(r, s, A, N, N).congruent_mod(difference_closed_form(r, s, A, N), N)


class TestTheta:
    def test_identity_example(self):
        for r, s in [(3, 1), (2, 1), (3, 2)]:
            expect = (-z(s) * (1 - z(r - s)) * (1 - z(r + s))
                      / ((1 - z(r)) ** 2 * (1 - z(s)) ** 2))
            assert theta(r, s, E2, 7) == expect

    def test_unequal_braces(self):
        # {2c} = 2 > {c} = 1 for c = 1, so theta(1, 2) = zeta^{1*}
        assert theta(1, 2, T_LOWER, 7) == z(slash_data(1, T_LOWER, 7).s_star)
        assert theta(2, 1, T_LOWER, 7) == -z(slash_data(1, T_LOWER, 7).s_star)

    @pytest.mark.parametrize("N", [7, 8, 9, 10, 12])
    def test_leading_coefficient_and_cofactor(self, N):
        for A in transversal(N):
            for r in range(1, N // 2 + 1):
                for s in range(1, N // 2 + 1):
                    if r == s:
                        continue
                    th = theta(r, s, A, N)
                    assert not th.is_zero()
                    ell = min(brace(r * A.c, N).brace, brace(s * A.c, N).brace)
                    d = phi_diff_slash(r, s, A, N, ell + 1)
                    assert d.order() == ell and d.leading_coefficient() == th
                    cof = phi_cofactor(r, s, A, N, N)
                    assert cof[0] == 1 and cof.order() == 0 and cof.coefficients_integral()


class TestLambdaExpansion:
    def test_identity_constant_term(self):
        spec = LambdaSpec(3, 7)
        f = lambda_expansion(spec, E2, 21)
        omega = ((1 - z(2)) / (1 - z(3))) ** 2 * (1 - z(2)) * (1 - z(4)) / ((1 - z(1)) * (1 - z(3)))
        assert f.order() == 0 and f[0] == omega == omega_ratio(spec, E2)
        assert omega.is_integral()

    @pytest.mark.parametrize("N,k", [(7, 3), (9, 4), (10, 3), (10, 4), (12, 5)])
    def test_order_and_leading_coefficient(self, N, k):
        spec = LambdaSpec(k, N)
        for A in transversal(N):
            f = lambda_expansion(spec, A, 2 * N)
            assert f.trunc == 2 * N
            assert f.order() == lambda_order(spec, A)
            assert f.leading_coefficient() == omega_ratio(spec, A)

    def test_stable_under_wider_truncation(self):
        spec = LambdaSpec(3, 8)
        for A in transversal(8):
            assert lambda_expansion(spec, A, 40).truncate(24) == lambda_expansion(spec, A, 24)

    def test_matches_theta_function_ratio(self):
        spec, N = LambdaSpec(3, 7), 7
        tau = mpmath.mpc("-0.21", "1.13")
        for A in transversal(N)[::4]:
            f = lambda_expansion(spec, A, 12 * N)
            want = lambda_numeric(3, A, N, tau)
            assert abs(series_at(f, tau, N) - want) < mpmath.mpf(10) ** -20

    def test_omega_integral_for_included_case(self):
        for A in transversal(10):
            assert omega_ratio(LambdaSpec(3, 10), A).is_integral()

    def test_excluded_case_is_computed(self):
        value = omega_ratio(LambdaSpec(3, 9), T_LOWER)
        assert isinstance(value, CycNum)
        assert not LambdaSpec(3, 9).qualifies

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            lambda_expansion(LambdaSpec(4, 7), E2, 10)
