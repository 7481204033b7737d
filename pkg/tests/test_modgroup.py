import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genlambda.modgroup import (E2, S, T_LOWER, UniMat, brace, coset_count, coset_key, same_coset,
                                slash_data, transversal)


def sl2_mod(N):
    return [m for m in itertools.product(range(N), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % N == 1 % N]


def left_orbit(m, N):
    """Orbit of m under left multiplication by +-(1 b; 0 1) mod N."""
    a, b, c, d = m
    out = set()
    for sgn in (1, -1):
        for t in range(N):
            out.add(((sgn * (a + t * c)) % N, (sgn * (b + t * d)) % N, (sgn * c) % N, (sgn * d) % N))
    return frozenset(out)


def brute_cosets(N):
    return {left_orbit(m, N) for m in sl2_mod(N)}


def reduce(A, N):
    return (A.a % N, A.b % N, A.c % N, A.d % N)


@st.composite
def unimodular(draw):
    """Random SL2(Z) element as a word in T and S."""
    M = E2
    for step in draw(st.lists(st.tuples(st.integers(-6, 6), st.booleans()), min_size=1, max_size=8)):
        k, flip = step
        M = M @ UniMat(1, k, 0, 1)
        if flip:
            M = M @ S
    return M


class TestUniMat:
    def test_det_check(self):
        with pytest.raises(ValueError):
            UniMat(1, 1, 1, 1)

    def test_parse_and_ops(self):
        A = UniMat.parse("2,1,1,1")
        assert A @ A.inverse() == E2
        assert (-A).rows() == [[-2, -1], [-1, -1]]
        assert S @ S == -E2

    def test_act(self):
        assert S.act(2j) == pytest.approx(0.5j)
        assert T_LOWER.act(1j) == pytest.approx(1j / (1j + 1))


class TestBrace:
    def test_examples(self):
        assert brace(3, 7) == (3, 1)
        assert brace(5, 7) == (2, -1)
        assert brace(0, 7) == (0, 1)
        assert brace(5, 10) == (5, 1)
        assert brace(-1, 10) == (1, -1)

    @pytest.mark.parametrize("N", range(1, 101))
    def test_unique_solution(self, N):
        for x in range(-N, 2 * N):
            b, mu = brace(x, N)
            sols = [(y, m) for y in range(0, N // 2 + 1) for m in (1, -1) if (x - m * y) % N == 0]
            assert (b, mu) in sols and 0 <= b <= N / 2
            # the representative is unique; only the sign can be ambiguous, at 0 and N/2
            assert {y for y, _ in sols} == {b}
            if b == 0 or 2 * b == N:
                assert mu == 1
            assert brace(-x, N)[0] == b


class TestSlashData:
    def test_identity(self):
        assert slash_data(3, E2, 7) == (3, 0)

    def test_lower_unipotent(self):
        assert slash_data(1, T_LOWER, 7) == (1, 1)
        assert slash_data(5, T_LOWER, 7) == (2, 2)   # mu(5) = -1, s* = -5 mod 7

    def test_rejects_multiple_of_level(self):
        with pytest.raises(ValueError):
            slash_data(7, E2, 7)


class TestTransversal:
    @pytest.mark.parametrize("N", [3, 4, 5, 6, 7, 8, 9, 10])
    def test_matches_brute_force_orbits(self, N):
        reps = transversal(N)
        orbits = brute_cosets(N)
        assert len(reps) == len(orbits) == coset_count(N)
        hit = {next(o for o in orbits if reduce(A, N) in o) for A in reps}
        assert len(hit) == len(reps)

    @pytest.mark.parametrize("N,count", [(7, 24), (8, 24), (9, 36), (10, 36), (12, 48), (13, 84)])
    def test_counts(self, N, count):
        assert len(transversal(N)) == coset_count(N) == count

    @pytest.mark.parametrize("N", range(3, 41))
    def test_count_formula(self, N):
        assert len(transversal(N)) == coset_count(N)

    def test_identity_first(self):
        for N in (7, 10, 12):
            assert transversal(N)[0] == E2

    def test_deterministic(self):
        assert transversal(11) == transversal(11)
        assert [A.rows() for A in transversal(7)][:4] == [
            [[1, 0], [0, 1]], [[-3, -1], [7, 2]], [[-2, -1], [7, 3]], [[0, -1], [1, 0]]]

    def test_same_coset(self):
        N = 7
        A = UniMat(2, 1, 1, 1)
        assert same_coset(UniMat(1, 3, 0, 1) @ A, A, N)
        assert same_coset(-A, A, N)
        assert not same_coset(T_LOWER, E2, N)


@settings(max_examples=200, deadline=None)
@given(unimodular(), st.sampled_from([7, 8, 9, 10, 12, 15]))
def test_random_matrix_in_exactly_one_coset(M, N):
    matches = [A for A in transversal(N) if same_coset(M, A, N)]
    assert len(matches) == 1
    assert coset_key(matches[0], N) == coset_key(M, N)
