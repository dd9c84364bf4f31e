from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from divisor_workbench import exact
from oracles import cofactor_det, negative_definite

GRAM_S5 = [[-3, 1, 1, 1, 1], [1, -2, 0, 0, 0], [1, 0, -2, 0, 0], [1, 0, 0, -2, 0], [1, 0, 0, 0, -2]]


def square(max_n=6, lo=-20, hi=20):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))


class TestDet:
    @pytest.mark.parametrize("m, want", [
        ([[-2, 1], [1, -2]], 3),
        (GRAM_S5, -16),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1),
        ([], 1),
        ([[0, 1], [1, 0]], -1),
        ([[0, 0], [0, 5]], 0),
    ])
    def test_examples(self, m, want):
        assert exact.det(m) == want

    def test_non_square(self):
        with pytest.raises(exact.ShapeError):
            exact.det([[1, 2, 3], [4, 5, 6]])

    def test_ragged(self):
        with pytest.raises(exact.ShapeError):
            exact.det([[1, 2], [3]])

    @given(square())
    def test_matches_cofactor_oracle(self, m):
        got = exact.det(m)
        assert isinstance(got, int)
        assert got == cofactor_det(m)

    def test_big_entries_stay_exact(self):
        m = [[10**30 + i + j for j in range(4)] for i in range(4)]
        m[0][0] += 7
        assert exact.det(m) == cofactor_det(m)

    def test_rational_entries(self):
        m = [[Fraction(1, 2), 1], [1, Fraction(1, 3)]]
        assert exact.det(m) == Fraction(1, 6) - 1


class TestNegativeDefinite:
    @pytest.mark.parametrize("m, want", [
        (GRAM_S5, True), ([[0, 1], [1, 0]], False), ([[-2, 1], [1, -2]], True),
        ([[-1, 0], [0, 0]], False), ([[-1]], True), ([[1]], False),
    ])
    def test_examples(self, m, want):
        assert exact.is_negative_definite(m) is want

    def test_asymmetric_rejected(self):
        with pytest.raises(exact.SymmetryError):
            exact.is_negative_definite([[-2, 1], [0, -2]])

    @given(square(5, -4, 4), st.booleans(), st.randoms(use_true_random=False))
    def test_sampling_necessary_condition(self, a, gram_form, rnd):
        n = len(a)
        if gram_form:
            # -(BᵀB + I) is negative definite by construction
            m = [[-sum(a[k][i] * a[k][j] for k in range(n)) - (i == j) for j in range(n)] for i in range(n)]
        else:
            m = [[a[i][j] + a[j][i] for j in range(n)] for i in range(n)]
        verdict = exact.is_negative_definite(m)
        assert verdict == negative_definite(m)
        assert verdict or not gram_form
        if verdict:
            for _ in range(100):
                x = [rnd.randint(-9, 9) for _ in range(n)]
                if any(x):
                    assert exact.bilinear(m, x, x) < 0


class TestSolve:
    def test_examples(self):
        assert exact.solve_linear([[-2]], [-2]) == (1,)
        b = [exact.bilinear(GRAM_S5, [2, 1, 1, 1, 1], [int(i == j) for j in range(5)]) for i in range(5)]
        assert exact.solve_linear(GRAM_S5, b) == (2, 1, 1, 1, 1)

    def test_no_solution(self):
        with pytest.raises(exact.NoUniqueSolution) as err:
            exact.solve_linear([[1, 1], [1, 1]], [1, 2])
        assert err.value.kind == "inconsistent"
        with pytest.raises(exact.NoUniqueSolution) as err:
            exact.solve_linear([[1, 1], [1, 1]], [1, 1])
        assert err.value.kind == "underdetermined"

    def test_shape(self):
        with pytest.raises(exact.ShapeError):
            exact.solve_linear([[1, 0], [0, 1]], [1])

    @given(square(5, -9, 9), st.lists(st.integers(-50, 50), min_size=5, max_size=5))
    def test_substitution(self, m, b):
        b = b[:len(m)]
        try:
            x = exact.solve_linear(m, b)
        except exact.NoUniqueSolution:
            assert cofactor_det(m) == 0
            return
        assert all(isinstance(v, Fraction) for v in x)
        assert list(exact.mat_vec(m, x)) == b


class TestIntegerSpan:
    def test_examples(self):
        assert exact.in_integer_span([[2, 0]], [4, 0])
        assert not exact.in_integer_span([[2, 0]], [3, 0])
        assert exact.in_integer_span([], [0, 0])
        assert not exact.in_integer_span([], [1, 0])
        assert exact.in_integer_span([[2, 1], [0, 3]], [2, 4])
        assert not exact.in_integer_span([[2, 1], [0, 3]], [2, 2])

    def test_shape(self):
        with pytest.raises(exact.ShapeError):
            exact.in_integer_span([[1, 0]], [1, 0, 0])

    @given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4),
           st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    def test_combinations_are_members(self, vecs, coeffs):
        target = [sum(c * v[i] for c, v in zip(coeffs, vecs)) for i in range(3)]
        assert exact.in_integer_span(vecs, target)

    @given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
    def test_hermite_rows_span_same_lattice(self, vecs):
        rows = exact.hermite_rows(vecs)
        for v in vecs:
            assert exact.in_integer_span(rows, v) if rows else not any(v)
        for r in rows:
            assert exact.in_integer_span(vecs, r)
        pivots = [next(j for j, a in enumerate(r) if a) for r in rows]
        assert pivots == sorted(set(pivots))
        assert all(r[p] > 0 for r, p in zip(rows, pivots))
