import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infrastructure.linalg import (
    batch_invertible_mod,
    inverse_mod,
    is_invertible_mod,
    matmul_mod,
    nullspace_mod,
    rank_mod,
    solve_mod,
    span_basis_mod,
)


def matrices(p, max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    ).map(lambda rows: np.array(rows, dtype=np.int64))


class TestRank:
    def test_rank_over_f2_differs_from_rationals(self):
        A = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert rank_mod(A, 2) == 2
        assert rank_mod(A, 3) == 3

    def test_empty_matrix_has_rank_zero(self):
        assert rank_mod(np.zeros((0, 3), dtype=np.int64), 5) == 0

    @settings(max_examples=40, deadline=None)
    @given(matrices(5))
    def test_rank_nullity(self, A):
        N = nullspace_mod(A, 5)
        assert rank_mod(A, 5) + N.shape[1] == A.shape[1]
        assert not matmul_mod(A, N, 5).any()


class TestSolveAndInverse:
    def test_solve_consistent_system(self):
        A = np.array([[1, 2], [3, 4]])
        x = solve_mod(A, np.array([1, 0]), 7)
        assert x is not None
        assert np.array_equal(matmul_mod(A, x.reshape(-1, 1), 7).reshape(-1), np.array([1, 0]))

    def test_solve_inconsistent_system(self):
        A = np.array([[1, 1], [1, 1]])
        assert solve_mod(A, np.array([0, 1]), 3) is None

    def test_inverse_round_trip(self):
        A = np.array([[2, 1], [1, 1]])
        inv = inverse_mod(A, 5)
        assert np.array_equal(matmul_mod(A, inv, 5), np.eye(2, dtype=np.int64))

    def test_singular_inverse_raises(self):
        with pytest.raises(ValueError):
            inverse_mod(np.array([[1, 2], [2, 4]]), 5)
        assert not is_invertible_mod(np.array([[1, 2], [2, 4]]), 5)

    def test_large_prime_products_do_not_overflow(self):
        p = 2147483647
        A = np.array([[p - 1, p - 1], [p - 1, p - 1]])
        assert np.array_equal(matmul_mod(A, A, p), np.array([[2, 2], [2, 2]]))


class TestSpanBasis:
    def test_span_basis_drops_dependent_rows(self):
        V = np.array([[1, 0, 1], [2, 0, 2], [0, 1, 0]])
        assert span_basis_mod(V, 3).shape == (2, 3)


def square_stacks():
    def stacks(p, n):
        entries = st.integers(0, p - 1)
        square = st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)
        return st.lists(square, min_size=1, max_size=12).map(lambda s: (p, np.array(s, dtype=np.int64)))

    return st.sampled_from([2, 3, 7]).flatmap(lambda p: st.integers(1, 4).flatmap(lambda n: stacks(p, n)))


class TestBatchInvertible:
    @settings(max_examples=40, deadline=None)
    @given(square_stacks())
    def test_matches_single_matrix_check(self, case):
        p, stack = case
        expected = [is_invertible_mod(A, p) for A in stack]
        assert batch_invertible_mod(stack, p).tolist() == expected

    def test_needs_row_swap(self):
        stack = np.array([[[0, 1], [1, 0]], [[1, 1], [1, 1]], [[2, 1], [1, 2]]])
        assert batch_invertible_mod(stack, 3).tolist() == [True, False, False]

    def test_non_square_batch(self):
        assert not batch_invertible_mod(np.zeros((3, 2, 3), dtype=np.int64), 5).any()

    def test_rejects_flat_input(self):
        with pytest.raises(ValueError):
            batch_invertible_mod(np.eye(2, dtype=np.int64), 5)
