import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from permest.errors import InvalidMatrix, NotPsd, NotSymmetric
from permest.linalg import (
    FACT_TOL,
    PsdTuple,
    as_square_matrix,
    batch_log_abs_det,
    det,
    factor_psd,
    log_abs_det,
)

from conftest import random_psd


def cofactor_det(m):
    """Laplace expansion along the first row, exact for integer entries."""
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


class TestSquareMatrix:
    def test_rejects_nan(self):
        with pytest.raises(InvalidMatrix):
            as_square_matrix([[1.0, math.nan], [0.0, 1.0]])

    def test_rejects_non_square(self):
        with pytest.raises(InvalidMatrix):
            as_square_matrix(np.ones((2, 3)))

    def test_read_only(self):
        a = as_square_matrix(np.eye(2))
        with pytest.raises(ValueError):
            a[0, 0] = 5.0


class TestFactorPsd:
    def test_identity(self):
        assert np.array_equal(factor_psd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        assert np.array_equal(factor_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_two_by_two_multiplies_back(self):
        q = np.array([[2.0, 1.0], [1.0, 2.0]])
        t = factor_psd(q)
        assert np.allclose(np.tril(t), t)
        assert np.max(np.abs(t @ t.T - q)) <= 1e-12

    def test_semidefinite_rank_one(self):
        v = np.array([1.0, -2.0, 3.0])
        q = np.outer(v, v)
        t = factor_psd(q)
        assert np.max(np.abs(t @ t.T - q)) <= 1e-12
        assert np.count_nonzero(np.abs(np.diag(t)) > 0) == 1

    def test_zero_matrix(self):
        assert np.array_equal(factor_psd(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_perturbation(self):
        q = np.array([[1.0, 1.0], [1.0, 1.0]])
        t = factor_psd(q, perturb_eps=1e-3)
        assert np.max(np.abs(t @ t.T - q - 1e-3 * np.eye(2))) <= 1e-12
        assert np.all(np.diag(t) > 0)

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            factor_psd(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_not_psd(self):
        with pytest.raises(NotPsd):
            factor_psd(np.diag([-0.5, 1.0]))

    def test_indefinite_with_zero_pivot(self):
        with pytest.raises(NotPsd):
            factor_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_perturbation_rescues_tiny_negative(self):
        q = np.diag([-1e-4, 1.0])
        with pytest.raises(NotPsd):
            factor_psd(q)
        t = factor_psd(q, perturb_eps=1e-3)
        assert np.allclose(t @ t.T, q + 1e-3 * np.eye(2), atol=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(1, 8), rank=st.integers(1, 8), eps=st.sampled_from([0.0, 1e-6, 0.5]),
           seed=st.integers(0, 2**32 - 1))
    def test_round_trip(self, n, rank, eps, seed):
        q = random_psd(np.random.default_rng(seed), n, min(rank, n))
        t = factor_psd(q, perturb_eps=eps)
        err = np.max(np.abs(t @ t.T - q - eps * np.eye(n)))
        assert err <= FACT_TOL * (1 + np.max(np.abs(q)))
        assert np.array_equal(t, np.tril(t))


class TestDeterminant:
    def test_identity(self):
        assert det(np.eye(4)) == 1.0

    def test_two_by_two(self):
        assert det([[1.0, 2.0], [3.0, 4.0]]) == pytest.approx(-2.0, abs=1e-15)

    def test_empty(self):
        assert det(np.zeros((0, 0))) == 1.0

    def test_singular(self):
        assert det([[1.0, 1.0], [1.0, 1.0]]) == 0.0

    @pytest.mark.parametrize("seed", range(10))
    def test_integer_matches_cofactor(self, seed):
        m = np.random.default_rng(seed).integers(-3, 4, (5, 5))
        exact = cofactor_det(m.tolist())
        got = det(m)
        assert round(got) == exact
        assert abs(got - exact) <= 1e-9 * (1 + abs(exact))

    def test_fraction_oracle_real_entries(self, rng):
        m = rng.uniform(-1, 1, (4, 4))
        exact = cofactor_det([[Fraction(x) for x in row] for row in m.tolist()])
        assert det(m) == pytest.approx(float(exact), rel=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(1, 8)).map(lambda t: (2,) + t * 2),
                  elements=st.floats(-1, 1)))
    def test_multiplicative(self, pair):
        a, b = pair
        lhs = det(a @ b)
        rhs = det(a) * det(b)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


class TestLogAbsDet:
    def test_scaled_identity(self):
        lm, s = log_abs_det(2 * np.eye(3))
        assert lm == pytest.approx(3 * math.log(2), abs=1e-15)
        assert s == 1

    def test_singular(self):
        assert log_abs_det([[1.0, 1.0], [1.0, 1.0]]) == (-math.inf, 0)

    def test_negative(self):
        lm, s = log_abs_det([[1.0, 2.0], [3.0, 4.0]])
        assert lm == pytest.approx(math.log(2), abs=1e-15)
        assert s == -1

    def test_no_overflow(self):
        lm, s = log_abs_det(1e3 * np.eye(200))
        assert lm == pytest.approx(200 * math.log(1e3), rel=1e-14)
        assert s == 1

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_consistent_with_det(self, n, seed):
        m = np.random.default_rng(seed).uniform(-1, 1, (n, n)) + 2 * np.eye(n)
        lm, s = log_abs_det(m)
        d = det(m)
        assert s * math.exp(lm) == pytest.approx(d, rel=1e-9)

    def test_batch_matches_numpy(self, rng):
        stack = rng.standard_normal((50, 6, 6))
        logs, signs = batch_log_abs_det(stack)
        ref_sign, ref_log = np.linalg.slogdet(stack)
        assert np.allclose(logs, ref_log, atol=1e-12)
        assert np.array_equal(signs, ref_sign)


class TestPsdTuple:
    def test_valid(self):
        q = PsdTuple.from_matrices([np.eye(2), np.eye(2)])
        assert q.n == 2
        assert q.stack().shape == (2, 2, 2)

    def test_wrong_count(self):
        from permest.errors import DimensionMismatch
        with pytest.raises(DimensionMismatch):
            PsdTuple.from_matrices([np.eye(2)])

    def test_not_psd(self):
        with pytest.raises(NotPsd):
            PsdTuple.from_matrices([np.eye(2), np.diag([-0.5, 1.0])])

    def test_perturbation_allows_slightly_negative(self):
        mats = [np.eye(2), np.diag([-1e-4, 1.0])]
        with pytest.raises(NotPsd):
            PsdTuple.from_matrices(mats)
        assert PsdTuple.from_matrices(mats, perturb_eps=1e-3).n == 2

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            PsdTuple.from_matrices([np.eye(2), np.array([[1.0, 0.5], [0.0, 1.0]])])
