import itertools

import numpy as np
import pytest

from fplinq.matching import (
    Matching,
    MatchingProblem,
    auction,
    brute_force_value,
    hungarian,
)


def dense_problem(w):
    w = np.asarray(w, dtype=float)
    rows, cols = np.nonzero(np.ones_like(w, dtype=bool))
    return MatchingProblem(num_rows=w.shape[0], num_cols=w.shape[1],
                           rows=rows, cols=cols, weights=w[rows, cols])


def random_sparse(rng, n_rows, n_cols, density=0.4, lo=-2.0, hi=5.0):
    mask = rng.random((n_rows, n_cols)) < density
    rows, cols = np.nonzero(mask)
    w = rng.uniform(lo, hi, size=rows.size)
    return MatchingProblem(num_rows=n_rows, num_cols=n_cols,
                           rows=rows, cols=cols, weights=w)


def enumerate_value(p):
    """Exhaustive search over injective partial assignments (second oracle,
    different algorithm family from the DP)."""
    edges = list(zip(p.rows.tolist(), p.cols.tolist(), p.weights.tolist()))
    best = 0.0
    for k in range(1, min(p.num_rows, p.num_cols, len(edges)) + 1):
        for combo in itertools.combinations(edges, k):
            rr = [e[0] for e in combo]
            cc = [e[1] for e in combo]
            if len(set(rr)) == k and len(set(cc)) == k:
                best = max(best, sum(e[2] for e in combo))
    return best


def check_degree_constraints(m: Matching):
    assert np.unique(m.rows).size == m.rows.size
    assert np.unique(m.cols).size == m.cols.size


class TestHungarian:
    def test_two_by_two(self):
        m = hungarian(dense_problem([[1.0, 2.0], [3.0, 1.0]]))
        assert m.value == pytest.approx(5.0)
        assert m.pairs() == [(0, 1), (1, 0)]

    def test_negative_edge_unmatched(self):
        p = MatchingProblem(1, 1, np.array([0]), np.array([0]), np.array([-1.0]))
        m = hungarian(p)
        assert m.value == 0.0
        assert m.pairs() == []

    def test_single_positive_edge(self):
        p = MatchingProblem(1, 1, np.array([0]), np.array([0]), np.array([5.0]))
        m = hungarian(p)
        assert m.value == pytest.approx(5.0)
        assert m.pairs() == [(0, 0)]

    def test_brute_force_small(self):
        rng = np.random.default_rng(40)
        for k in range(200):
            nr = int(rng.integers(1, 9))
            nc = int(rng.integers(1, 9))
            p = random_sparse(rng, nr, nc, density=float(rng.uniform(0.2, 1.0)))
            m = hungarian(p)
            check_degree_constraints(m)
            assert m.value == pytest.approx(brute_force_value(p), abs=1e-9)

    def test_enumeration_oracle_tiny(self):
        rng = np.random.default_rng(41)
        for _ in range(40):
            p = random_sparse(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
            assert hungarian(p).value == pytest.approx(enumerate_value(p), abs=1e-9)

    def test_rectangular(self):
        m = hungarian(dense_problem([[1.0, 4.0, 2.0]]))
        assert m.value == pytest.approx(4.0)
        assert m.pairs() == [(0, 1)]


class TestAuction:
    def test_two_by_two(self):
        m = auction(dense_problem([[1.0, 2.0], [3.0, 1.0]]), epsilon=1e-6)
        assert m.value == pytest.approx(5.0, abs=1e-5)

    def test_empty(self):
        p = MatchingProblem(3, 3, np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0))
        assert auction(p, 1e-6).pairs() == []

    def test_matches_hungarian_small(self):
        rng = np.random.default_rng(42)
        for _ in range(120):
            p = random_sparse(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
            eps = 1e-9 / max(p.num_edges, 1)
            a = auction(p, epsilon=eps)
            check_degree_constraints(a)
            assert a.value == pytest.approx(hungarian(p).value, abs=1e-6)

    def test_matches_hungarian_sparse_20x20(self):
        rng = np.random.default_rng(43)
        for _ in range(30):
            p = random_sparse(rng, 20, 20, density=0.15)
            eps = 1e-8 / max(p.num_edges, 1)
            a = auction(p, epsilon=eps)
            check_degree_constraints(a)
            assert a.value == pytest.approx(hungarian(p).value, abs=1e-5)

    def test_exact_on_integer_gaps(self):
        # epsilon below the minimum weight gap over edge count gives equality
        rng = np.random.default_rng(44)
        for _ in range(40):
            p = random_sparse(rng, 6, 6, density=0.6, lo=1.0, hi=9.0)
            w = np.round(p.weights)
            p = MatchingProblem(6, 6, p.rows, p.cols, w + 0.5)  # gaps >= 1
            a = auction(p, epsilon=0.9 / max(p.num_edges, 1))
            assert a.value == pytest.approx(hungarian(p).value, abs=1e-9)


class TestProblemValidation:
    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError):
            MatchingProblem(2, 2, np.array([0, 0]), np.array([1, 1]), np.array([1.0, 2.0]))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            MatchingProblem(2, 2, np.array([2]), np.array([0]), np.array([1.0]))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            MatchingProblem(2, 2, np.array([0]), np.array([0]), np.array([np.inf]))
