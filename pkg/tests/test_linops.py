import numpy as np
import pytest

from fplinq.linops import (
    NoBracket,
    NotPSD,
    Singular,
    bisect_multiplier,
    hermitian_sqrt,
    hermitianize,
    psd_solve,
)
from util import rand_complex, rand_pd, rand_psd


class TestHermitianSqrt:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_sqrt(np.eye(2)), np.eye(2), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian_sqrt(np.diag([4.0, 9.0])),
                                   np.diag([2.0, 3.0]), atol=1e-14)

    def test_reconstruction_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            m = rand_psd(rng, n)
            s = hermitian_sqrt(m)
            err = np.linalg.norm(s @ s.conj().T - m) / max(np.linalg.norm(m), 1e-300)
            assert err < 1e-10
            # the principal root is itself Hermitian PSD
            assert np.linalg.norm(s - s.conj().T) <= 1e-9 * max(np.linalg.norm(s), 1e-300)
            assert np.linalg.eigvalsh(hermitianize(s))[0] >= -1e-12

    def test_rank_deficient(self):
        rng = np.random.default_rng(8)
        m = rand_psd(rng, 4, rank=2)
        s = hermitian_sqrt(m)
        np.testing.assert_allclose(s @ s.conj().T, m, atol=1e-10)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSD):
            hermitian_sqrt(np.diag([1.0, -0.5]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotPSD):
            hermitian_sqrt(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestPsdSolve:
    def test_identity(self):
        rng = np.random.default_rng(9)
        x = rand_complex(rng, 3, 2)
        np.testing.assert_allclose(psd_solve(np.eye(3), x, 0.0), x, atol=1e-14)

    def test_scalar_multiple(self):
        np.testing.assert_allclose(psd_solve(2.0 * np.eye(2), np.eye(2), 0.0),
                                   0.5 * np.eye(2), atol=1e-14)

    def test_residual_random(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            b = rand_pd(rng, n)
            x = rand_complex(rng, n, n)
            out = psd_solve(b, x, 0.0)
            res = np.linalg.norm(b @ out - x) / np.linalg.norm(x)
            assert res < 1e-9

    def test_ridge(self):
        b = np.diag([1.0, 0.0])
        out = psd_solve(b, np.eye(2), ridge=1e-3)
        np.testing.assert_allclose(out, np.diag([1.0 / 1.001, 1e3]), rtol=1e-12)

    def test_singular_raises(self):
        with pytest.raises(Singular):
            psd_solve(np.zeros((2, 2)), np.eye(2), 0.0)


class TestBisectMultiplier:
    def test_inactive_constraint(self):
        assert bisect_multiplier(lambda mu: 0.5 / (1 + mu) ** 2, 1.0, 1e-12) == 0.0

    def test_closed_form(self):
        # 4/(1+mu)^2 = 1 at mu = 1
        mu = bisect_multiplier(lambda mu: 4.0 / (1 + mu) ** 2, 1.0, 1e-13)
        assert abs(mu - 1.0) < 1e-10

    def test_complementarity_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            d = rng.uniform(0.05, 2.0, n)
            s = rng.uniform(0.0, 4.0, n)
            p_max = float(rng.uniform(0.2, 3.0))

            def power(mu):
                return float(np.sum(s / (d + mu) ** 2))

            mu = bisect_multiplier(power, p_max, tol=1e-12)
            if mu == 0.0:
                assert power(0.0) <= p_max
            else:
                assert abs(power(mu) - p_max) <= 1e-11 * p_max
                assert power(mu) <= p_max  # feasible side

    def test_grid_oracle(self):
        # dense grid over mu as an independent check of the bisection result
        s = np.array([3.0, 1.5, 0.7])
        d = np.array([0.2, 1.0, 2.5])
        p_max = 0.9

        def power(mu):
            return float(np.sum(s / (d + mu) ** 2))

        mu = bisect_multiplier(power, p_max, tol=1e-12)
        grid = np.linspace(0, 50, 20_001)
        feasible = grid[np.array([power(g) for g in grid]) <= p_max]
        # bisection lands within one grid cell of the first feasible point
        assert feasible[0] - 0.0026 <= mu <= feasible[0]
        assert abs(power(mu) - p_max) <= 1e-11 * p_max

    def test_no_bracket(self):
        with pytest.raises(NoBracket):
            bisect_multiplier(lambda mu: 2.0, 1.0, 1e-12, max_doublings=10)
