"""Shared helpers for randomized tests."""

import numpy as np

from fplinq.transforms import MatrixFraction


def rand_complex(rng, *shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def rand_psd(rng, n, rank=None, scale=1.0):
    """Random Hermitian PSD matrix via C C^H."""
    rank = n if rank is None else rank
    c = rand_complex(rng, n, rank, scale=scale)
    return c @ c.conj().T


def rand_pd(rng, n, scale=1.0, floor=0.3):
    """Random Hermitian positive-definite matrix, bounded away from singular."""
    return rand_psd(rng, n, scale=scale) + floor * np.eye(n)


def rand_fraction(rng, n, weight=None):
    if weight is None:
        weight = float(rng.uniform(0.1, 2.0))
    return MatrixFraction(sqrt_numerator=rand_complex(rng, n, n),
                          denominator=rand_pd(rng, n),
                          weight=weight)
