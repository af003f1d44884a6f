"""Chebyshev aggregation and the running reference point."""

import numpy as np

UTOPIAN_EPS = 1e-6


def chebyshev(F, lam, z) -> np.ndarray:
    """``max_i lam_i * |F_i - z_i|``, broadcasting over leading axes."""
    F = np.asarray(F, dtype=float)
    lam = np.asarray(lam, dtype=float)
    z = np.asarray(z, dtype=float)
    if F.shape[-1] != lam.shape[-1] or F.shape[-1] != z.shape[-1]:
        raise ValueError(f"dimension mismatch: F {F.shape}, lambda {lam.shape}, z {z.shape}")
    return np.max(lam * np.abs(F - z), axis=-1)


def initial_reference(m: int) -> np.ndarray:
    return np.full(m, np.inf)


def update_reference(z, F, eps: float = UTOPIAN_EPS) -> np.ndarray:
    """Lower ``z`` to stay ``eps`` below every observed objective value.

    ``F`` may be one objective vector or a stack of them.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if F.shape[-1] != np.shape(z)[-1]:
        raise ValueError("dimension mismatch between z and F")
    return np.minimum(z, F.min(axis=0) - eps)
