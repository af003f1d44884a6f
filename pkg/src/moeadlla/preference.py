"""Preference vectors on the probability simplex and their neighbourhoods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

SIMPLEX_INPUT_TOL = 1e-9


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto ``{w : w >= 0, sum(w) = 1}``.

    Works row-wise on 2-D input.  Uses the sort-and-threshold method: with
    ``u`` sorted descending, the threshold comes from the largest ``k`` for
    which ``u_k - (sum_{j<=k} u_j - 1) / k > 0``.
    """
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("cannot project a non-finite vector onto the simplex")
    if v.shape[-1] < 2:
        raise ValueError("simplex projection needs at least two components")
    flat = v.reshape(-1, v.shape[-1])
    u = -np.sort(-flat, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, flat.shape[1] + 1)
    rho = np.count_nonzero(u - css / k > 0, axis=1)
    theta = css[np.arange(flat.shape[0]), rho - 1] / rho
    w = np.maximum(flat - theta[:, None], 0.0)
    return w.reshape(v.shape)


def as_preference(weights, tol: float = SIMPLEX_INPUT_TOL) -> np.ndarray:
    """Validate a user-supplied preference vector and renormalise it."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ConfigurationError(f"preference vector needs >= 2 components, got {weights!r}", key="lambda0")
    if not np.all(np.isfinite(w)) or np.any(w < -tol) or abs(w.sum() - 1.0) > tol:
        raise ConfigurationError(f"preference vector {weights!r} is not on the simplex", key="lambda0")
    w = np.maximum(w, 0.0)
    return w / w.sum()


def parse_preference(text: str) -> np.ndarray:
    """Parse ``"0.5,0.5"`` style input."""
    try:
        parts = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse preference vector {text!r}", key="lambda0") from exc
    return as_preference(parts)


def default_anchor(m: int) -> np.ndarray:
    return np.full(m, 1.0 / m)


@dataclass(frozen=True)
class PreferenceSet:
    """``N`` preference vectors sampled around ``anchor``."""

    anchor: np.ndarray
    members: np.ndarray
    sigma2: float

    def __len__(self):
        return self.members.shape[0]

    @property
    def m(self):
        return self.members.shape[1]


def sample_preference_set(anchor, sigma2: float, size: int, rng: np.random.Generator) -> PreferenceSet:
    """Gaussian perturbations of ``anchor`` (covariance ``sigma2 * I``) projected back to the simplex."""
    if sigma2 <= 0:
        raise ConfigurationError("sigma2 must be positive", key="sigma2")
    if size < 1:
        raise ConfigurationError("preference set size must be >= 1", key="population")
    anchor = np.asarray(anchor, dtype=float)
    noise = rng.normal(0.0, np.sqrt(sigma2), size=(size, anchor.size))
    members = project_to_simplex(anchor + noise)
    return PreferenceSet(anchor, members, float(sigma2))


def perturb_preferences(prefs: PreferenceSet | np.ndarray, sigma2_noise: float, rng: np.random.Generator) -> np.ndarray:
    """One noisy, re-projected copy of every member."""
    if sigma2_noise <= 0:
        raise ConfigurationError("sigma2_noise must be positive", key="sigma2_noise")
    members = prefs.members if isinstance(prefs, PreferenceSet) else np.asarray(prefs, dtype=float)
    noise = rng.normal(0.0, np.sqrt(sigma2_noise), size=members.shape)
    return project_to_simplex(members + noise)
