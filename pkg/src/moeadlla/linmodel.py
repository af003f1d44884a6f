"""Local linear Pareto-set model with a row-sparse coefficient matrix.

The model maps a preference vector to a decision vector through

    x = A (lam[:m-1] - anchor[:m-1]) + b

and is fitted by least squares with a (2,1)-norm penalty on ``A``, so
whole rows vanish and the corresponding variables become shared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .preference import PreferenceSet, perturb_preferences

SHARED_ROW_TOL = 1e-10
LOSS_REDUCTIONS = ("mean", "sum")


@dataclass(frozen=True)
class LinearModel:
    A: np.ndarray
    b: np.ndarray
    anchor: np.ndarray
    n_iter: int = 0
    degenerate: bool = False

    @property
    def n(self):
        return self.b.shape[0]

    @property
    def m(self):
        return self.anchor.shape[0]

    @classmethod
    def constant(cls, b, anchor) -> "LinearModel":
        b = np.asarray(b, dtype=float)
        anchor = np.asarray(anchor, dtype=float)
        return cls(np.zeros((b.size, anchor.size - 1)), b.copy(), anchor)


@dataclass(frozen=True)
class RegressionDataset:
    lams: np.ndarray
    X: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        if self.lams.shape[0] == 0 or self.lams.shape[0] != self.X.shape[0]:
            raise ValueError("dataset needs matching, nonempty preference and solution arrays")

    def offsets(self) -> np.ndarray:
        m = self.anchor.shape[0]
        return self.lams[:, : m - 1] - self.anchor[: m - 1]


def predict(model: LinearModel, lam) -> np.ndarray:
    """Model output for one preference vector or a stack of them (not clamped)."""
    lam = np.asarray(lam, dtype=float)
    m = model.m
    if lam.shape[-1] != m:
        raise ValueError(f"expected preference vectors with {m} components, got shape {lam.shape}")
    d = lam[..., : m - 1] - model.anchor[: m - 1]
    return d @ model.A.T + model.b


def row_norms(model: LinearModel) -> np.ndarray:
    return np.linalg.norm(model.A, axis=1)


def shared_rows(model: LinearModel, tol: float = SHARED_ROW_TOL) -> np.ndarray:
    """Boolean mask of variables the model keeps constant."""
    return row_norms(model) <= tol


def vsd(model: LinearModel) -> float:
    """Variable sharing degree: the (2,1)-norm of ``A``."""
    return float(np.sum(row_norms(model)))


def fit_objective(model: LinearModel, data: RegressionDataset, gamma: float) -> float:
    resid = data.X - predict(model, data.lams)
    return float(np.mean(np.sum(resid**2, axis=1)) + gamma * vsd(model))


def block_soft_threshold(V, t):
    """Row-wise prox of ``t * ||.||_{2,1}``."""
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    scale = np.maximum(0.0, 1.0 - np.divide(t, norms, out=np.full_like(norms, np.inf), where=norms > 0))
    return V * scale


def zero_threshold(data: RegressionDataset) -> np.ndarray:
    """Per-row penalty level at and above which the fitted row is exactly zero."""
    D = data.offsets()
    Dc = D - D.mean(axis=0)
    Xc = data.X - data.X.mean(axis=0)
    N = D.shape[0]
    return np.linalg.norm((2.0 / N) * Xc.T @ Dc, axis=1)


def fit(
    data: RegressionDataset,
    gamma: float,
    max_iters: int = 10_000,
    tol: float = 1e-10,
    init: np.ndarray | None = None,
    reduction: str = "mean",
) -> LinearModel:
    """Penalised least-squares fit of a :class:`LinearModel`.

    Minimises ``mean_i ||x_i - A d_i - b||^2 + gamma * ||A||_{2,1}`` with
    ``d_i`` the anchored preference offsets (``reduction="sum"`` replaces the
    mean by the sum, i.e. divides ``gamma`` by ``N``).  The problem splits per output
    row; the unpenalised bias is removed by centring.  With one offset
    column each row is an exact soft-threshold; otherwise rows are solved
    together by proximal gradient (step ``1/L``) until the largest parameter
    change drops below ``tol``.  ``init`` warm-starts the iteration.
    """
    if gamma < 0:
        raise ConfigurationError("gamma must be nonnegative", key="gamma")
    if reduction not in LOSS_REDUCTIONS:
        raise ConfigurationError(f"reduction must be one of {LOSS_REDUCTIONS}", key="reduction")
    D = data.offsets()
    N, p = D.shape
    if reduction == "sum":
        gamma = gamma / N
    x_mean = data.X.mean(axis=0)
    d_mean = D.mean(axis=0)
    Dc = D - d_mean
    Xc = data.X - x_mean
    n = Xc.shape[1]
    if np.all(np.ptp(D, axis=0) == 0):
        return LinearModel(np.zeros((n, p)), x_mean, data.anchor.copy(), 0, True)

    C = Xc.T @ Dc  # (n, p)
    if p == 1:
        d = Dc[:, 0]
        c = C[:, 0]
        a = np.sign(c) * np.maximum(np.abs(c) - gamma * N / 2.0, 0.0) / (d @ d)
        A = a[:, None]
        iters = 1
    else:
        G = Dc.T @ Dc
        L = (2.0 / N) * np.linalg.eigvalsh(G)[-1]
        step = 1.0 / L
        A = np.zeros((n, p)) if init is None else np.array(init, dtype=float, copy=True)
        iters = 0
        for iters in range(1, max_iters + 1):
            grad = (2.0 / N) * (A @ G - C)
            A_next = block_soft_threshold(A - step * grad, step * gamma)
            change = np.max(np.abs(A_next - A))
            A = A_next
            if change < tol:
                break
    b = x_mean - A @ d_mean
    return LinearModel(A, b, data.anchor.copy(), iters, False)


def sample_from_model(
    model: LinearModel,
    prefs: PreferenceSet,
    sigma2_noise: float,
    lower,
    upper,
    rng: np.random.Generator,
) -> np.ndarray:
    """One clamped model solution per perturbed member of ``prefs``."""
    noisy = perturb_preferences(prefs, sigma2_noise, rng)
    return np.clip(predict(model, noisy), lower, upper)


# ---------------------------------------------------------------------------
# serialisation

MODEL_FORMAT = "moeadlla.linear-model/1"


def model_to_dict(model: LinearModel, gamma=None, problem=None, seed=None) -> dict:
    return {
        "format": MODEL_FORMAT,
        "problem": problem,
        "gamma": None if gamma is None else float(gamma),
        "seed": seed,
        "anchor": [float(v) for v in model.anchor],
        "b": [float(v) for v in model.b],
        "A": [[float(v) for v in row] for row in model.A],
    }


def model_from_dict(doc: dict) -> tuple[LinearModel, dict]:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a linear model document: format={doc.get('format')!r}")
    anchor = np.asarray(doc["anchor"], dtype=float)
    b = np.asarray(doc["b"], dtype=float)
    A = np.asarray(doc["A"], dtype=float).reshape(b.size, anchor.size - 1)
    meta = {k: doc.get(k) for k in ("problem", "gamma", "seed")}
    return LinearModel(A, b, anchor), meta


def save_model(path, model: LinearModel, gamma=None, problem=None, seed=None) -> None:
    # json writes floats with repr(), the shortest string that round-trips exactly
    text = json.dumps(model_to_dict(model, gamma, problem, seed), indent=1)
    Path(path).write_text(text + "\n")


def load_model(path) -> tuple[LinearModel, dict]:
    return model_from_dict(json.loads(Path(path).read_text()))
