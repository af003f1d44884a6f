"""Quality indicators: IGD, hypervolume, their preference-based R-metric
variants, and distance/variance diagnostics for fitted models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MetricUndefinedError
from .linmodel import LinearModel, predict
from .problems import MopDefinition, ideal_point, true_front_samples, true_subproblem_optima

ASF_WEIGHT_FLOOR = 1e-6
HV_REF_MARGIN = 0.1


def _as_points(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[None, :]
    return P


def igd(points, reference) -> float:
    """Mean distance from each reference point to its nearest member of ``points``."""
    S = _as_points(points)
    R = _as_points(reference)
    if S.shape[0] == 0 or R.shape[0] == 0:
        raise ValueError("igd needs nonempty point and reference sets")
    d = np.sqrt(np.sum((R[:, None, :] - S[None, :, :]) ** 2, axis=-1))
    return float(np.mean(d.min(axis=1)))


def nondominated_mask(points) -> np.ndarray:
    """True for members not strictly dominated by another member (duplicates kept)."""
    P = _as_points(points)
    le = np.all(P[:, None, :] <= P[None, :, :], axis=-1)
    lt = np.any(P[:, None, :] < P[None, :, :], axis=-1)
    dominated = np.any(le & lt, axis=0)
    return ~dominated


def _hv2d(P, ref):
    P = P[np.all(P < ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    hv = 0.0
    best_f2 = ref[1]
    for f1, f2 in P:
        if f2 < best_f2:
            hv += (ref[0] - f1) * (best_f2 - f2)
            best_f2 = f2
    return float(hv)


def _hv3d(P, ref):
    P = P[np.all(P < ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    P = P[np.argsort(P[:, 2], kind="stable")]
    levels = np.append(P[:, 2], ref[2])
    hv = 0.0
    for k in range(P.shape[0]):
        depth = levels[k + 1] - levels[k]
        if depth > 0:
            hv += _hv2d(P[: k + 1, :2], ref[:2]) * depth
    return float(hv)


def hypervolume(points, ref_point) -> float:
    """Exact dominated volume w.r.t. ``ref_point`` for two or three objectives.

    Points that do not strictly dominate the reference point add nothing.
    """
    ref = np.asarray(ref_point, dtype=float)
    P = _as_points(points)
    if P.shape[0] == 0:
        return 0.0
    if ref.size == 2:
        return _hv2d(P, ref)
    if ref.size == 3:
        return _hv3d(P, ref)
    raise ValueError(f"hypervolume supports 2 or 3 objectives, got {ref.size}")


# ---------------------------------------------------------------------------
# R-metric


def asf(points, anchor, z_utopian) -> np.ndarray:
    """Achievement scalarising value ``max_i (f_i - z_i) / w_i``."""
    w = np.maximum(np.asarray(anchor, dtype=float), ASF_WEIGHT_FLOOR)
    return np.max((_as_points(points) - z_utopian) / w, axis=-1)


def _pivot(P, anchor, z_utopian):
    return P[int(np.argmin(asf(P, anchor, z_utopian)))]


def _trim(P, centre, delta):
    return P[np.all(np.abs(P - centre) <= delta / 2.0, axis=1)]


def iso_asf_point(pivot, anchor, z_utopian, z_worst) -> np.ndarray:
    """Point on the line from ``z_utopian`` to ``z_worst`` with the pivot's ASF value."""
    direction = np.asarray(z_worst, dtype=float) - z_utopian
    t = float(asf(pivot, anchor, z_utopian)[0]) / float(asf(z_utopian + direction, anchor, z_utopian)[0])
    return z_utopian + t * direction


def r_metric_transfer(points, anchor, delta, z_utopian, z_worst) -> np.ndarray:
    """Preference-based preprocessing of a solution set.

    Keeps the nondominated members, picks the pivot with the smallest ASF,
    discards members outside the cube of side ``delta`` centred on the
    pivot, and shifts the survivors so the pivot lands on its iso-ASF point
    on the utopian-to-worst line.  Returns an empty array when nothing
    survives.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    P = _as_points(points)
    if P.shape[0] == 0:
        raise ValueError("cannot transfer an empty set")
    z_utopian = np.asarray(z_utopian, dtype=float)
    P = P[nondominated_mask(P)]
    pivot = _pivot(P, anchor, z_utopian)
    P = _trim(P, pivot, delta)
    shift = iso_asf_point(pivot, anchor, z_utopian, z_worst) - pivot
    return P + shift


def preferred_front_region(front, anchor, delta, z_utopian) -> np.ndarray:
    """Front samples within the ``delta``-cube around the front's own ASF pivot."""
    F = _as_points(front)
    return _trim(F, _pivot(F, anchor, z_utopian), delta)


def r_igd(points, front, anchor, delta, z_utopian, z_worst) -> float:
    moved = r_metric_transfer(points, anchor, delta, z_utopian, z_worst)
    if moved.shape[0] == 0:
        raise MetricUndefinedError("no solutions survive the R-metric trimming")
    region = preferred_front_region(front, anchor, delta, np.asarray(z_utopian, dtype=float))
    return igd(moved, region)


def r_hv(points, anchor, delta, z_utopian, z_worst, ref_point) -> float:
    moved = r_metric_transfer(points, anchor, delta, z_utopian, z_worst)
    if moved.shape[0] == 0:
        raise MetricUndefinedError("no solutions survive the R-metric trimming")
    return hypervolume(moved, ref_point)


def r_metric_delta(sigma2: float, reading: str = "std") -> float:
    """Trimming width: six standard deviations (``"std"``) or ``6 * sigma2`` (``"variance"``)."""
    if reading == "std":
        return 6.0 * float(np.sqrt(sigma2))
    if reading == "variance":
        return 6.0 * float(sigma2)
    raise ValueError(f"unknown delta reading {reading!r}")


@dataclass(frozen=True)
class RMetricSetup:
    """Everything needed to score solution sets of one problem."""

    anchor: np.ndarray
    delta: float
    z_utopian: np.ndarray
    z_worst: np.ndarray
    ref_point: np.ndarray
    front: np.ndarray = field(repr=False)
    delta_reading: str = "std"

    @classmethod
    def for_problem(cls, problem: MopDefinition, anchor, sigma2=0.02, reading="std", front_points=None):
        if front_points is None:
            front_points = 2001 if problem.m == 2 else 5151
        front = true_front_samples(problem, front_points)
        zu = ideal_point(problem)
        zw = front.max(axis=0)
        ref = zw + HV_REF_MARGIN * (zw - zu)
        return cls(np.asarray(anchor, dtype=float), r_metric_delta(sigma2, reading), zu, zw, ref, front, reading)

    def r_igd(self, F) -> float:
        return r_igd(F, self.front, self.anchor, self.delta, self.z_utopian, self.z_worst)

    def r_hv(self, F) -> float:
        return r_hv(F, self.anchor, self.delta, self.z_utopian, self.z_worst, self.ref_point)


# ---------------------------------------------------------------------------
# decision-space diagnostics


def mse_to_true_ps(model: LinearModel, prefs, problem: MopDefinition, z) -> float:
    """Mean squared distance between model outputs and the Chebyshev optima."""
    W = getattr(prefs, "members", prefs)
    W = np.asarray(W, dtype=float)
    opt = true_subproblem_optima(problem, W, z)
    return float(np.mean(np.sum((predict(model, W) - opt) ** 2, axis=1)))


def variable_variances(solutions) -> np.ndarray:
    """Per-coordinate population variance (divides by the count)."""
    X = np.asarray(solutions, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need at least two solutions")
    return X.var(axis=0)


REPORT_COLUMNS = ("problem", "source", "gamma", "seed", "r_igd", "r_hv", "mse", "vsd")


@dataclass(frozen=True)
class MetricReport:
    problem: str
    source: str
    gamma: float
    seed: int
    r_igd: float
    r_hv: float
    mse: float
    vsd: float
    variable_variances: np.ndarray

    def header(self) -> list[str]:
        return list(REPORT_COLUMNS) + [f"var_{j + 1}" for j in range(self.variable_variances.size)]

    def row(self) -> list:
        return [self.problem, self.source, self.gamma, self.seed, self.r_igd, self.r_hv, self.mse, self.vsd] + [
            float(v) for v in self.variable_variances
        ]
