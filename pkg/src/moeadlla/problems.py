"""Benchmark problems: ZDT1/2/4/6, DTLZ1-4 and MOZDT1.

Every evaluator is vectorised over leading axes: an input of shape
``(..., n)`` yields objectives of shape ``(..., m)``.  The module also
carries the analytic Pareto-front and Pareto-set oracles needed to score
runs (front samples, ideal/nadir points, Chebyshev-optimal solutions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from .errors import ConfigurationError, UnsupportedProblemError

DEFAULT_DIMENSIONS = {
    "ZDT1": 30,
    "ZDT2": 30,
    "ZDT4": 30,
    "ZDT6": 30,
    "DTLZ1": 7,
    "DTLZ2": 12,
    "DTLZ3": 12,
    "DTLZ4": 12,
    "MOZDT1": 10,
}

DTLZ4_ALPHA = 100.0

# First local maximiser of exp(-4x) sin^6(6 pi x): tan(6 pi x) = 9 pi.
ZDT6_X1_KNEE = float(np.arctan(9 * np.pi) / (6 * np.pi))
ZDT6_F1_MIN = float(1 - np.exp(-4 * ZDT6_X1_KNEE) * np.sin(6 * np.pi * ZDT6_X1_KNEE) ** 6)

_BISECT_TOL = 1e-12
_WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class MopDefinition:
    """A box-constrained continuous multiobjective problem."""

    name: str
    n: int
    m: int
    lower: np.ndarray
    upper: np.ndarray
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def evaluate(self, x) -> np.ndarray:
        """Objective vector(s) for decision vector(s) ``x``.

        Only documented for in-bounds input; callers clamp first.
        """
        return self.evaluator(np.asarray(x, dtype=float))

    def clip(self, x) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


# ---------------------------------------------------------------------------
# objective functions


def _zdt_g(x):
    n = x.shape[-1]
    return 1.0 + 9.0 * x[..., 1:].sum(axis=-1) / (n - 1)


def _zdt1(x):
    f1 = x[..., 0]
    g = _zdt_g(x)
    return np.stack([f1, g * (1.0 - np.sqrt(f1 / g))], axis=-1)


def _zdt2(x):
    f1 = x[..., 0]
    g = _zdt_g(x)
    return np.stack([f1, g * (1.0 - (f1 / g) ** 2)], axis=-1)


def _zdt4(x):
    n = x.shape[-1]
    f1 = x[..., 0]
    tail = x[..., 1:]
    g = 1.0 + 10.0 * (n - 1) + np.sum(tail**2 - 10.0 * np.cos(4 * np.pi * tail), axis=-1)
    return np.stack([f1, g * (1.0 - np.sqrt(f1 / g))], axis=-1)


def _zdt6(x):
    n = x.shape[-1]
    x1 = x[..., 0]
    f1 = 1.0 - np.exp(-4.0 * x1) * np.sin(6 * np.pi * x1) ** 6
    g = 1.0 + 9.0 * (np.sum(x[..., 1:], axis=-1) / (n - 1)) ** 0.25
    return np.stack([f1, g * (1.0 - (f1 / g) ** 2)], axis=-1)


def mozdt1_g(x):
    """The replaced ``g`` of MOZDT1; equals 1 exactly on its Pareto set."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    l = ((1.0 - 2.0 * x1) ** 2 - x2) ** 2 + (x3 + x2 - 1.0) ** 2
    shared = np.sum(np.abs(x[..., 3:] - x1[..., None]), axis=-1)
    return 1.0 + 9.0 / (n - 3) * shared + l


def _mozdt1(x):
    f1 = x[..., 0]
    g = mozdt1_g(x)
    return np.stack([f1, g * (1.0 - np.sqrt(f1 / g))], axis=-1)


def _dtlz_rastrigin_g(tail):
    k = tail.shape[-1]
    t = tail - 0.5
    return 100.0 * (k + np.sum(t**2 - np.cos(20 * np.pi * t), axis=-1))


def _dtlz1(x, m=3):
    pos, tail = x[..., : m - 1], x[..., m - 1 :]
    g = _dtlz_rastrigin_g(tail)
    f = np.empty(x.shape[:-1] + (m,))
    for i in range(m):
        term = np.prod(pos[..., : m - 1 - i], axis=-1)
        if i > 0:
            term = term * (1.0 - pos[..., m - 1 - i])
        f[..., i] = 0.5 * term * (1.0 + g)
    return f


def _dtlz_sphere(pos, g, m):
    theta = pos * (np.pi / 2)
    f = np.empty(pos.shape[:-1] + (m,))
    for i in range(m):
        term = np.prod(np.cos(theta[..., : m - 1 - i]), axis=-1)
        if i > 0:
            term = term * np.sin(theta[..., m - 1 - i])
        f[..., i] = term * (1.0 + g)
    return f


def _dtlz2(x, m=3):
    g = np.sum((x[..., m - 1 :] - 0.5) ** 2, axis=-1)
    return _dtlz_sphere(x[..., : m - 1], g, m)


def _dtlz3(x, m=3):
    g = _dtlz_rastrigin_g(x[..., m - 1 :])
    return _dtlz_sphere(x[..., : m - 1], g, m)


def _dtlz4(x, m=3):
    g = np.sum((x[..., m - 1 :] - 0.5) ** 2, axis=-1)
    return _dtlz_sphere(x[..., : m - 1] ** DTLZ4_ALPHA, g, m)


_EVALUATORS = {
    "ZDT1": (_zdt1, 2),
    "ZDT2": (_zdt2, 2),
    "ZDT4": (_zdt4, 2),
    "ZDT6": (_zdt6, 2),
    "DTLZ1": (_dtlz1, 3),
    "DTLZ2": (_dtlz2, 3),
    "DTLZ3": (_dtlz3, 3),
    "DTLZ4": (_dtlz4, 3),
    "MOZDT1": (_mozdt1, 2),
}

PROBLEM_NAMES = tuple(_EVALUATORS)


def canonical_name(name: str) -> str:
    key = str(name).strip().upper()
    if key not in _EVALUATORS:
        raise ConfigurationError(
            f"unknown problem {name!r}; expected one of {', '.join(PROBLEM_NAMES)}", key="problem"
        )
    return key


def make_problem(name: str, n: int | None = None) -> MopDefinition:
    """Build a benchmark problem by (case-insensitive) name.

    ``n`` defaults to the dimension in ``DEFAULT_DIMENSIONS``.
    """
    key = canonical_name(name)
    evaluator, m = _EVALUATORS[key]
    if n is None:
        n = DEFAULT_DIMENSIONS[key]
    if int(n) != n:
        raise ConfigurationError(f"n must be an integer, got {n!r}", key="n")
    n = int(n)
    if n < m + 1:
        raise ConfigurationError(f"{key} needs n >= {m + 1}, got {n}", key="n")
    if key == "MOZDT1" and n < 4:
        raise ConfigurationError(f"MOZDT1 needs n >= 4, got {n}", key="n")
    lower = np.zeros(n)
    upper = np.ones(n)
    if key == "ZDT4":
        lower[1:] = -5.0
        upper[1:] = 5.0
    lower.setflags(write=False)
    upper.setflags(write=False)
    return MopDefinition(key, n, m, lower, upper, evaluator)


def mozdt1(n: int = 10) -> MopDefinition:
    return make_problem("MOZDT1", n)


# ---------------------------------------------------------------------------
# analytic fronts


def _front_f2(name, f1):
    if name in ("ZDT1", "ZDT4", "MOZDT1"):
        return 1.0 - np.sqrt(np.maximum(f1, 0.0))
    if name in ("ZDT2", "ZDT6"):
        return 1.0 - f1**2
    raise UnsupportedProblemError(f"no analytic two-objective front for {name}")


def _f1_range(name):
    return (ZDT6_F1_MIN, 1.0) if name == "ZDT6" else (0.0, 1.0)


def simplex_lattice(m: int, h: int) -> np.ndarray:
    """All points of the simplex with coordinates in ``{0, 1/h, ..., 1}``."""
    pts = []
    for bars in combinations(range(h + m - 1), m - 1):
        edges = (-1,) + bars + (h + m - 1,)
        pts.append([edges[i + 1] - edges[i] - 1 for i in range(m)])
    return np.asarray(pts, dtype=float) / h


def true_front_samples(problem: MopDefinition, k: int) -> np.ndarray:
    """Points on the analytic Pareto front, shape ``(count, m)``.

    For two objectives ``count == k`` and the points are uniform in ``f1``.
    For three objectives the largest simplex lattice with at most ``k``
    points is mapped onto the plane (DTLZ1) or unit sphere (DTLZ2-4).
    """
    if k < 2:
        raise ConfigurationError("need at least two front samples", key="k")
    name = problem.name
    if problem.m == 2:
        lo, hi = _f1_range(name)
        f1 = np.linspace(lo, hi, int(k))
        return np.stack([f1, _front_f2(name, f1)], axis=-1)
    h = 1
    while comb(h + 1 + problem.m - 1, problem.m - 1) <= k:
        h += 1
    w = simplex_lattice(problem.m, h)
    if name == "DTLZ1":
        return 0.5 * w
    if name in ("DTLZ2", "DTLZ3", "DTLZ4"):
        return w / np.linalg.norm(w, axis=1, keepdims=True)
    raise UnsupportedProblemError(f"no analytic front for {name}")


def ideal_point(problem: MopDefinition) -> np.ndarray:
    if problem.m == 2:
        return np.array([_f1_range(problem.name)[0], 0.0])
    return np.zeros(problem.m)


def utopian_point(problem: MopDefinition, eps: float = 1e-6) -> np.ndarray:
    """The ideal point shifted down by ``eps``: strictly better than every attainable vector."""
    return ideal_point(problem) - eps


def nadir_point(problem: MopDefinition) -> np.ndarray:
    if problem.m == 2:
        lo, _ = _f1_range(problem.name)
        return np.array([1.0, float(_front_f2(problem.name, np.float64(lo)))])
    return np.full(problem.m, 0.5 if problem.name == "DTLZ1" else 1.0)


# ---------------------------------------------------------------------------
# Chebyshev-optimal solutions


def _bisect(fn, lo, hi, increasing, iters=None):
    """Vectorised bisection for the sign change of a monotone ``fn`` on [lo, hi]."""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    inc = np.broadcast_to(increasing, lo.shape)
    while True:
        if np.all(hi - lo <= _BISECT_TOL):
            break
        mid = 0.5 * (lo + hi)
        v = fn(mid)
        go_right = np.where(inc, v < 0, v > 0)
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    return 0.5 * (lo + hi)


def _zdt6_x1_from_f1(f1):
    # f1 decreases monotonically in x1 on [0, knee]
    f = lambda x: (1.0 - np.exp(-4.0 * x) * np.sin(6 * np.pi * x) ** 6) - f1
    return _bisect(f, np.zeros_like(f1), np.full_like(f1, ZDT6_X1_KNEE), increasing=False)


def _lift_two_objective(problem, f1):
    k = f1.shape[0]
    x = np.zeros((k, problem.n))
    name = problem.name
    if name == "ZDT6":
        x[:, 0] = _zdt6_x1_from_f1(f1)
    else:
        x[:, 0] = f1
    if name == "MOZDT1":
        t = f1
        x[:, 1] = (1.0 - 2.0 * t) ** 2
        x[:, 2] = 1.0 - x[:, 1]
        x[:, 3:] = t[:, None]
    return x


def _optima_two_objective(problem, lams, z):
    lo, hi = _f1_range(problem.name)
    front = lambda f1: _front_f2(problem.name, f1)
    k = lams.shape[0]
    z1 = np.full(k, z[0])
    z2 = np.full(k, z[1])
    # ta: where f1 crosses z1, tb: where the decreasing f2 crosses z2
    ta = np.clip(z1, lo, hi)
    f2_lo, f2_hi = front(np.float64(lo)), front(np.float64(hi))
    tb = np.where(
        z2 >= f2_lo,
        lo,
        np.where(z2 <= f2_hi, hi, _bisect(lambda t: front(t) - z2, np.full(k, lo), np.full(k, hi), False)),
    )
    a = np.minimum(ta, tb)
    b = np.maximum(ta, tb)
    l1, l2 = lams[:, 0], lams[:, 1]
    balance = lambda t: l1 * np.abs(t - z1) - l2 * np.abs(front(t) - z2)
    # the balance function increases on [ta, tb] and decreases on [tb, ta]
    f1 = _bisect(balance, a, b, increasing=ta <= tb)
    return _lift_two_objective(problem, f1)


def _optima_three_objective(problem, lams, z):
    w = 1.0 / np.maximum(lams, _WEIGHT_FLOOR)
    name = problem.name
    if name == "DTLZ1":
        c = (0.5 - np.sum(z)) / np.sum(w, axis=1)
        p = z + c[:, None] * w
        p = np.maximum(p, 0.0)
        p = 0.5 * p / np.sum(p, axis=1, keepdims=True)
        x = np.full((lams.shape[0], problem.n), 0.5)
        x1 = 1.0 - 2.0 * p[:, 2]
        s = p[:, 0] + p[:, 1]
        x2 = np.divide(p[:, 0], s, out=np.full_like(s, 0.5), where=s > 0)
        x[:, 0] = np.clip(x1, 0.0, 1.0)
        x[:, 1] = np.clip(x2, 0.0, 1.0)
        return x
    # unit sphere: |z + c w| = 1
    ww = np.sum(w * w, axis=1)
    zw = w @ z
    zz = float(z @ z)
    c = (-zw + np.sqrt(np.maximum(zw**2 - ww * (zz - 1.0), 0.0))) / ww
    p = z + c[:, None] * w
    p = np.maximum(p, 0.0)
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    x = np.full((lams.shape[0], problem.n), 0.5)
    x[:, 0] = np.clip(np.arcsin(np.clip(p[:, 2], -1.0, 1.0)) * 2 / np.pi, 0.0, 1.0)
    x[:, 1] = np.clip(np.arctan2(p[:, 1], p[:, 0]) * 2 / np.pi, 0.0, 1.0)
    return x


_OPTIMUM_SUPPORTED = ("ZDT1", "ZDT2", "ZDT4", "ZDT6", "MOZDT1", "DTLZ1", "DTLZ2", "DTLZ3")


def supports_optimum(problem: MopDefinition) -> bool:
    return problem.name in _OPTIMUM_SUPPORTED


def true_subproblem_optima(problem: MopDefinition, lams, z) -> np.ndarray:
    """Decision vectors minimising the Chebyshev value for each row of ``lams``.

    The optimum is located on the analytic front where the weighted
    deviations from ``z`` balance, then mapped back to decision space.
    Weights below 1e-6 are floored in the three-objective case, which picks
    the lexicographic end of an otherwise non-unique optimal set.  On ZDT6
    the branch ``x1 <= ZDT6_X1_KNEE`` is used.
    """
    if not supports_optimum(problem):
        raise UnsupportedProblemError(f"no analytic Chebyshev optimum for {problem.name}")
    lams = np.atleast_2d(np.asarray(lams, dtype=float))
    z = np.asarray(z, dtype=float)
    if problem.m == 2:
        return _optima_two_objective(problem, lams, z)
    return _optima_three_objective(problem, lams, z)


def true_subproblem_optimum(problem: MopDefinition, lam, z) -> np.ndarray:
    return true_subproblem_optima(problem, np.asarray(lam, dtype=float)[None, :], z)[0]
