"""MOEA/D with differential-evolution operators (MOEA/D-DE).

The population is stored as arrays: row ``i`` of ``X``/``F`` is the
incumbent for sub-problem ``i`` whose weight is ``prefs.members[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .preference import PreferenceSet
from .problems import MopDefinition, supports_optimum, true_subproblem_optima, utopian_point
from .scalarize import UTOPIAN_EPS, chebyshev, initial_reference, update_reference


@dataclass(frozen=True)
class MoeadConfig:
    neighborhood_size: int = 20
    mating_locality: float = 0.9
    max_replacements: int = 2
    de_scale: float = 0.5
    crossover_rate: float = 1.0
    mutation_prob: float | None = None  # None means 1/n
    mutation_eta: float = 20.0
    permute_subproblems: bool = False

    def validate(self, population_size: int) -> None:
        if not 1 <= self.neighborhood_size <= population_size:
            raise ConfigurationError(
                f"neighborhood_size must lie in [1, {population_size}]", key="neighborhood_size"
            )
        if not 0.0 <= self.mating_locality <= 1.0:
            raise ConfigurationError("mating_locality must be a probability", key="mating_locality")
        if self.max_replacements < 1:
            raise ConfigurationError("max_replacements must be >= 1", key="max_replacements")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigurationError("crossover_rate must be a probability", key="crossover_rate")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigurationError("mutation_prob must be a probability", key="mutation_prob")

    def mutation_rate(self, n: int) -> float:
        return 1.0 / n if self.mutation_prob is None else self.mutation_prob


@dataclass
class Population:
    X: np.ndarray
    F: np.ndarray
    prefs: PreferenceSet
    z: np.ndarray
    eval_count: int

    def copy(self) -> "Population":
        return Population(self.X.copy(), self.F.copy(), self.prefs, self.z.copy(), self.eval_count)

    def __len__(self):
        return self.X.shape[0]

    def subproblem_values(self, z=None) -> np.ndarray:
        return chebyshev(self.F, self.prefs.members, self.z if z is None else z)


@dataclass
class History:
    """Per-generation trace of a run; one entry per completed generation."""

    generation: list = field(default_factory=list)
    eval_count: list = field(default_factory=list)
    mean_g: list = field(default_factory=list)
    mse_pop: list = field(default_factory=list)
    mse_pred: list = field(default_factory=list)
    vsd: list = field(default_factory=list)

    def record(self, generation, eval_count, mean_g, mse_pop=np.nan, mse_pred=np.nan, vsd=np.nan):
        self.generation.append(int(generation))
        self.eval_count.append(int(eval_count))
        self.mean_g.append(float(mean_g))
        self.mse_pop.append(float(mse_pop))
        self.mse_pred.append(float(mse_pred))
        self.vsd.append(float(vsd))

    def __len__(self):
        return len(self.generation)

    def columns(self) -> dict:
        return {
            "generation": np.asarray(self.generation),
            "eval_count": np.asarray(self.eval_count),
            "mean_g": np.asarray(self.mean_g),
            "mse_pop": np.asarray(self.mse_pop),
            "mse_pred": np.asarray(self.mse_pred),
            "vsd": np.asarray(self.vsd),
        }


def init_population(
    problem: MopDefinition, prefs: PreferenceSet, rng: np.random.Generator, z0=None
) -> Population:
    """Uniform random individuals inside the box, one per preference vector.

    The reference point starts at ``z0`` (default: +inf) lowered by the
    initial objective vectors.
    """
    N = len(prefs)
    X = problem.lower + rng.random((N, problem.n)) * (problem.upper - problem.lower)
    F = problem.evaluate(X)
    start = initial_reference(problem.m) if z0 is None else np.asarray(z0, dtype=float)
    z = update_reference(start, F)
    return Population(X, F, prefs, z, N)


def build_neighborhoods(prefs: PreferenceSet | np.ndarray, T: int) -> np.ndarray:
    """Indices of the ``T`` nearest weight vectors per sub-problem (self included).

    Ties are broken by the lower index.
    """
    W = prefs.members if isinstance(prefs, PreferenceSet) else np.asarray(prefs, dtype=float)
    if not 1 <= T <= W.shape[0]:
        raise ConfigurationError(f"neighborhood size {T} not in [1, {W.shape[0]}]", key="neighborhood_size")
    d = np.sum((W[:, None, :] - W[None, :, :]) ** 2, axis=-1)
    order = np.argsort(d, axis=1, kind="stable")
    # self sits at distance 0; move it to the front even if a duplicate precedes it
    idx = np.arange(W.shape[0])
    for i in idx:
        row = order[i]
        if row[0] != i:
            order[i] = np.concatenate([[i], row[row != i]])
    return order[:, :T]


def _mutate_gene(y, lo, hi, u, eta):
    span = hi - lo
    p = 1.0 / (eta + 1.0)
    if u < 0.5:
        d1 = (y - lo) / span
        dq = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)) ** p - 1.0
    else:
        d2 = (hi - y) / span
        dq = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)) ** p
    return min(max(y + dq * span, lo), hi)


def polynomial_mutation(y, lower, upper, mask, u, eta) -> np.ndarray:
    """Bounded polynomial mutation of the genes selected by ``mask``.

    ``y`` must already lie inside ``[lower, upper]``; results are clamped.
    """
    out = np.array(y, dtype=float, copy=True)
    for j in np.flatnonzero(np.broadcast_to(mask, out.shape)):
        out[j] = _mutate_gene(float(out[j]), float(lower[j]), float(upper[j]), float(u[j]), eta)
    return out


class _GenerationDraws:
    """All random numbers one generation consumes, drawn up front."""

    def __init__(self, rng, N, T, n, permute):
        self.order = rng.permutation(N) if permute else np.arange(N)
        self.local = rng.random(N)
        self.pick_local = np.argsort(rng.random((N, T)), axis=1)
        self.pick_global = np.argsort(rng.random((N, N)), axis=1)
        self.replace_local = np.argsort(rng.random((N, T)), axis=1)
        self.replace_global = np.argsort(rng.random((N, N)), axis=1)
        self.cross = rng.random((N, n))
        self.jrand = rng.integers(0, n, size=N)
        self.mut_mask = rng.random((N, n))
        self.mut_u = rng.random((N, n))


def _child(X, i, pool, pick, cross, jrand, mut_mask, mut_u, problem, config):
    lower, upper = problem.lower, problem.upper
    r1, r2, r3 = pool[pick[:3]]
    y = X[r1] + config.de_scale * (X[r2] - X[r3])
    if config.crossover_rate < 1.0:
        take = cross < config.crossover_rate
        take[jrand] = True
        y = np.where(take, y, X[i])
    # repair before mutation so the polynomial operator sees in-bounds genes
    y = np.minimum(np.maximum(y, lower), upper)
    eta = config.mutation_eta
    for j in np.flatnonzero(mut_mask < config.mutation_rate(problem.n)):
        y[j] = _mutate_gene(float(y[j]), float(lower[j]), float(upper[j]), float(mut_u[j]), eta)
    return y


def _pool(neighborhoods, i, use_local, N):
    return neighborhoods[i] if use_local else np.arange(N)


def de_offspring(
    pop: Population, i: int, config: MoeadConfig, rng: np.random.Generator, problem: MopDefinition, neighborhoods=None
) -> np.ndarray:
    """DE/rand/1 + binomial crossover + polynomial mutation for sub-problem ``i``."""
    N = len(pop)
    if neighborhoods is None:
        neighborhoods = build_neighborhoods(pop.prefs, config.neighborhood_size)
    use_local = rng.random() < config.mating_locality
    pool = _pool(neighborhoods, i, use_local, N)
    if pool.size < 3:
        pool = np.arange(N)
    pick = rng.permutation(pool.size)
    n = problem.n
    return _child(
        pop.X, i, pool, pick, rng.random(n), rng.integers(0, n), rng.random(n), rng.random(n), problem, config
    )


def moead_generation(
    pop: Population,
    problem: MopDefinition,
    config: MoeadConfig,
    rng: np.random.Generator,
    neighborhoods=None,
    freeze_reference: bool = False,
) -> Population:
    """One pass over all sub-problems; returns a new population (``N`` evaluations).

    With ``freeze_reference`` the reference point is not moved, which makes
    every sub-problem value monotone non-increasing.
    """
    pop = pop.copy()
    N, n = pop.X.shape
    T = config.neighborhood_size
    if neighborhoods is None:
        neighborhoods = build_neighborhoods(pop.prefs, T)
    W = pop.prefs.members
    X, F, z = pop.X, pop.F, pop.z
    draws = _GenerationDraws(rng, N, T, n, config.permute_subproblems)
    everyone = np.arange(N)
    nr = config.max_replacements
    for i in draws.order:
        use_local = draws.local[i] < config.mating_locality and T >= 3
        if use_local:
            pool = neighborhoods[i]
            pick, order = draws.pick_local[i], draws.replace_local[i]
        else:
            pool = everyone
            pick, order = draws.pick_global[i], draws.replace_global[i]
        child = _child(
            X, i, pool, pick, draws.cross[i], draws.jrand[i], draws.mut_mask[i], draws.mut_u[i], problem, config
        )
        fc = problem.evaluate(child)
        pop.eval_count += 1
        if not freeze_reference:
            z = np.minimum(z, fc - UTOPIAN_EPS)
        # replacement order: a random permutation of the mating pool
        cand = pool[order]
        w = W[cand]
        g_new = (w * np.abs(fc - z)).max(axis=1)
        g_old = (w * np.abs(F[cand] - z)).max(axis=1)
        winners = cand[g_new < g_old][:nr]
        if winners.size:
            X[winners] = child
            F[winners] = fc
    pop.z = z
    return pop


def population_mse(pop: Population, problem: MopDefinition, z=None, optima=None) -> float:
    """Mean squared distance of the incumbents to their sub-problem optima.

    The optima default to those for the utopian point of ``problem``;
    pass ``optima`` to reuse a precomputed array.
    """
    if optima is None:
        optima = true_subproblem_optima(problem, pop.prefs.members, utopian_point(problem) if z is None else z)
    return float(np.mean(np.sum((pop.X - optima) ** 2, axis=1)))


def run_moead_de(
    problem: MopDefinition,
    prefs: PreferenceSet,
    generations: int,
    config: MoeadConfig,
    rng: np.random.Generator,
    compensate: bool = False,
    track_error: bool = False,
    z0=None,
) -> tuple[Population, History]:
    """Plain MOEA/D-DE baseline.

    With ``compensate`` the generation count doubles so the total number of
    evaluations equals an MOEA/D-LLA run of ``generations`` generations
    (which spends ``N`` extra evaluations per generation on model samples).
    ``track_error`` logs the distance to the optima for the utopian point.
    """
    if generations < 1:
        raise ConfigurationError("generations must be >= 1", key="generations")
    config.validate(len(prefs))
    pop = init_population(problem, prefs, rng, z0)
    nb = build_neighborhoods(prefs, config.neighborhood_size)
    track_error = track_error and supports_optimum(problem)
    if track_error:
        optima = true_subproblem_optima(problem, prefs.members, utopian_point(problem))
    total = 2 * generations if compensate else generations
    history = History()
    for gen in range(1, total + 1):
        pop = moead_generation(pop, problem, config, rng, nb)
        mse = population_mse(pop, problem, optima=optima) if track_error else np.nan
        history.record(gen, pop.eval_count, np.mean(pop.subproblem_values()), mse_pop=mse)
    return pop, history

