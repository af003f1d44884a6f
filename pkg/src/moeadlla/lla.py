"""MOEA/D-LLA: MOEA/D with a local linear approximation of the Pareto set.

Each generation alternates three steps on the same preference set:

1. one MOEA/D-DE generation over all sub-problems,
2. a group-sparse regression of the incumbents on their preference vectors,
3. sampling one model solution per (perturbed) preference and letting it
   compete against the incumbent of that sub-problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .linmodel import LOSS_REDUCTIONS, LinearModel, RegressionDataset, fit, predict, sample_from_model, vsd
from .moead import History, MoeadConfig, Population, build_neighborhoods, init_population, moead_generation
from .preference import PreferenceSet, as_preference, sample_preference_set
from .problems import MopDefinition, supports_optimum, true_subproblem_optima, utopian_point
from .scalarize import UTOPIAN_EPS, chebyshev, update_reference


REFERENCE_MODES = ("online", "ideal")


def reference_start(problem: MopDefinition, mode: str):
    """Initial reference point: +inf (``"online"``) or just below the analytic ideal (``"ideal"``)."""
    if mode == "ideal":
        return utopian_point(problem, UTOPIAN_EPS)
    return None


@dataclass(frozen=True)
class LlaConfig:
    population: int = 100
    generations: int = 300
    gamma: float = 1e-3
    sigma2: float = 0.02
    sigma2_noise: float = 0.05
    reg_tol: float = 1e-10
    reg_max_iters: int = 10_000
    moead: MoeadConfig = field(default_factory=MoeadConfig)
    seed: int = 0
    reference: str = "online"
    # gamma weighs the summed squared residual by default (see linmodel.fit)
    loss_reduction: str = "sum"

    def validate(self) -> None:
        if self.population < 3:
            raise ConfigurationError("population must be >= 3", key="population")
        if self.generations < 1:
            raise ConfigurationError("generations must be >= 1", key="generations")
        if self.gamma < 0:
            raise ConfigurationError("gamma must be nonnegative", key="gamma")
        if self.sigma2 <= 0:
            raise ConfigurationError("sigma2 must be positive", key="sigma2")
        if self.sigma2_noise <= 0:
            raise ConfigurationError("sigma2_noise must be positive", key="sigma2_noise")
        if self.reg_max_iters < 1:
            raise ConfigurationError("reg_max_iters must be >= 1", key="reg_max_iters")
        if self.loss_reduction not in LOSS_REDUCTIONS:
            raise ConfigurationError(f"loss_reduction must be one of {LOSS_REDUCTIONS}", key="loss_reduction")
        if self.reference not in REFERENCE_MODES:
            raise ConfigurationError(f"reference must be one of {REFERENCE_MODES}", key="reference")
        self.moead.validate(self.population)


@dataclass
class LlaResult:
    model: LinearModel
    population: Population
    history: History

    def __iter__(self):
        # allows ``model, pop, history = run_lla(...)``
        return iter((self.model, self.population, self.history))


def initial_model(pop: Population) -> LinearModel:
    """``A = 0`` and ``b`` = the incumbent of the sub-problem closest to the anchor."""
    prefs = pop.prefs
    i = int(np.argmin(np.sum((prefs.members - prefs.anchor) ** 2, axis=1)))
    return LinearModel.constant(pop.X[i], prefs.anchor)


def update_population_with_model(
    pop: Population,
    model: LinearModel,
    prefs: PreferenceSet,
    sigma2_noise: float,
    problem: MopDefinition,
    rng: np.random.Generator,
    freeze_reference: bool = False,
) -> Population:
    """Pairwise replacement: model sample ``i`` only competes with incumbent ``i``."""
    pop = pop.copy()
    Xs = sample_from_model(model, prefs, sigma2_noise, problem.lower, problem.upper, rng)
    Fs = problem.evaluate(Xs)
    pop.eval_count += Xs.shape[0]
    if not freeze_reference:
        pop.z = update_reference(pop.z, Fs)
    W = prefs.members
    better = chebyshev(Fs, W, pop.z) < chebyshev(pop.F, W, pop.z)
    pop.X[better] = Xs[better]
    pop.F[better] = Fs[better]
    return pop


def run_lla(
    problem: MopDefinition,
    anchor,
    config: LlaConfig,
    rng: np.random.Generator | None = None,
    track_error: bool = False,
) -> LlaResult:
    """Run MOEA/D-LLA and return the final model, population and history.

    Total evaluations: ``N`` for the initial population plus ``2 N`` per
    generation.  ``track_error`` adds the distance of the model and of the
    population to the analytic optima (for the current reference point) to
    the history when the problem has that oracle.
    """
    config.validate()
    anchor = as_preference(anchor)
    if anchor.size != problem.m:
        raise ConfigurationError(f"anchor has {anchor.size} components, problem has {problem.m} objectives", key="lambda0")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    prefs = sample_preference_set(anchor, config.sigma2, config.population, rng)
    pop = init_population(problem, prefs, rng, reference_start(problem, config.reference))
    nb = build_neighborhoods(prefs, config.moead.neighborhood_size)
    model = initial_model(pop)
    track_error = track_error and supports_optimum(problem)
    if track_error:
        opt = true_subproblem_optima(problem, prefs.members, utopian_point(problem))
    history = History()
    for gen in range(1, config.generations + 1):
        pop = moead_generation(pop, problem, config.moead, rng, nb)
        data = RegressionDataset(prefs.members, pop.X, anchor)
        model = fit(data, config.gamma, config.reg_max_iters, config.reg_tol, init=model.A, reduction=config.loss_reduction)
        pop = update_population_with_model(pop, model, prefs, config.sigma2_noise, problem, rng)
        if track_error:
            mse_pop = float(np.mean(np.sum((pop.X - opt) ** 2, axis=1)))
            mse_pred = float(np.mean(np.sum((predict(model, prefs.members) - opt) ** 2, axis=1)))
        else:
            mse_pop = mse_pred = np.nan
        history.record(gen, pop.eval_count, np.mean(pop.subproblem_values()), mse_pop, mse_pred, vsd(model))
    return LlaResult(model, pop, history)


def predictions(model: LinearModel, prefs: PreferenceSet | np.ndarray, problem: MopDefinition) -> np.ndarray:
    """Clamped model solutions at the given preference vectors."""
    W = prefs.members if isinstance(prefs, PreferenceSet) else np.asarray(prefs, dtype=float)
    return problem.clip(predict(model, W))


def metric_estimate(
    model: LinearModel,
    problem: MopDefinition,
    anchor,
    sigma2: float,
    gamma: float,
    K: int,
    z,
    rng: np.random.Generator,
) -> float:
    """Monte Carlo estimate of expected Chebyshev value plus ``gamma * vsd``."""
    if K < 1:
        raise ConfigurationError("K must be >= 1", key="K")
    lams = sample_preference_set(anchor, sigma2, K, rng).members
    F = problem.evaluate(problem.clip(predict(model, lams)))
    return float(np.mean(chebyshev(F, lams, z)) + gamma * vsd(model))
