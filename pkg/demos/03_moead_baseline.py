"""Plain MOEA/D-DE on a preference region.

Each sub-problem keeps one incumbent; children come from DE/rand/1 with
polynomial mutation, mostly mating inside the neighbourhood, and may
replace at most two neighbours.  ``compensate=True`` doubles the
generations so the evaluation budget matches an LLA run.
"""

import numpy as np

from moeadlla.moead import MoeadConfig, population_mse, run_moead_de
from moeadlla.preference import sample_preference_set
from moeadlla.problems import make_problem

problem = make_problem("ZDT1", 10)
rng = np.random.default_rng(3)
prefs = sample_preference_set([0.5, 0.5], 0.02, 40, rng)
pop, history = run_moead_de(problem, prefs, 100, MoeadConfig(neighborhood_size=10), rng, track_error=True)

print("evaluations:", pop.eval_count)
for g in (1, 10, 50, 100):
    k = g - 1
    print(f"generation {g:3d}: mean g = {history.mean_g[k]:.4f}  MSE to optima = {history.mse_pop[k]:.3e}")
print("final population MSE:", population_mse(pop, problem))
print("reference point     :", pop.z)
