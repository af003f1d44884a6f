"""Benchmark problems and their analytic Chebyshev optima.

Every problem is a ``MopDefinition`` with box bounds and a vectorised
``evaluate``.  For the ZDT family, MOZDT1 and DTLZ1-3 the minimiser of
each Chebyshev sub-problem is known in closed form (up to a 1-D root
find), which is what the error curves and MSE columns are measured
against.
"""

import numpy as np

from moeadlla.problems import PROBLEM_NAMES, make_problem, true_front_samples, true_subproblem_optimum, utopian_point
from moeadlla.scalarize import chebyshev

for name in PROBLEM_NAMES:
    p = make_problem(name)
    print(f"{name:7s} n={p.n:2d} m={p.m}  bounds x1 in [{p.lower[0]:g}, {p.upper[0]:g}]")

zdt1 = make_problem("ZDT1", 10)
lam = np.array([0.5, 0.5])
z = utopian_point(zdt1)
x = true_subproblem_optimum(zdt1, lam, z)
print("\nZDT1 optimum for equal weights:", np.round(x[:3], 6), "... (tail is all zeros)")
print("objective vector:", zdt1.evaluate(x))

# the optimum beats every point of a dense front sample
front = true_front_samples(zdt1, 10_001)
print("g at optimum   :", float(chebyshev(zdt1.evaluate(x), lam, z)))
print("best g on front:", float(chebyshev(front, lam, z).min()))

# MOZDT1 moves the optimum of x2, x3 and the tail with x1, so nothing is shared
moz = make_problem("MOZDT1", 10)
for w in (0.3, 0.5, 0.7):
    xs = true_subproblem_optimum(moz, [w, 1 - w], utopian_point(moz))
    print(f"MOZDT1 lambda1={w}: x[:4] = {np.round(xs[:4], 4)}")
