"""Preference vectors around an anchor.

A preference set is drawn as ``anchor + Gaussian noise`` and projected
back onto the probability simplex, so every member is a valid weight
vector and the set concentrates around the region the user cares about.
"""

import numpy as np

from moeadlla.preference import parse_preference, project_to_simplex, sample_preference_set

print("projection of [1.2, 0.4]   ->", project_to_simplex([1.2, 0.4]))
print("projection of [-1, -1]     ->", project_to_simplex([-1.0, -1.0]))
print("projection of [3, 0, -2]   ->", project_to_simplex([3.0, 0.0, -2.0]))

anchor = parse_preference("0.3, 0.7")
prefs = sample_preference_set(anchor, sigma2=0.02, size=100, rng=np.random.default_rng(0))
W = prefs.members
print("\n100 samples around", anchor)
print("  rows sum to one :", np.allclose(W.sum(axis=1), 1.0))
print("  mean            :", W.mean(axis=0).round(3))
print("  lambda1 range   :", W[:, 0].min().round(3), "to", W[:, 0].max().round(3))

tri = sample_preference_set([1 / 3] * 3, 0.02, 5, np.random.default_rng(1))
print("\nthree-objective members:\n", tri.members.round(3))
