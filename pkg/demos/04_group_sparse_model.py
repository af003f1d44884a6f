"""Group-sparse linear model of decision vectors against preferences.

``fit`` minimises the squared error plus ``gamma`` times the sum of row
norms of ``A``.  A whole row is zero exactly when that decision variable
is constant over the modelled region, i.e. shared by all solutions.  As
gamma grows, more rows vanish, one variable at a time.
"""

import numpy as np

from moeadlla.linmodel import RegressionDataset, fit, row_norms, shared_rows, vsd, zero_threshold
from moeadlla.preference import sample_preference_set

rng = np.random.default_rng(5)
anchor = np.array([0.5, 0.5])
lams = sample_preference_set(anchor, 0.02, 50, rng).members
d = lams[:, 0] - anchor[0]

# three variables follow the preference with different slopes, two are constant
X = np.column_stack([0.4 + 1.5 * d, 0.2 - 0.3 * d, 0.1 * d + 0.5, np.full(50, 0.3), np.zeros(50)])
X += 1e-3 * rng.normal(size=X.shape)
data = RegressionDataset(lams, X, anchor)

print("gamma at which each row switches off:", zero_threshold(data).round(4))
for gamma in (1e-5, 1e-3, 1e-2, 5e-2, 1.0):
    model = fit(data, gamma)
    print(f"gamma={gamma:<7g} row norms {row_norms(model).round(4)}  shared={shared_rows(model).tolist()}  vsd={vsd(model):.4f}")
