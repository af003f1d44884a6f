"""Preference-aware quality indicators.

R-IGD and R-HV score only the part of a solution set that lies in the
region of interest: points are filtered to the nondominated set, trimmed
to a cube around the pivot closest to the anchor direction and shifted
along the anchor line before plain IGD or hypervolume is applied.
"""

import numpy as np

from moeadlla.metrics import RMetricSetup, hypervolume, igd, r_metric_transfer
from moeadlla.problems import make_problem, true_front_samples

print("HV of {(0.25, 0.75), (0.75, 0.25)} w.r.t. (1, 1):", hypervolume(np.array([[0.25, 0.75], [0.75, 0.25]]), np.ones(2)))
print("IGD of the same set to a 3-point front:", igd(np.array([[0.25, 0.75], [0.75, 0.25]]), np.array([[0, 1], [0.5, 0.5], [1, 0]])))

pts = np.array([[0.2, 0.9], [0.4, 0.5], [0.6, 0.35], [0.9, 0.1], [0.7, 0.7]])
print("\ntransferred points:\n", r_metric_transfer(pts, [0.5, 0.5], 0.3, np.zeros(2), np.ones(2)))

problem = make_problem("ZDT1")
setup = RMetricSetup.for_problem(problem, [0.5, 0.5], sigma2=0.02)
front = true_front_samples(problem, 2001)
near = front[np.abs(front[:, 0] - 0.38) < 0.1]
far = front[front[:, 0] > 0.8]
for label, S in (("points near the anchor direction", near), ("points far from it", far), ("shifted-up copy", near + 0.05)):
    print(f"{label:34s} R-IGD {setup.r_igd(S):.4f}  R-HV {setup.r_hv(S):.4f}")
print("R-HV reference point:", setup.ref_point)
