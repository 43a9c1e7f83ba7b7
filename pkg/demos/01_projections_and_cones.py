# -*- coding: utf-8 -*-
"""Cone projections: the PSD projector and entrywise pattern cones.

Shows the nearest-PSD projection, a mixed Zero/NonNeg/Free pattern, its
dual, and the Moreau decomposition that ties a cone and its dual
together.
"""

import numpy as np

from cadmm.cones import FREE, NONNEG, ZERO, ConePattern, project_pattern, \
    project_pattern_dual
from cadmm.linalg import project_psd

rng = np.random.default_rng(0)

print("== nearest positive semidefinite matrix ==")
m = np.array([[2.0, -1.5], [-1.5, -1.0]])
p = project_psd(m)
print("input:\n", m)
print("projection:\n", np.round(p, 6))
print("eigenvalues after projection:", np.round(np.linalg.eigvalsh(p), 9))

print("\n== entrywise pattern cone ==")
pattern = ConePattern.from_entries(3, NONNEG, {(0, 1): ZERO, (1, 2): FREE})
x = rng.standard_normal((3, 3))
x = 0.5 * (x + x.T)
print("kinds (0=Zero, 1=NonNeg, 2=Free):\n", pattern.kinds)
print("point:\n", np.round(x, 3))
print("projection onto the cone:\n", np.round(project_pattern(x, pattern), 3))
print("projection onto the dual cone:\n",
      np.round(project_pattern_dual(x, pattern), 3))

print("\n== Moreau decomposition x = P_K(x) - P_K*(-x) ==")
recon = project_pattern(x, pattern) - project_pattern_dual(-x, pattern)
print("reconstruction error:", np.linalg.norm(x - recon))
recon_psd = project_psd(x) - project_psd(-x)
print("same identity on the PSD cone:", np.linalg.norm(x - recon_psd))
