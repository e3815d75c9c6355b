"""
Reduced arrays and an equal 1x4 splitter
========================================

With n3 >> n1 >> n2 the 7-element design has a3 >> a2 >> a1. Light
launched at an edge stays in the four outer guides, and at suitable
lengths it is shared equally between them.
"""

import math

import numpy as np

from chainrevival import basis_state, best_split_length, design_a7, revival_check, sample_trajectory

res = design_a7(100, 1, 10000)
print("couplings:", np.round(res.chain.couplings, 4))
period = revival_check(res.chain).period
traj = sample_trajectory(res.chain, basis_state(7, 0), period, 8192)
inner = traj.intensities[:, 2:5].sum(axis=1)
print(f"T = {period / math.pi:g} pi; max power in the 3 inner guides: {inner.max():.2e}")

# %%
split = best_split_length(res.chain, basis_state(7, 0), [0, 1, 5, 6], period, 40001)
print(f"most even 1x4 split at z = {split.z / math.pi:.4f} pi")
print("powers:", np.round(split.intensities, 5))
