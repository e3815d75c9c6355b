"""
An asymmetric 4-guide array and its separations
===============================================

Build the non-mirror 4-element chain with spectrum {+-1, +-3}, then turn
its couplings into inter-guide distances with an exponential coupling
model. The separation ratios do not depend on the coupling amplitude C0.
"""

import math

import numpy as np

from chainrevival import (
    CouplingModel,
    calibrate_model,
    design_a4,
    is_mirror_symmetric,
    revival_check,
    separations_from_couplings,
)
from chainrevival.geometry import fit_decay_to_ratios

res = design_a4(1, 3, s=math.sqrt(3), eps1=1, eps2=-1)
print("couplings:", np.round(res.chain.couplings, 6))
print("mirror symmetric:", is_mirror_symmetric(res.chain).is_mirror)
print("revival period / pi:", revival_check(res.chain).period / math.pi)

# %%
# Which decay constant reproduces L23 = 0.977 L12 and L34 = 0.954 L12?
x = fit_decay_to_ratios(res.chain, [1.0, 0.977, 0.954])
print(f"kappa * L12 = {x:.4f}")

# With L12 = 18 um (about 2.2 guide diameters of 8.2 um):
l12 = 18.0
model = CouplingModel(C0=res.chain.couplings[0], kappa=x / l12, d_ref=l12)
layout = separations_from_couplings(res.chain, model)
print("separations [um]:", np.round(layout.separations, 3), "ratios:", np.round(layout.ratios(), 4))

# %%
# In practice (C0, kappa) come from measured or mode-solved pairs.
d = np.array([16.0, 18.0, 20.0, 22.0])
a = model.coupling(d) * (1 + 0.01 * np.random.default_rng(0).normal(size=d.size))
cal = calibrate_model(list(zip(d, a)))
print(f"calibrated kappa {cal.model.kappa:.4f} /um (true {model.kappa:.4f}), rms log residual {cal.rms:.1e}")
