"""
Commensurability checks and feasible parameter ranges
=====================================================

The uniform 4-element chain has golden-ratio eigenvalues and never
revives. Designed chains land on an integer grid. Free parameters of the
closed forms only give real couplings inside a bounded region.
"""

import numpy as np

from chainrevival import CouplingChain, design_a5_general, feasible_region_scan, is_commensurate

for chain in [CouplingChain([1, 1, 1]), CouplingChain([1, 0, 1]), design_a5_general(1, 2, 0.5**0.5, 2**0.5).chain]:
    ok, verdict = is_commensurate(chain, tol=1e-6)
    print(np.round(chain.couplings, 4), "->", ok, getattr(verdict, "labels", None))

# %%
for pt in feasible_region_scan("A4", (1, 3), {"s": np.arange(0, 2.75, 0.5)}):
    print(pt.params, pt.feasible, pt.reason)

# %%
grid = np.linspace(0.25, 2.0, 8)
pts = feasible_region_scan("A5_GENERAL", (1, 2), {"s": grid, "t": grid})
table = np.array([p.feasible for p in pts]).reshape(len(grid), len(grid))
print("A5 feasibility (rows s, cols t):")
for s, row in zip(grid, table):
    print(f"  s={s:4.2f} " + "".join("#" if f else "." for f in row))
