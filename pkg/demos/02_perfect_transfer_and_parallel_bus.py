"""
Perfect transfer and a parallel data bus
========================================

A 7-element mirror chain with equidistant spectrum moves amplitude from
the first to the last guide. Any commensurate chain, including one with
Fibonacci eigenvalues, restores every input state after one period.
"""

import math

import numpy as np

from chainrevival import (
    InfeasibleParameters,
    basis_state,
    design_a7,
    design_m5,
    perfect_transfer_check,
    propagate,
    revival_check,
)

spin = design_a7(2, 1, 3)
print("equidistant A7 couplings^2:", np.round(np.square(spin.chain.couplings), 6))
verdict = perfect_transfer_check(spin.chain)
print(f"perfect transfer: {verdict.is_perfect}, L0 = {verdict.transfer_length / math.pi:g} pi")
print("|psi(L0)|^2:", np.round(np.abs(propagate(spin.chain, basis_state(7, 0), verdict.transfer_length)) ** 2, 12))

# %%
# Gap parity decides transfer in 5-element mirror arrays.
for n1, n2 in [(2, 3), (3, 4), (1, 4), (1, 3)]:
    v = perfect_transfer_check(design_m5(n1, n2).chain)
    print(f"M5({n1},{n2}): perfect={v.is_perfect}  {v.reason}")

# %%
# Fibonacci labels: only the ordering with n1^2 < n2^2 + n3^2 and a
# non-negative a2^2 is realisable.
for labels in [(13, 5, 8), (3, 8, 5), (8, 5, 13)]:
    try:
        fib = design_a7(*labels)
    except InfeasibleParameters as exc:
        print(f"{labels}: infeasible ({exc})")
        continue
    rep = revival_check(fib.chain)
    print(f"{labels}: couplings^2 {np.round(np.square(fib.chain.couplings[:3]), 4)}, "
          f"T = {rep.period / math.pi:g} pi, bus deficit {rep.deficit:.1e}")
