"""
Picking a nearly convergent subsequence
=======================================

Functions with bounded variation and bounded sup norm split into two
monotone parts.  Pigeonholing those parts point by point leaves members
that agree to within tau everywhere.
"""

import numpy as np

from compactkit import BVFunction, helly_select, jordan_decomposition, verify_selection

rng = np.random.default_rng(7)
x = np.linspace(0, 1, 8)
seq = [BVFunction.from_values(np.clip(s * x, 0, 1) - 0.3 * (x > t), spacing=1 / 8)
       for s, t in zip(rng.uniform(0.5, 2.0, 2000), rng.uniform(0, 1, 2000))]

u = seq[0]
v, w = jordan_decomposition(u)
print("TV(u) on the line:", round(u.tv, 4), " interior:", round(u.interior_variation, 4))
print("u == v - w:", np.allclose(v.values - w.values, u.values))

for tau in (1.0, 0.5, 0.25):
    sel = helly_select(seq, tau, 1.6)
    gap, l1 = verify_selection(seq, sel)
    print(f"tau = {tau}: kept {len(sel.indices):3d} of 2000, max gap {gap:.3f}, max L1 {l1:.3f}")
