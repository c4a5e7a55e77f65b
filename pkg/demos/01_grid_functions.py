"""
Step functions on a uniform grid
================================

Every member of a family is constant on the cells of one grid, so L^p norms,
shifts and dilations are exact finite sums.
"""

import numpy as np

from compactkit import GridFunction, lp_norm, rescale, shift

# a hat on [-1, 1) sampled at cell centers
h = 0.25
x = -1 + h * (np.arange(8) + 0.5)
f = GridFunction.from_values(1 - np.abs(x), spacing=h, origin=[-1.0])
print("values:", f.values)

for p in (1, 2, np.inf):
    print(f"||f||_{p} = {lp_norm(f, p):.6f}")

# translation by whole cells; values shifted past the edge are dropped
print("shift by 2 cells:", shift(f, [2]).values)

# dilation by an integer factor scales the norm by lam^(n/p)
for lam in (1, 2, 3):
    print(f"lam = {lam}: ||f^lam||_2 / ||f||_2 = {lp_norm(rescale(f, lam), 2) / lp_norm(f, 2):.6f}"
          f"  (sqrt(lam) = {np.sqrt(lam):.6f})")
