"""A super-frieze of width 2 built by flipping fans.

Run from the repository root:  python3 demos/frieze.py
"""

import numpy as np

from superlambda.grassmann import GrassmannNumber
from superlambda.frieze import frieze_from_fan, random_frieze_input, corrupt

# classical case: all odd entries zero gives a Conway-Coxeter frieze
zero = GrassmannNumber.zero(1)
f = frieze_from_fan([1.0, 1.0], [zero] * 3)
print("classical, width 2:")
print(f.render(digits=0))
print()

# random odd entries
rng = np.random.default_rng(1)
x, xi = random_frieze_input(2, rng)
f = frieze_from_fan(x, xi)
print("super-frieze, width 2 (bodies shown):")
print(f.render(digits=3))
print("diagonals:", f.num_diagonals)
print("failing diamonds:", f.failing_diamonds())
print("glide deviation:", f"{f.glide_deviation():.1e}")
print("worst diamond deviation:", f"{f.max_diamond_deviation():.1e}")

# a perturbed entry is caught by its neighbouring diamonds
bad = corrupt(f, 2, 2)
print("after corrupting diagonal 2 row 2:", bad.failing_diamonds())
