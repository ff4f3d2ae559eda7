"""Super Ptolemy flips: one quadrilateral, the double flip and the pentagon.

Run from the repository root:  python3 demos/flips.py
"""

import numpy as np

from superlambda.grassmann import GrassmannNumber, format_grassmann
from superlambda.triangulation import build_triangulation, SpinStructure
from superlambda.ptolemy import (
    make_state, flip_with_record, verify_double_flip, verify_sigma_theta, verify_pentagon,
    random_pentagon_values,
)

# quadrilateral 1..4, diagonal 1 -> 3, two odd generators
t = build_triangulation(4, [(1, 3)])
th = GrassmannNumber.generator(2, 1)
sg = GrassmannNumber.generator(2, 2)
lam = {(1, 2): 1.0, (2, 3): 2.0, (3, 4): 1.5, (1, 4): 0.5, (1, 3): 1.2}
st = make_state(t, SpinStructure.from_pairs([(1, 3)]), lam, {(1, 3, 4): th, (1, 2, 3): sg})

new, rec = flip_with_record(st, (1, 3))
print("flip (1,3) -> (2,4)")
print("  sides:", rec.sides)
print("  lambda(2,4) =", format_grassmann(new.lam_of(2, 4)))
print("  new orientation of (2,4):", new.orient[(2, 4)])
print("  mu on", rec.theta_new_tri, "=", format_grassmann(rec.theta_new))
print("  mu on", rec.sigma_new_tri, "=", format_grassmann(rec.sigma_new))

# flipping back restores lambda and negates the mu on one side
print("double flip deviations (lambda, mu):", verify_double_flip(st, (1, 3)))
print("sigma*theta unchanged:", verify_sigma_theta(st, (1, 3)))
print("same check with a corrupted flip:", verify_sigma_theta(st, (1, 3), corrupt=True))
print()

# five flips around a pentagon come back to the start
rng = np.random.default_rng(0)
rep = verify_pentagon(random_pentagon_values(rng))
for key, dev in rep.items():
    print(f"  {key:16s} {dev:.1e}")
print("with the arrow on (2,4) reversed mid-way:")
rep = verify_pentagon(random_pentagon_values(rng), corrupt=True)
print("  worst deviation", f"{max(rep.values()):.2f}")
