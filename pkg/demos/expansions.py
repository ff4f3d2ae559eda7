"""Lambda-length expansions on two hexagons.

Run from the repository root:  python3 demos/expansions.py
"""

from superlambda.cli import format_terms
from superlambda.triangulation import (
    fan_triangulation, build_triangulation, fan_decompose, normalize_to_default, SpinStructure,
)
from superlambda.tpaths import build_auxiliary, enumerate_paths, expand_lambda, ordered_tilde_terms

# the fan at vertex 1, arc (2,6), default orientation
t = fan_triangulation(6)
p = expand_lambda(t, None, 2, 6)
print("fan hexagon, arc (2,6):", len(p), "terms")
print(p.render())
print()

# each term is one path in the auxiliary graph
g = build_auxiliary(t, fan_decompose(t, 2, 6))
for path in enumerate_paths(g):
    print("  ", "ordinary" if path.is_ordinary else "super   ", path.render(t))
print()

# diagonals (2,6), (3,6), (3,5) with a non-default orientation
t = build_triangulation(6, [(2, 6), (3, 6), (3, 5)])
s = SpinStructure.from_pairs([(6, 2), (6, 3), (5, 3)])
rows = ordered_tilde_terms(t, s, 1, 4)
print("second hexagon, arc (1,4), rescaled thetas:")
print(format_terms(rows, "θ̃"))
print("negative terms:", sum(1 for c, _, _ in rows if c < 0))

# reversing triangles brings the orientation to the default one
dflt, eps = normalize_to_default(s, fan_decompose(t, 1, 4), rule="b")
print("theta signs picked up:", eps)
rows = ordered_tilde_terms(t, dflt, 1, 4)
print(format_terms(rows, "θ̃"))
print("negative terms:", sum(1 for c, _, _ in rows if c < 0))
