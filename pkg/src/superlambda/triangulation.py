"""Triangulated convex polygons, orientations of their diagonals, and the fan
structure an arc (a, b) induces on the triangles it crosses.

Vertices are labelled 1..N counterclockwise. For a directed chord u -> v the
vertices strictly counterclockwise-between u and v lie on its right.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache


class TriangulationError(ValueError):
    pass


class ExistingArcError(ValueError):
    """(a, b) is already an arc of the triangulation, nothing to decompose."""


def arc_key(u, v):
    return (u, v) if u < v else (v, u)


def strictly_between(n, a, b, c):
    """c lies strictly counterclockwise after a and before b."""
    return 0 < (c - a) % n < (b - a) % n


def is_boundary(n, u, v):
    return (u - v) % n in (1, n - 1)


def chords_cross(n, p, q):
    a, b = p
    c, d = q
    if len({a, b, c, d}) < 4:
        return False
    return strictly_between(n, a, b, c) != strictly_between(n, a, b, d)


def on_right(n, tail, head, x):
    return strictly_between(n, tail, head, x)


class Triangulation:
    """Immutable triangulation of the convex n-gon."""

    def __init__(self, n, diagonals):
        self.n = n
        self.diagonals = frozenset(arc_key(*d) for d in diagonals)
        boundary = [arc_key(i, i % n + 1) for i in range(1, n + 1)]
        self.arcs = boundary + sorted(self.diagonals)
        self.arc_index = {e: i for i, e in enumerate(self.arcs)}
        arcset = set(self.arcs)
        tris = []
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if (i, j) not in arcset:
                    continue
                for k in range(j + 1, n + 1):
                    if (i, k) in arcset and (j, k) in arcset:
                        tris.append((i, j, k))
        self.triangles = tris
        self.triangle_index = {t: i for i, t in enumerate(tris)}
        adj = {e: [] for e in self.arcs}
        for t in tris:
            for e in triangle_sides(t):
                adj[e].append(t)
        self._adj = adj

    def __eq__(self, other):
        return isinstance(other, Triangulation) and (self.n, self.diagonals) == (other.n, other.diagonals)

    def __hash__(self):
        return hash((self.n, self.diagonals))

    def __repr__(self):
        return f"Triangulation({self.n}, {sorted(self.diagonals)})"

    @property
    def num_arcs(self):
        return len(self.arcs)

    @property
    def num_triangles(self):
        return len(self.triangles)

    def is_arc(self, u, v):
        return arc_key(u, v) in self.arc_index

    def is_diagonal(self, u, v):
        return arc_key(u, v) in self.diagonals

    def variable(self, u, v):
        """1-based index of the lambda variable of arc (u, v)."""
        return self.arc_index[arc_key(u, v)] + 1

    def theta(self, tri):
        """1-based index of the odd generator of a triangle."""
        return self.triangle_index[tuple(sorted(tri))] + 1

    def triangles_on(self, u, v):
        return self._adj[arc_key(u, v)]

    def flip(self, u, v):
        e = arc_key(u, v)
        if e not in self.diagonals:
            raise TriangulationError(f"{e} is not a diagonal")
        t1, t2 = self._adj[e]
        p, q = third_vertex(t1, e), third_vertex(t2, e)
        return Triangulation(self.n, (self.diagonals - {e}) | {arc_key(p, q)})

    def to_json_obj(self, orientation=None):
        obj = {"n": self.n, "diagonals": [list(d) for d in sorted(self.diagonals)]}
        if orientation is not None:
            obj["orientation"] = [list(orientation[d]) for d in sorted(self.diagonals) if d in orientation]
        return obj


def triangle_sides(t):
    i, j, k = t
    return [arc_key(i, j), arc_key(j, k), arc_key(i, k)]


def third_vertex(t, e):
    (w,) = set(t) - set(e)
    return w


def build_triangulation(n, diagonals):
    if not isinstance(n, int) or n < 3:
        raise TriangulationError(f"a polygon needs at least 3 vertices, got {n}")
    seen = set()
    for d in diagonals:
        if len(d) != 2:
            raise TriangulationError(f"bad pair {d}")
        u, v = d
        if not (isinstance(u, int) and isinstance(v, int)) or not (1 <= u <= n and 1 <= v <= n):
            raise TriangulationError(f"vertex label out of range 1..{n} in {d}")
        if u == v or is_boundary(n, u, v):
            raise TriangulationError(f"degenerate diagonal {d}")
        e = arc_key(u, v)
        if e in seen:
            raise TriangulationError(f"repeated diagonal {d}")
        seen.add(e)
    if len(seen) != n - 3:
        raise TriangulationError(f"a triangulated {n}-gon has {n - 3} diagonals, got {len(seen)}")
    ds = sorted(seen)
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            if chords_cross(n, ds[i], ds[j]):
                raise TriangulationError(f"diagonals {ds[i]} and {ds[j]} cross")
    t = Triangulation(n, ds)
    assert t.num_triangles == n - 2
    return t


def fan_triangulation(n, center=1):
    ds = [arc_key(center, (center - 1 + s) % n + 1) for s in range(2, n - 1)]
    return build_triangulation(n, ds)


def zigzag_labels(n):
    """Zig-zag labels in counterclockwise corner order: 1, the evens
    ascending, then the odds descending. Triangles (i, i+1, i+2) are faces."""
    return [1] + list(range(2, n + 1, 2)) + [i for i in range(n, 1, -1) if i % 2 == 1]


def zigzag_triangulation(n):
    """Returns (triangulation, label map zig-zag label -> polygon vertex,
    orientation with (i, i+1) pointing i -> i+1)."""
    pos = {lab: p + 1 for p, lab in enumerate(zigzag_labels(n))}
    ds = [(pos[i], pos[i + 1]) for i in range(2, n - 1)]
    t = build_triangulation(n, ds)
    return t, pos, SpinStructure({arc_key(*d): d for d in ds})


def _polygon_triangulations(verts):
    if len(verts) < 3:
        yield frozenset()
        return
    a, b = verts[0], verts[-1]
    for k in range(1, len(verts) - 1):
        c = verts[k]
        here = set()
        if k > 1:
            here.add(arc_key(a, c))
        if k < len(verts) - 2:
            here.add(arc_key(c, b))
        for left in _polygon_triangulations(verts[: k + 1]):
            for right in _polygon_triangulations(verts[k:]):
                yield frozenset(here) | left | right


def enumerate_triangulations(n):
    for ds in _polygon_triangulations(list(range(1, n + 1))):
        yield Triangulation(n, ds)


@lru_cache(maxsize=None)
def catalan(m):
    if m <= 1:
        return 1
    return sum(catalan(i) * catalan(m - 1 - i) for i in range(m))


def random_triangulation(n, rng):
    """Uniform over the Catalan many triangulations. rng is a numpy Generator."""
    ds = set()
    stack = [list(range(1, n + 1))]
    while stack:
        verts = stack.pop()
        if len(verts) < 4:
            continue
        m = len(verts)
        w = [catalan(k - 1) * catalan(m - k - 2) for k in range(1, m - 1)]
        tot = sum(w)
        k = 1 + int(rng.choice(len(w), p=[x / tot for x in w]))
        a, b, c = verts[0], verts[-1], verts[k]
        if k > 1:
            ds.add(arc_key(a, c))
        if k < m - 2:
            ds.add(arc_key(c, b))
        stack.append(verts[: k + 1])
        stack.append(verts[k:])
    return build_triangulation(n, sorted(ds))


class SpinStructure:
    """Orientation (tail, head) of a set of arcs, keyed by sorted arc."""

    def __init__(self, orientation):
        self._o = {}
        for key, th in dict(orientation).items():
            tail, head = th
            if arc_key(tail, head) != arc_key(*key):
                raise TriangulationError(f"orientation {th} does not match arc {key}")
            self._o[arc_key(*key)] = (tail, head)

    @classmethod
    def from_pairs(cls, pairs):
        return cls({arc_key(*p): tuple(p) for p in pairs})

    def __getitem__(self, e):
        return self._o[arc_key(*e)]

    def __contains__(self, e):
        return arc_key(*e) in self._o

    def __iter__(self):
        return iter(sorted(self._o))

    def __len__(self):
        return len(self._o)

    def items(self):
        return sorted(self._o.items())

    def __eq__(self, other):
        return isinstance(other, SpinStructure) and self._o == other._o

    def __hash__(self):
        return hash(frozenset(self._o.items()))

    def __repr__(self):
        return "SpinStructure(" + ", ".join(f"{t}->{h}" for _, (t, h) in self.items()) + ")"

    def reversed_arc(self, e):
        o = dict(self._o)
        t, h = o[arc_key(*e)]
        o[arc_key(*e)] = (h, t)
        return SpinStructure(o)

    def restricted(self, arcs):
        return SpinStructure({e: self._o[arc_key(*e)] for e in arcs if arc_key(*e) in self._o})

    def updated(self, other):
        o = dict(self._o)
        for e, th in other.items():
            o[e] = th
        return SpinStructure(o)

    def as_pairs(self):
        return [list(th) for _, th in self.items()]


def check_spin(t, s):
    for d in t.diagonals:
        if d not in s:
            raise TriangulationError(f"diagonal {d} has no orientation")


def random_spin(t, rng):
    o = {}
    for d in sorted(t.diagonals):
        o[d] = d if rng.random() < 0.5 else (d[1], d[0])
    return SpinStructure(o)


def reverse_triangle(s, tri):
    """Reverse every oriented side of tri (sides without an orientation, such as
    boundary edges, are ignored). The caller must negate the triangle's
    mu-invariant; the set of such triangles is returned alongside."""
    o = dict((e, th) for e, th in s.items())
    for e in triangle_sides(tuple(sorted(tri))):
        if e in o:
            tail, head = o[e]
            o[e] = (head, tail)
    return SpinStructure(o), frozenset({tuple(sorted(tri))})


# fan decomposition

@dataclass(frozen=True)
class FanDecomposition:
    n: int
    a: int
    b: int
    triangles: tuple      # theta_1..theta_m, ordered from a to b
    diagonals: tuple      # d_1..d_{m-1}; d_k separates theta_k and theta_{k+1}
    centers: tuple        # c_1..c_N
    fan_of: tuple         # fan number (1-based) of each triangle
    fans: tuple = field(init=False)

    def __post_init__(self):
        fans = []
        for i, c in enumerate(self.centers, start=1):
            fans.append((c, tuple(k + 1 for k, f in enumerate(self.fan_of) if f == i)))
        object.__setattr__(self, "fans", tuple(fans))

    @property
    def m(self):
        return len(self.triangles)

    @property
    def N(self):
        return len(self.centers)

    def center_of(self, i):
        """Fan center of theta_i (1-based)."""
        return self.centers[self.fan_of[i - 1] - 1]

    def vertices(self):
        vs = set()
        for t in self.triangles:
            vs.update(t)
        return sorted(vs)

    def arcs(self):
        es = set()
        for t in self.triangles:
            es.update(triangle_sides(t))
        return sorted(es)


def crossed_sequence(t, a, b):
    """Triangles and diagonals crossed by (a, b), in order from a."""
    n = t.n
    if a == b or not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"bad arc ({a}, {b})")
    if t.is_arc(a, b):
        raise ExistingArcError(f"({a}, {b}) is already an arc of the triangulation")
    start = None
    for tri in t.triangles:
        if a in tri:
            e = arc_key(*(set(tri) - {a}))
            if chords_cross(n, e, (a, b)):
                start = (tri, e)
                break
    tri, e = start
    tris, diags = [tri], []
    while True:
        diags.append(e)
        t1, t2 = t.triangles_on(*e)
        nxt = t2 if t1 == tri else t1
        tris.append(nxt)
        w = third_vertex(nxt, e)
        if w == b:
            break
        u, v = e
        e = arc_key(u, w) if chords_cross(n, arc_key(u, w), (a, b)) else arc_key(v, w)
        tri = nxt
    return tris, diags


def fan_decompose(t, a, b, orientation=None, split_ends=False):
    """Fan centers of (a, b).

    Pivots v_k = d_k & d_{k+1}; maximal runs of equal pivots are the fans. The
    first triangle joins F_1 and the last joins F_N. A quadrilateral is one fan
    whose center is the tail of its diagonal (from orientation when given,
    otherwise the endpoint on the right of a -> b). split_ends=True makes the
    first and last triangles fans of their own, centered at the far endpoint
    of d_1 and d_{m-1}; the zig-zag statements use that convention.
    """
    tris, diags = crossed_sequence(t, a, b)
    n, m = t.n, len(tris)
    if m == 2:
        d = diags[0]
        if orientation is not None and d in orientation:
            tail = orientation[d][0]
        else:
            tail = d[0] if strictly_between(n, a, b, d[0]) else d[1]
        if split_ends:
            head = d[1] if d[0] == tail else d[0]
            return FanDecomposition(n, a, b, tuple(tris), tuple(diags), (tail, head), (1, 2))
        return FanDecomposition(n, a, b, tuple(tris), tuple(diags), (tail,), (1, 1))
    pivots = [(set(diags[k]) & set(diags[k + 1])).pop() for k in range(m - 2)]
    centers, run_of = [], []
    for v in pivots:
        if not centers or centers[-1] != v:
            centers.append(v)
        run_of.append(len(centers))
    fan_of = [1] + run_of + [len(centers)]
    if split_ends:
        first = (set(diags[0]) - {pivots[0]}).pop()
        last = (set(diags[-1]) - {pivots[-1]}).pop()
        centers = [first] + centers + [last]
        fan_of = [1] + [f + 1 for f in run_of] + [len(centers)]
    return FanDecomposition(n, a, b, tuple(tris), tuple(diags), tuple(centers), tuple(fan_of))


def restrict_to_crossed(t, a, b):
    """Sub-polygon made of the triangles (a, b) crosses, relabelled 1..M
    counterclockwise (keeping the cyclic order). Returns (sub, label_map)
    with label_map[new] = old, or None when (a, b) is already an arc."""
    if t.is_arc(a, b):
        return None
    tris, diags = crossed_sequence(t, a, b)
    vs = set()
    for tri in tris:
        vs.update(tri)
    old = sorted(vs)
    new_of = {v: i + 1 for i, v in enumerate(old)}
    sub = build_triangulation(len(old), [(new_of[u], new_of[v]) for u, v in diags])
    return sub, {i + 1: v for i, v in enumerate(old)}


def default_orientation(f):
    """Diagonals inside a fan point away from its center; the diagonal
    between F_i and F_{i+1} points c_i -> c_{i+1}."""
    o = {}
    for k, d in enumerate(f.diagonals, start=1):
        fi, fj = f.fan_of[k - 1], f.fan_of[k]
        if fi != fj:
            ci, cj = f.centers[fi - 1], f.centers[fj - 1]
            assert arc_key(ci, cj) == d
            o[d] = (ci, cj)
        else:
            c = f.centers[fi - 1]
            assert c in d
            o[d] = (c, d[1] if d[0] == c else d[0])
    return SpinStructure(o)


def theta_on_right(f, s, k):
    """Is theta_k on the right of the oriented diagonal d_k?"""
    d = f.diagonals[k - 1]
    tail, head = s[d]
    return on_right(f.n, tail, head, third_vertex(f.triangles[k - 1], d))


def positive_ordering(f, s):
    """Triangle indices 1..m from greatest to least, built triangle by
    triangle from the last one back."""
    order = [f.m]
    for k in range(f.m - 1, 0, -1):
        if theta_on_right(f, s, k):
            order.insert(0, k)
        else:
            order.append(k)
    return tuple(order)


def ordering_rank(order):
    """rank[i] = position of theta_i in the order (0 = greatest)."""
    rank = [0] * len(order)
    for p, i in enumerate(order):
        rank[i - 1] = p
    return rank


def normalize_to_default(s, f, rule="a"):
    """Bring s to the default orientation with triangle reversals.

    rule "a": to fix d_k reverse theta_1..theta_k (so theta_i is negated for
    every i <= k). rule "b": reverse theta_{k+1}..theta_m instead. Only the
    crossed diagonals are touched. Returns (orientation, eps) where eps[i-1]
    is the sign theta_i picks up.
    """
    if rule not in ("a", "b"):
        raise ValueError("rule must be 'a' or 'b'")
    target = default_orientation(f)
    cur = s.restricted(f.diagonals)
    eps = [1] * f.m
    ks = range(f.m - 1, 0, -1) if rule == "a" else range(1, f.m)
    for k in ks:
        d = f.diagonals[k - 1]
        if cur[d] == target[d]:
            continue
        block = range(1, k + 1) if rule == "a" else range(k + 1, f.m + 1)
        for i in block:
            cur, _ = reverse_triangle(cur, f.triangles[i - 1])
            eps[i - 1] = -eps[i - 1]
    assert cur == target
    return cur, tuple(eps)


# JSON documents

def triangulation_from_json_obj(obj):
    if not isinstance(obj, dict) or "n" not in obj or "diagonals" not in obj:
        raise TriangulationError("triangulation document needs 'n' and 'diagonals'")
    t = build_triangulation(obj["n"], [tuple(d) for d in obj["diagonals"]])
    s = None
    if obj.get("orientation") is not None:
        s = SpinStructure.from_pairs([tuple(p) for p in obj["orientation"]])
        for e in s:
            if e not in t.diagonals:
                raise TriangulationError(f"orientation given for non-diagonal {e}")
    return t, s


def triangulation_from_json(text):
    return triangulation_from_json_obj(json.loads(text))


def triangulation_to_json(t, orientation=None):
    return json.dumps(t.to_json_obj(orientation))
