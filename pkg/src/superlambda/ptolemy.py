"""Numeric super Ptolemy flips on a decorated triangulation.

With e directed tail -> head, theta is the face on the left and sigma the face
on the right. Sides: a = (tail, L), b = (L, head), c = (head, R),
d = (R, tail) where L / R are the left / right apexes. The flip gives

    e f = a c + b d + sqrt(abcd) sigma theta
    sigma' = (sigma sqrt(bd) - theta sqrt(ac)) / sqrt(ac + bd)
    theta' = (theta sqrt(bd) + sigma sqrt(ac)) / sqrt(ac + bd)

f points R -> L, theta' is the face (tail, L, R), sigma' is (head, L, R), and
the orientation of b is reversed.
"""

from dataclasses import dataclass

import numpy as np

from .grassmann import GrassmannNumber, gmul, ginv, gsqrt, relative_deviation
from .triangulation import (
    Triangulation, SpinStructure, arc_key, third_vertex, on_right, crossed_sequence,
    build_triangulation, TriangulationError,
)


class DecoratedState:
    """Triangulation, orientation of every arc (boundary arcs included, as sign
    flags), lambda-lengths per arc and mu-invariants per triangle."""

    __slots__ = ("t", "orient", "lam", "mu", "k")

    def __init__(self, t, orient, lam, mu):
        self.t = t
        self.orient = dict(orient)
        self.lam = dict(lam)
        self.mu = dict(mu)
        ks = {g.k for g in self.lam.values()} | {g.k for g in self.mu.values()}
        if len(ks) != 1:
            raise ValueError("all values must live in one Grassmann algebra")
        self.k = ks.pop()
        for e in t.arcs:
            if e not in self.lam:
                raise ValueError(f"missing lambda for arc {e}")
            if e not in self.orient:
                raise ValueError(f"missing orientation for arc {e}")
            g = self.lam[e]
            if not g.is_even or not g.body > 0:
                raise ValueError(f"lambda of {e} must be even with positive body")
        for tri in t.triangles:
            if tri not in self.mu:
                raise ValueError(f"missing mu for triangle {tri}")
            if not self.mu[tri].is_odd:
                raise ValueError(f"mu of {tri} must be odd")

    def copy(self):
        return DecoratedState(self.t, self.orient, self.lam, self.mu)

    @property
    def spin(self):
        return SpinStructure({d: self.orient[d] for d in self.t.diagonals})

    def boundary_sign(self, i):
        """+1 when boundary edge (i, i+1) points counterclockwise."""
        j = i % self.t.n + 1
        return 1 if self.orient[arc_key(i, j)] == (i, j) else -1

    def lam_of(self, u, v):
        return self.lam[arc_key(u, v)]

    def mu_of(self, tri):
        return self.mu[tuple(sorted(tri))]


def make_state(t, spin, lam, mu, boundary=None):
    """lam / mu: dicts keyed by arc / triangle, values floats or Grassmann.
    boundary: optional orientation for boundary arcs (default counterclockwise).
    Plain floats are promoted into the algebra of the first Grassmann value."""
    k = None
    for v in list(lam.values()) + list(mu.values()):
        if isinstance(v, GrassmannNumber):
            k = v.k
            break
    if k is None:
        k = 0
    orient = {}
    for i in range(1, t.n + 1):
        j = i % t.n + 1
        orient[arc_key(i, j)] = (i, j)
    if boundary:
        for e, th in dict(boundary).items():
            orient[arc_key(*e)] = tuple(th)
    for d in t.diagonals:
        orient[d] = spin[d]

    def lift(v):
        return v if isinstance(v, GrassmannNumber) else GrassmannNumber.scalar(k, v)

    return DecoratedState(t, orient,
                          {arc_key(*e): lift(v) for e, v in lam.items()},
                          {tuple(sorted(tr)): lift(v) for tr, v in mu.items()})


@dataclass
class FlipRecord:
    e: tuple
    f: tuple
    tail: int
    head: int
    left: int
    right: int
    sides: dict          # "a".."d" -> arc
    values: dict         # "a".."f" -> lambda values
    theta: GrassmannNumber
    sigma: GrassmannNumber
    theta_new: GrassmannNumber
    sigma_new: GrassmannNumber
    theta_tri: tuple     # face left of e (before)
    sigma_tri: tuple
    theta_new_tri: tuple
    sigma_new_tri: tuple


def quad_of(st, e):
    e = arc_key(*e)
    if e not in st.t.diagonals:
        raise TriangulationError(f"{e} is not an internal diagonal")
    tail, head = st.orient[e]
    t1, t2 = st.t.triangles_on(*e)
    p, q = third_vertex(t1, e), third_vertex(t2, e)
    right, left = (p, q) if on_right(st.t.n, tail, head, p) else (q, p)
    return tail, head, left, right


def flip_with_record(st, e):
    e = arc_key(*e)
    tail, head, left, right = quad_of(st, e)
    sides = {"a": arc_key(tail, left), "b": arc_key(left, head),
             "c": arc_key(head, right), "d": arc_key(right, tail)}
    A, B, C, D = (st.lam[sides[s]] for s in "abcd")
    E = st.lam[e]
    if not E.body > 0:
        raise ValueError("lambda of the flipped diagonal needs positive body")
    theta_tri = tuple(sorted((tail, head, left)))
    sigma_tri = tuple(sorted((tail, head, right)))
    th, sg = st.mu[theta_tri], st.mu[sigma_tri]
    ac, bd = gmul(A, C), gmul(B, D)
    F = gmul(ac + bd + gmul(gsqrt(gmul(ac, bd)), gmul(sg, th)), ginv(E))
    rac, rbd = gsqrt(ac), gsqrt(bd)
    rinv = ginv(gsqrt(ac + bd))
    th_new = gmul(gmul(th, rbd) + gmul(sg, rac), rinv)
    sg_new = gmul(gmul(sg, rbd) - gmul(th, rac), rinv)

    f = arc_key(left, right)
    t2 = Triangulation(st.t.n, (st.t.diagonals - {e}) | {f})
    orient = dict(st.orient)
    del orient[e]
    orient[f] = (right, left)
    bt, bh = orient[sides["b"]]
    orient[sides["b"]] = (bh, bt)
    lam = dict(st.lam)
    del lam[e]
    lam[f] = F
    mu = dict(st.mu)
    del mu[theta_tri], mu[sigma_tri]
    theta_new_tri = tuple(sorted((tail, left, right)))
    sigma_new_tri = tuple(sorted((head, left, right)))
    mu[theta_new_tri] = th_new
    mu[sigma_new_tri] = sg_new
    new = DecoratedState(t2, orient, lam, mu)
    rec = FlipRecord(e, f, tail, head, left, right, sides,
                     {"a": A, "b": B, "c": C, "d": D, "e": E, "f": F},
                     th, sg, th_new, sg_new, theta_tri, sigma_tri, theta_new_tri, sigma_new_tri)
    return new, rec


def flip(st, e):
    return flip_with_record(st, e)[0]


def flip_many(st, arcs):
    for e in arcs:
        st = flip(st, e)
    return st


def next_flip(t, a, b, strategy="first", rng=None):
    _, diags = crossed_sequence(t, a, b)
    if strategy == "first":
        return diags[0]
    if strategy == "last":
        return diags[-1]
    if strategy == "random":
        return diags[int(rng.integers(len(diags)))]
    raise ValueError(f"unknown strategy {strategy}")


def flip_sequence_lambda(t, s, a, b, initial, strategy="first", rng=None):
    """lambda_{ab} obtained by flipping until (a, b) is an arc. initial is a
    DecoratedState on t (its orientation is replaced by s on the diagonals
    when s is given). Default: always flip the crossing diagonal nearest a."""
    st = initial
    if s is not None:
        orient = dict(st.orient)
        for d in t.diagonals:
            orient[d] = s[d]
        st = DecoratedState(st.t, orient, st.lam, st.mu)
    while not st.t.is_arc(a, b):
        st = flip(st, next_flip(st.t, a, b, strategy, rng))
    return st.lam_of(a, b)


# random decorations

def random_state(t, rng, spin=None, k=None, mix=False, even_souls=False):
    """lambda bodies uniform in [0.5, 2]; mu of the i-th triangle is a random
    multiple of generator i (mix=True adds small multiples of the others and
    cubic terms). even_souls=True gives lambdas small nilpotent parts."""
    k = t.num_triangles if k is None else k
    if spin is None:
        spin = SpinStructure({d: (d if rng.random() < 0.5 else (d[1], d[0])) for d in t.diagonals})
    lam = {}
    for e in t.arcs:
        g = GrassmannNumber.scalar(k, rng.uniform(0.5, 2.0))
        if even_souls and k >= 2:
            for _ in range(2):
                i, j = sorted(rng.choice(np.arange(1, k + 1), 2, replace=False).tolist())
                g = g + gmul(GrassmannNumber.generator(k, i), GrassmannNumber.generator(k, j)) * rng.normal(0, 0.3)
        lam[e] = g
    mu = {}
    for idx, tri in enumerate(t.triangles):
        g = GrassmannNumber.generator(k, idx % k + 1) * (rng.uniform(0.5, 2.0) * rng.choice([-1, 1]))
        if mix:
            for j in range(1, k + 1):
                g = g + GrassmannNumber.generator(k, j) * rng.normal(0, 0.3)
            if k >= 3:
                i, j, l = sorted(rng.choice(np.arange(1, k + 1), 3, replace=False).tolist())
                g = g + gmul(gmul(GrassmannNumber.generator(k, i), GrassmannNumber.generator(k, j)),
                             GrassmannNumber.generator(k, l)) * rng.normal(0, 0.3)
        mu[tri] = g
    return make_state(t, spin, lam, mu)


# verifiers

def sigma_theta_deviation(rec):
    want = gmul(rec.sigma, rec.theta)
    got = gmul(rec.sigma_new, rec.theta_new)
    size = max(rec.sigma.max_abs(), rec.theta.max_abs(), rec.sigma_new.max_abs(), rec.theta_new.max_abs())
    return _dev(got, want, size * size)


def _dev(got, want, floor=0.0):
    scale = max(want.max_abs(), got.max_abs(), floor)
    if scale == 0.0:
        return 0.0
    return (got - want).max_abs() / scale


def verify_sigma_theta(st, e, tol=1e-10, corrupt=False):
    """sigma theta == sigma' theta' after flipping e. corrupt=True perturbs
    sigma' first (a negative control)."""
    _, rec = flip_with_record(st, e)
    if corrupt:
        rec.sigma_new = rec.sigma_new + rec.theta_new * 0.5 + rec.sigma * 0.25
    return sigma_theta_deviation(rec) <= tol


def rewritten_relation_deviation(rec):
    """theta' sqrt(ef) = theta sqrt(bd) + sigma sqrt(ac) and
    sigma' sqrt(ef) = sigma sqrt(bd) - theta sqrt(ac)."""
    v = rec.values
    ref = gsqrt(gmul(v["e"], v["f"]))
    rbd = gsqrt(gmul(v["b"], v["d"]))
    rac = gsqrt(gmul(v["a"], v["c"]))
    floor = max(rec.sigma.max_abs(), rec.theta.max_abs()) * max(ref.body, rbd.body, rac.body)
    d1 = _dev(gmul(rec.theta_new, ref), gmul(rec.theta, rbd) + gmul(rec.sigma, rac), floor)
    d2 = _dev(gmul(rec.sigma_new, ref), gmul(rec.sigma, rbd) - gmul(rec.theta, rac), floor)
    return max(d1, d2)


def verify_double_flip(st, e, corrupt=False):
    """Flip e twice. Returns (max lambda deviation, max mu deviation) where mu
    is compared against the start with the theta-side face negated.
    corrupt=True reverses the new arc's arrow before flipping back (a negative
    control)."""
    once, rec = flip_with_record(st, e)
    if corrupt:
        orient = dict(once.orient)
        orient[rec.f] = orient[rec.f][::-1]
        once = DecoratedState(once.t, orient, once.lam, once.mu)
    twice = flip(once, rec.f)
    lam_dev = max(relative_deviation(twice.lam[x], st.lam[x]) for x in st.t.arcs)
    # a face with mu = 0 is measured against the largest mu present
    floor = max(g.max_abs() for g in st.mu.values())
    mu_dev = 0.0
    for tri in st.t.triangles:
        want = -st.mu[tri] if tri == rec.theta_tri else st.mu[tri]
        mu_dev = max(mu_dev, _dev(twice.mu[tri], want, floor))
    if twice.t != st.t:
        raise AssertionError("double flip changed the triangulation")
    return lam_dev, mu_dev


# the pentagon: vertices 1..5 counterclockwise, sides a = (1,2), e = (2,3),
# d = (3,4), c = (4,5), b = (1,5); x1 = (1,3), x2 = (1,4) both pointing away
# from 1; theta1..3 are the faces (1,2,3), (1,3,4), (1,4,5).
PENTAGON_SIDES = {"a": (1, 2), "e": (2, 3), "d": (3, 4), "c": (4, 5), "b": (1, 5),
                  "x1": (1, 3), "x2": (1, 4)}
PENTAGON_FACES = {"theta1": (1, 2, 3), "theta2": (1, 3, 4), "theta3": (1, 4, 5)}
# x1, x2, x3, x4, x5 in turn
PENTAGON_FLIPS = [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]


def pentagon_state(values):
    """values: dict with a, b, c, d, e, x1, x2 (even) and theta1..3 (odd)."""
    t = build_triangulation(5, [(1, 3), (1, 4)])
    spin = SpinStructure.from_pairs([(1, 3), (1, 4)])
    lam = {PENTAGON_SIDES[s]: values[s] for s in PENTAGON_SIDES}
    mu = {PENTAGON_FACES[s]: values[s] for s in PENTAGON_FACES}
    return make_state(t, spin, lam, mu)


def random_pentagon_values(rng, k=3, mix=True):
    vals = {}
    for s in PENTAGON_SIDES:
        vals[s] = GrassmannNumber.scalar(k, rng.uniform(0.5, 2.0))
    for i, s in enumerate(PENTAGON_FACES):
        g = GrassmannNumber.generator(k, i % k + 1) * rng.uniform(0.5, 2.0)
        if mix:
            for j in range(1, k + 1):
                g = g + GrassmannNumber.generator(k, j) * rng.normal(0, 0.5)
        vals[s] = g
    return vals


def verify_pentagon(values, corrupt=False):
    """Run the five flips. Report the deviation of each closing identity:
    x6 = x1, x7 = x2, theta10 = theta1, theta12 = -theta2, theta13 = theta3,
    the third-flip value x5 = (bd + c x1)/x2 + b x1 th~2 th~3, and the final
    orientation (that of the start with the face (1,3,4) reversed).
    corrupt=True reverses the arrow on (2,4) before it is flipped (a negative
    control for the orientation bookkeeping)."""
    st = pentagon_state(values)
    if st.t.n != 5:
        raise ValueError("pentagon expected")
    v = values
    k = st.k

    def lift(x):
        return x if isinstance(x, GrassmannNumber) else GrassmannNumber.scalar(k, x)

    a, b, c, d, e, x1, x2 = (lift(v[s]) for s in ("a", "b", "c", "d", "e", "x1", "x2"))
    th2, th3 = lift(v["theta2"]), lift(v["theta3"])
    cur = st
    x5 = None
    for i, arc in enumerate(PENTAGON_FLIPS):
        if corrupt and arc == (2, 4):
            orient = dict(cur.orient)
            orient[arc] = orient[arc][::-1]
            cur = DecoratedState(cur.t, orient, cur.lam, cur.mu)
        cur, rec = flip_with_record(cur, arc)
        if i == 2:
            x5 = rec.values["f"]
    tt2 = gmul(gsqrt(gmul(d, ginv(gmul(x1, x2)))), th2)
    tt3 = gmul(gsqrt(gmul(c, ginv(gmul(b, x2)))), th3)
    x5_want = gmul(gmul(b, d) + gmul(c, x1), ginv(x2)) + gmul(gmul(b, x1), gmul(tt2, tt3))
    report = {
        "x6=x1": relative_deviation(cur.lam_of(1, 3), x1),
        "x7=x2": relative_deviation(cur.lam_of(1, 4), x2),
        "theta10=theta1": _dev(cur.mu_of((1, 2, 3)), lift(v["theta1"])),
        "theta12=-theta2": _dev(cur.mu_of((1, 3, 4)), -th2),
        "theta13=theta3": _dev(cur.mu_of((1, 4, 5)), th3),
        "x5": relative_deviation(x5, x5_want),
    }
    from .triangulation import reverse_triangle
    start = SpinStructure(st.orient)
    want, _ = reverse_triangle(start, (1, 3, 4))
    report["orientation"] = 0.0 if SpinStructure(cur.orient) == want else 1.0
    return report
