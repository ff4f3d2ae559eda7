"""Super T-paths and the lambda-length / mu-invariant expansions built on them.

Crossing positions along (a, b) are stored doubled so they stay integers:
diagonal d_k sits at 2k and the sigma-edge of theta_i at 2i - 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from .superring import SuperPolynomial, sort_sign
from .triangulation import (
    triangle_sides, fan_decompose, default_orientation, positive_ordering,
    ordering_rank, fan_triangulation, zigzag_triangulation,
)

ARC, SIGMA, TAU = 0, 1, 2


@dataclass(frozen=True)
class AuxiliaryGraph:
    t: object            # the full triangulation (variables are its arcs)
    f: object            # fan decomposition of (a, b)
    adj: dict            # polygon vertex -> arcs of the crossed triangles at it
    pos: dict            # crossing arc -> doubled crossing position
    sigma_at: dict       # polygon vertex -> theta indices whose sigma-edge ends there

    @property
    def a(self):
        return self.f.a

    @property
    def b(self):
        return self.f.b

    @property
    def m(self):
        return self.f.m

    def tau_edges(self):
        return [(i, j) for i in range(1, self.m + 1) for j in range(i + 1, self.m + 1)]


def build_auxiliary(t, f):
    arcs = f.arcs()
    adj = {}
    for e in arcs:
        adj.setdefault(e[0], []).append(e)
        adj.setdefault(e[1], []).append(e)
    pos = {d: 2 * k for k, d in enumerate(f.diagonals, start=1)}
    sigma_at = {}
    for i in range(1, f.m + 1):
        sigma_at.setdefault(f.center_of(i), []).append(i)
    return AuxiliaryGraph(t, f, adj, pos, sigma_at)


@dataclass(frozen=True)
class SuperTPath:
    """vertices: polygon labels, with theta_i written as -i.
    edges: (ARC, u, v) | (SIGMA, i) | (TAU, i, j)."""
    vertices: tuple
    edges: tuple

    @property
    def is_ordinary(self):
        return all(e[0] == ARC for e in self.edges)

    def super_steps(self):
        return [(e[1], e[2]) for e in self.edges if e[0] == TAU]

    def render(self, t=None, var_names=None):
        vs = ",".join(f"θ{-v}" if v < 0 else str(v) for v in self.vertices)
        es = []
        for e in self.edges:
            if e[0] == ARC:
                if t is None:
                    es.append(f"({e[1]},{e[2]})")
                else:
                    v = t.variable(e[1], e[2])
                    es.append(var_names[v - 1] if var_names else f"x{v}")
            elif e[0] == SIGMA:
                es.append(f"σ{e[1]}")
            else:
                es.append(f"τ{e[1]}{e[2]}" if max(e[1], e[2]) < 10 else f"τ{e[1]},{e[2]}")
        return f"({vs} | {','.join(es)})"

    def to_json_obj(self, t=None):
        edges = []
        for e in self.edges:
            if e[0] == ARC:
                d = {"type": "arc", "arc": [e[1], e[2]]}
                if t is not None:
                    d["variable"] = t.variable(e[1], e[2])
                edges.append(d)
            elif e[0] == SIGMA:
                edges.append({"type": "sigma", "theta": e[1]})
            else:
                edges.append({"type": "tau", "thetas": [e[1], e[2]]})
        return {"vertices": [v if v > 0 else f"θ{-v}" for v in self.vertices], "edges": edges}


def _path_key(p):
    return (0 if p.is_ordinary else 1, len(p.edges), p.edges)


def enumerate_paths(g):
    """All super T-paths from a to b, in a fixed order (ordinary first)."""
    a, b, m = g.a, g.b, g.m
    out = []
    used = set()
    verts = [a]
    edges = []

    def go(v, last, w, e, p):
        used.add(e)
        verts.append(w)
        edges.append(e)
        dfs(w, p if p is not None else last)
        edges.pop()
        verts.pop()
        used.discard(e)

    def dfs(v, last):
        step = len(edges) + 1
        odd = step % 2 == 1
        if v == b and not odd:
            out.append(SuperTPath(tuple(verts), tuple(edges)))
        if v > 0:
            for arc in g.adj[v]:
                e = (ARC,) + arc
                if e in used:
                    continue
                p = g.pos.get(arc)
                if p is None:
                    if not odd:
                        continue
                elif p <= last:
                    continue
                go(v, last, arc[1] if arc[0] == v else arc[0], e, p)
            if not odd:
                for i in g.sigma_at.get(v, ()):
                    p = 2 * i - 1
                    if p > last:
                        go(v, last, -i, (SIGMA, i), p)
        else:
            i = -v
            if odd:
                for j in range(i + 1, m + 1):
                    go(v, last, -j, (TAU, i, j), None)
            else:
                p = 2 * i - 1
                if p > last:
                    go(v, last, g.f.center_of(i), (SIGMA, i), p)

    dfs(a, 0)
    out.sort(key=_path_key)
    return out


def sigma_scaling(g, i):
    """Exponent vector (in halves) of sqrt(x_opp / (x_k x_l)) for theta_i:
    x_opp is the side of the triangle away from its fan center."""
    t = g.t
    c = g.f.center_of(i)
    tri = g.f.triangles[i - 1]
    exps = [0] * t.num_arcs
    for e in triangle_sides(tri):
        exps[t.variable(*e) - 1] += -1 if c in e else 1
    return exps


def _weight_parts(g, p, disagree, rank):
    t = g.t
    exps = [0] * t.num_arcs
    thetas = []
    sign = 1
    for step, e in enumerate(p.edges, start=1):
        if e[0] == ARC:
            exps[t.variable(e[1], e[2]) - 1] += 2 if step % 2 else -2
        elif e[0] == SIGMA:
            i = e[1]
            for v, h in enumerate(sigma_scaling(g, i)):
                exps[v] += h
            thetas.append(i)
        else:
            i, j = e[1], e[2]
            if sum(disagree[i - 1:j - 1]) % 2:
                sign = -sign
    # theta factors are written greatest first in the positive ordering
    thetas.sort(key=lambda i: rank[i - 1])
    word, s = sort_sign([t.theta(g.f.triangles[i - 1]) for i in thetas])
    return tuple(exps), word, sign * s


def _disagreements(g, s):
    dflt = default_orientation(g.f)
    return [0 if s[d] == dflt[d] else 1 for d in g.f.diagonals]


def default_rank(g):
    return ordering_rank(positive_ordering(g.f, default_orientation(g.f)))


def path_weight(p, g, s=None, order=None):
    """(-1)^inv(p) wt(p) as a one-term SuperPolynomial. order is the positive
    ordering (greatest first) under the default orientation."""
    s = s if s is not None else default_orientation(g.f)
    rank = ordering_rank(order) if order is not None else default_rank(g)
    exps, word, c = _weight_parts(g, p, _disagreements(g, s), rank)
    return SuperPolynomial(g.t.num_arcs, g.t.num_triangles, {(exps, word): c})


def _setup(t, s, a, b):
    f = fan_decompose(t, a, b, orientation=s)
    g = build_auxiliary(t, f)
    if s is None:
        s = default_orientation(f)
    else:
        for d in f.diagonals:
            if d not in s:
                raise ValueError(f"orientation missing for crossed diagonal {d}")
    return g, s


def expand_lambda(t, s, a, b):
    """Laurent expansion of lambda_{ab} in the variables of t. s=None means the
    default orientation of (a, b)."""
    if t.is_arc(a, b):
        return SuperPolynomial.var(t.num_arcs, t.num_triangles, t.variable(a, b))
    g, s = _setup(t, s, a, b)
    disagree = _disagreements(g, s)
    rank = default_rank(g)
    terms = {}
    for p in enumerate_paths(g):
        exps, word, c = _weight_parts(g, p, disagree, rank)
        terms[(exps, word)] = terms.get((exps, word), 0) + c
    return SuperPolynomial(t.num_arcs, t.num_triangles, terms)


def theta_tilde_scalings(t, s, a, b):
    """Global theta index -> exponent vector of its sigma-edge weight."""
    if t.is_arc(a, b):
        return {}
    g, _ = _setup(t, s, a, b)
    return {t.theta(g.f.triangles[i - 1]): sigma_scaling(g, i) for i in range(1, g.m + 1)}


def expand_lambda_tilde(t, s, a, b):
    """The expansion rewritten in the modified invariants theta~ (read the
    theta symbols of the result as theta~)."""
    return expand_lambda(t, s, a, b).rescale_thetas(theta_tilde_scalings(t, s, a, b))


def ordered_tilde_terms(t, s, a, b):
    """Terms of the theta~ expansion with theta factors listed greatest first
    in the positive ordering, as (coefficient, exponents, theta word)."""
    if t.is_arc(a, b):
        return [(Fraction(1), tuple(2 if v == t.variable(a, b) - 1 else 0
                                    for v in range(t.num_arcs)), ())]
    g, s = _setup(t, s, a, b)
    rank = default_rank(g)
    glob_rank = {t.theta(g.f.triangles[i - 1]): rank[i - 1] for i in range(1, g.m + 1)}
    out = []
    for (exps, word), c in expand_lambda_tilde(t, s, a, b).sorted_terms():
        w = sorted(word, key=lambda j: glob_rank[j])
        _, sgn = sort_sign(w)
        out.append((c * sgn, exps, tuple(w)))
    return out


# mu-invariant formulas


def sweep_labels(n, center, start):
    """Vertices w_1 = center, w_2 = start, w_3, ... going away from the center
    in the direction of start."""
    if (start - center) % n == 1:
        step = 1
    elif (center - start) % n == 1:
        step = -1
    else:
        raise ValueError("start must be adjacent to the center")
    return {j: (center - 1 + step * (j - 1)) % n + 1 for j in range(1, n + 1)}


def single_fan_flips(n, k, center=1, start=2):
    """Flips (1,3), (1,4), ..., (1,k-1) and the target triangle (1,2,k), in
    polygon labels."""
    w = sweep_labels(n, center, start)
    return [(w[1], w[j]) for j in range(3, k)], tuple(sorted((w[1], w[2], w[k])))


def _sigma_weight(t, center, u, v):
    m, kk = t.num_arcs, t.num_triangles
    return SuperPolynomial.monomial(
        m, kk,
        {t.variable(u, v): Fraction(1, 2), t.variable(center, u): Fraction(-1, 2),
         t.variable(center, v): Fraction(-1, 2)},
        (t.theta((center, u, v)),))


def mu_single_fan(t, k, center=1, start=2):
    """sqrt(l_2k / (l_12 l_1k)) [1 2 k] after the flips of single_fan_flips,
    as sum_{i=1}^{k-2} wt(sigma_i). Labels are relative to center and start;
    the default reads the fan at 1 counterclockwise."""
    n = t.n
    if t != fan_triangulation(n, center):
        raise ValueError(f"not the fan triangulation at {center}")
    if not 3 <= k <= n:
        raise ValueError(f"k must be in 3..{n}")
    w = sweep_labels(n, center, start)
    out = SuperPolynomial.zero(t.num_arcs, t.num_triangles)
    for i in range(1, k - 1):
        out = out + _sigma_weight(t, w[1], w[i + 1], w[i + 2])
    return out


def zigzag_flips(n, k):
    """Flips (n-1,n-2), ..., (k+2,k+1) and target triangle (k,k+1,n), in
    zig-zag labels."""
    return [(j, j - 1) for j in range(n - 1, k + 1, -1)], (k, k + 1, n)


def _is_zigzag(t):
    zt, _, _ = zigzag_triangulation(t.n)
    return t == zt


def mu_zigzag(t, k, n=None, s=None):
    """sqrt(l_kn l_{k+1,n} / l_{k,k+1}) [k,k+1,n] after the flips of
    zigzag_flips, as sum_{i=k}^{n-2} lambda_{i+1,n} wt(sigma_i). Labels are
    zig-zag labels; lambda_{i+1,n} is expanded with the zig-zag orientation."""
    n = t.n if n is None else n
    if n != t.n or not _is_zigzag(t):
        raise ValueError("not the zig-zag triangulation")
    if not 1 <= k <= n - 2:
        raise ValueError(f"k must be in 1..{n - 2}")
    _, pos, zs = zigzag_triangulation(n)
    s = zs if s is None else s
    out = SuperPolynomial.zero(t.num_arcs, t.num_triangles)
    for i in range(k, n - 1):
        lam = expand_lambda(t, s, pos[n], pos[i + 1])
        out = out + lam * _sigma_weight(t, pos[i + 1], pos[i], pos[i + 2])
    return out
