"""Super-friezes built from flips of a fan triangulation.

Frieze labels 1..N (N = width + 3) run clockwise around the polygon; label L
is polygon vertex vertex(N, L). The entry lambda_{ij} sits on the i-th
south-east diagonal; the odd entry between lambda_{ij} and lambda_{i,j+1} is
mu~_{i,j,j+1} and the odd entry between lambda_{ij} and lambda_{i+1,j} is
mu~_{i,i+1,j}, where mu~ is the mu-invariant of that face times the square
root of its two non-boundary lambda-lengths.

An elementary diamond

            B
        Xi     Psi
      A           D
        Phi    Sigma
            C

has A = lambda_{ij}, B = lambda_{i+1,j}, C = lambda_{i,j+1}, D = lambda_{i+1,j+1},
Xi = mu~_{i,i+1,j}, Psi = mu~_{i+1,j,j+1}, Phi = mu~_{i,j,j+1},
Sigma = mu~_{i,i+1,j+1}.
"""

import json
from dataclasses import dataclass, field

from .grassmann import GrassmannNumber, gmul, ginv, gsqrt, ParityError
from .triangulation import fan_triangulation, SpinStructure, reverse_triangle, arc_key
from .ptolemy import DecoratedState, make_state, flip_with_record

RELATIONS = ("AD-BC=1+SigmaXi", "AD-BC=1+PsiPhi", "ASigma-CXi=Phi",
             "BSigma-DXi=Psi", "BPhi-APsi=Xi", "DPhi-CPsi=Sigma")


def vertex(N, label):
    """Polygon vertex (counterclockwise labels) of a clockwise frieze label."""
    return (1 - label) % N + 1


# diamonds

def diamond_residuals(A, B, C, D, Xi, Psi, Phi, Sigma):
    """Left minus right side of the six relations, in RELATIONS order."""
    one = GrassmannNumber.scalar(A.k, 1.0)
    ad_bc = gmul(A, D) - gmul(B, C)
    return (
        ad_bc - (one + gmul(Sigma, Xi)),
        ad_bc - (one + gmul(Psi, Phi)),
        gmul(A, Sigma) - gmul(C, Xi) - Phi,
        gmul(B, Sigma) - gmul(D, Xi) - Psi,
        gmul(B, Phi) - gmul(A, Psi) - Xi,
        gmul(D, Phi) - gmul(C, Psi) - Sigma,
    )


def _scale(*gs):
    return max([1.0] + [g.max_abs() for g in gs])


def diamond_deviations(A, B, C, D, Xi, Psi, Phi, Sigma):
    for g in (A, B, C, D):
        if not g.is_even:
            raise ParityError("A, B, C, D must be even")
    for g in (Xi, Psi, Phi, Sigma):
        if not g.is_odd:
            raise ParityError("Xi, Psi, Phi, Sigma must be odd")
    s = _scale(A, B, C, D)
    return tuple(r.max_abs() / (s * s) for r in diamond_residuals(A, B, C, D, Xi, Psi, Phi, Sigma))


# each odd relation as alpha Psi + beta Sigma = gamma
def _linear_rows(A, B, C, D, Xi, Phi):
    one = GrassmannNumber.scalar(A.k, 1.0)
    zero = GrassmannNumber.zero(A.k)
    return {
        2: (zero, A, Phi + gmul(C, Xi)),
        3: (-one, B, gmul(D, Xi)),
        4: (A, zero, gmul(B, Phi) - Xi),
        5: (C, one, gmul(D, Phi)),
    }


def solve_pair(A, B, C, D, Xi, Phi, pair):
    """Psi and Sigma from two of the four odd relations (numbered 2..5), or
    None when that pair does not determine them."""
    rows = _linear_rows(A, B, C, D, Xi, Phi)
    (a1, b1, g1), (a2, b2, g2) = rows[pair[0]], rows[pair[1]]
    det = gmul(a1, b2) - gmul(a2, b1)
    if det.body == 0.0:
        return None
    inv = ginv(det)
    psi = gmul(gmul(g1, b2) - gmul(g2, b1), inv)
    sigma = gmul(gmul(a1, g2) - gmul(a2, g1), inv)
    return psi, sigma


PAIRS = [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]


def check_diamond(A, B, C, D, Xi, Psi, Phi, Sigma, tol=1e-10):
    """All six relations within tol, and every pair of odd relations
    determines the same Psi, Sigma (so it implies the other two)."""
    devs = diamond_deviations(A, B, C, D, Xi, Psi, Phi, Sigma)
    if max(devs) > tol:
        return False
    s = _scale(Psi, Sigma, Xi, Phi)
    for pair in PAIRS:
        solved = solve_pair(A, B, C, D, Xi, Phi, pair)
        if solved is None:
            continue
        psi, sigma = solved
        if max(diamond_deviations(A, B, C, D, Xi, psi, Phi, sigma)) > tol:
            return False
        if max((psi - Psi).max_abs(), (sigma - Sigma).max_abs()) > tol * s:
            return False
    return True


def solve_diamond(A, B, C, Xi, Phi):
    """D, Psi, Sigma from the left half of a diamond."""
    psi = gmul(gmul(B, Phi) - Xi, ginv(A))
    sigma = gmul(Phi + gmul(C, Xi), ginv(A))
    one = GrassmannNumber.scalar(A.k, 1.0)
    d = gmul(one + gmul(B, C) + gmul(sigma, Xi), ginv(A))
    return d, psi, sigma


# the array

@dataclass
class SuperFrieze:
    """even[i][r-1] = lambda_{i+1, i+1+r} for r = 1..width+2,
    odd[i][q] = mu~_{i+1, i+2+q, i+3+q} for q = 0..width,
    strip[i][s] = mu~_{i+1, i+2, i+3+s} for s = 0..width (between diagonals
    i and i+1). Diagonal index i is 0-based; frieze label i+1."""
    width: int
    even: list
    odd: list
    strip: list
    states: list = field(default_factory=list, repr=False)

    @property
    def N(self):
        return self.width + 3

    @property
    def num_diagonals(self):
        return len(self.even)

    def lam(self, i, j):
        """lambda_{ij} in frieze labels, read off diagonal i (1-based)."""
        r = (j - i) % self.N
        return self.even[i - 1][r - 1]

    def diamonds(self):
        """(diagonal, row, entries) for every interior diamond; row r is the
        even row of A (2..width+1)."""
        n = self.width
        out = []
        for i in range(min(len(self.strip), len(self.even) - 1)):
            for r in range(2, n + 2):
                A = self.even[i][r - 1]
                B = self.even[i + 1][r - 2]
                C = self.even[i][r]
                D = self.even[i + 1][r - 1]
                Xi = self.strip[i][r - 2]
                Sigma = self.strip[i][r - 1]
                Phi = self.odd[i][r - 1]
                Psi = self.odd[i + 1][r - 2]
                out.append((i, r, (A, B, C, D, Xi, Psi, Phi, Sigma)))
        return out

    def failing_diamonds(self, tol=1e-10):
        return [(i, r) for i, r, d in self.diamonds() if not check_diamond(*d, tol=tol)]

    def max_diamond_deviation(self):
        return max((max(diamond_deviations(*d)) for _, _, d in self.diamonds()), default=0.0)

    def glide_deviation(self):
        """Diagonal N against diagonal 0: equal even, negated odd entries."""
        N = self.N
        if len(self.even) <= N:
            raise ValueError("need at least N + 1 diagonals")
        dev = 0.0
        for g, h in zip(self.even[N], self.even[0]):
            dev = max(dev, (g - h).max_abs() / _scale(h))
        s = _scale(*self.odd[0])
        for g, h in zip(self.odd[N], self.odd[0]):
            dev = max(dev, (g + h).max_abs() / s)
        return dev

    def edge_row_deviation(self):
        """Top odd row repeats every other entry; bottom odd row alternates
        sign every other entry."""
        n = self.width
        dev = 0.0
        for i in range(len(self.strip)):
            s = _scale(*self.odd[i], *self.strip[i])
            dev = max(dev, (self.odd[i][0] - self.strip[i][0]).max_abs() / s)
            if i + 1 < len(self.odd):
                dev = max(dev, (self.strip[i][n] + self.odd[i + 1][n]).max_abs() / s)
        return dev

    def rows(self):
        """Staggered layout: {(row, col): (kind, value)} with rows 0..2n+2."""
        n = self.width
        cells = {}
        for i, (ev, od) in enumerate(zip(self.even, self.odd)):
            c = 4 * i
            for r in range(1, n + 3):
                k = 2 * (r - 1)
                cells[(k, c + k)] = ("even", ev[r - 1])
            for q in range(n + 1):
                k = 2 * q + 1
                cells[(k, c + k)] = ("odd", od[q])
        for i, st in enumerate(self.strip):
            c = 4 * i
            for s in range(n + 1):
                k = 2 * s + 1
                cells[(k, c + k + 2)] = ("strip", st[s])
        return cells

    def render(self, digits=4, cell=None):
        """Text layout; entries in one row sit two grid columns apart, so each
        grid column gets half a cell of width."""
        cells = self.rows()
        cell = cell or (lambda kind, g: _short(g, digits))
        texts = {pos: cell(kind, g) for pos, (kind, g) in cells.items()}
        h = (max(len(s) for s in texts.values()) + 2) // 2 + 1
        lines = []
        for k in range(2 * self.width + 3):
            line = ""
            for (row, c), s in sorted(texts.items(), key=lambda kv: kv[0][1]):
                if row != k:
                    continue
                end = (c + 2) * h
                line = line.ljust(end - len(s)) + s
            lines.append(line.rstrip())
        return "\n".join(lines)

    def to_json_obj(self):
        def enc(g):
            return [float(v) for v in g.c]
        return {
            "width": self.width,
            "generators": self.even[0][0].k,
            "even": [[enc(g) for g in row] for row in self.even],
            "odd": [[enc(g) for g in row] for row in self.odd],
            "strip": [[enc(g) for g in row] for row in self.strip],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj):
        k = obj["generators"]

        def dec(v):
            return GrassmannNumber(k, v)
        return cls(obj["width"],
                   [[dec(v) for v in row] for row in obj["even"]],
                   [[dec(v) for v in row] for row in obj["odd"]],
                   [[dec(v) for v in row] for row in obj["strip"]])


def _short(g, digits):
    if g.is_even and g.soul().max_abs() == 0.0:
        return f"{g.body:.{digits}g}"
    terms = sorted(g.components.items(), key=lambda kv: (len(kv[0]), kv[0]))
    if not terms:
        return "0"
    word, v = terms[0]
    head = f"{v:.{digits}g}" + "".join(f"θ{i}" for i in word)
    if g.is_even and g.body != 0.0:
        head = f"{g.body:.{digits}g}"
    return head + ("…" if len(terms) > 1 else "")


# construction from a fan

def initial_state(x, xi):
    """Fan at label 1 with lambda_{1,k+2} = x_k, boundary lambda 1, and
    mu~_{1,k+1,k+2} = xi_k; diagonals point away from the center."""
    n = len(x)
    if len(xi) != n + 1:
        raise ValueError(f"need {n + 1} odd values for {n} even ones")
    if n < 1:
        raise ValueError("width must be at least 1")
    k = xi[0].k
    N = n + 3
    V = lambda L: vertex(N, L)
    x = [g if isinstance(g, GrassmannNumber) else GrassmannNumber.scalar(k, g) for g in x]
    for g in x:
        if not g.is_even or not g.body > 0:
            raise ValueError("even entries need positive bodies")
    for g in xi:
        if not g.is_odd:
            raise ParityError("xi entries must be odd")
    t = fan_triangulation(N, center=V(1))
    one = GrassmannNumber.scalar(k, 1.0)
    lam = {arc_key(i, i % N + 1): one for i in range(1, N + 1)}
    spoke = [one] + x + [one]          # lambda_{1,j} for j = 2..N
    for j in range(3, N):
        lam[arc_key(V(1), V(j))] = spoke[j - 2]
    mu = {}
    for q in range(n + 1):
        a, b = spoke[q], spoke[q + 1]
        mu[tuple(sorted((V(1), V(q + 2), V(q + 3))))] = gmul(xi[q], ginv(gsqrt(gmul(a, b))))
    spin = SpinStructure.from_pairs([(V(1), V(j)) for j in range(3, N)])
    return make_state(t, spin, lam, mu)


def read_diagonal(st, i):
    """Even and odd entries of diagonal i (frieze label) from a state that
    contains the fan at i."""
    N = st.t.n
    n = N - 3
    V = lambda L: vertex(N, (L - 1) % N + 1)
    even = [st.lam_of(V(i), V(i + r)) for r in range(1, n + 3)]
    odd = []
    for q in range(n + 1):
        a, b = even[q], even[q + 1]
        mu = st.mu_of((V(i), V(i + q + 1), V(i + q + 2)))
        odd.append(gmul(gsqrt(gmul(a, b)), mu))
    return even, odd


def sweep(st, i):
    """Flip (i, i+2), ..., (i, i+n+1), then reverse the last face (i, i+1, i-1)
    and negate its mu. Returns the new state (fan at i+1) and the strip of
    odd entries between diagonals i and i+1."""
    N = st.t.n
    n = N - 3
    V = lambda L: vertex(N, (L - 1) % N + 1)
    first = st.mu_of((V(i), V(i + 1), V(i + 2)))
    strip = [gmul(gsqrt(st.lam_of(V(i), V(i + 2))), first)]
    for j in range(i + 2, i + n + 2):
        st, rec = flip_with_record(st, (V(i), V(j)))
        v = rec.values
        # theta' is the face (i, i+1, j+1); its scale uses sides d and f
        strip.append(gmul(gsqrt(gmul(v["d"], v["f"])), rec.theta_new))
    last = tuple(sorted((V(i), V(i + 1), V(i - 1))))
    s, _ = reverse_triangle(SpinStructure(st.orient), last)
    mu = dict(st.mu)
    mu[last] = -mu[last]
    return DecoratedState(st.t, dict(s.items()), st.lam, mu), strip


def frieze_from_fan(x, xi, num_diagonals=None, keep_states=False):
    """The super-frieze whose first diagonal is 1, xi_1, x_1, ..., x_n,
    xi_{n+1}, 1. By default N + 1 diagonals are built (enough for the glide
    check)."""
    st = initial_state(x, xi)
    N = st.t.n
    D = N + 1 if num_diagonals is None else num_diagonals
    even, odd, strips, states = [], [], [], []
    for i in range(1, D + 1):
        e, o = read_diagonal(st, i)
        even.append(e)
        odd.append(o)
        if keep_states:
            states.append(st)
        if i < D:
            st, s = sweep(st, i)
            strips.append(s)
    return SuperFrieze(N - 3, even, odd, strips, states)


def propagate(even, odd):
    """Next diagonal and the strip in between, from the diamond relations
    alone (top strip entry repeats, bottom entry of the new diagonal flips
    sign)."""
    n = len(even) - 2
    k = even[0].k
    one = GrassmannNumber.scalar(k, 1.0)
    new_even = [one]
    new_odd = []
    strip = [odd[0]]
    for r in range(2, n + 2):
        A, C, Phi = even[r - 1], even[r], odd[r - 1]
        B, Xi = new_even[r - 2], strip[r - 2]
        D, Psi, Sigma = solve_diamond(A, B, C, Xi, Phi)
        new_even.append(D)
        new_odd.append(Psi)
        strip.append(Sigma)
    new_even.append(one)
    new_odd.append(-strip[n])
    return new_even, new_odd, strip


def frieze_by_propagation(x, xi, num_diagonals=None):
    """The same array computed from the relations instead of flips."""
    st = initial_state(x, xi)
    even0, odd0 = read_diagonal(st, 1)
    N = len(x) + 3
    D = N + 1 if num_diagonals is None else num_diagonals
    even, odd, strips = [even0], [odd0], []
    for _ in range(D - 1):
        e, o, s = propagate(even[-1], odd[-1])
        even.append(e)
        odd.append(o)
        strips.append(s)
    return SuperFrieze(len(x), even, odd, strips)


def random_frieze_input(width, rng, k=None):
    """Even bodies in [0.5, 2]; each odd entry a random multiple of its own
    generator plus small multiples of the others."""
    k = width + 1 if k is None else k
    x = [GrassmannNumber.scalar(k, rng.uniform(0.5, 2.0)) for _ in range(width)]
    xi = []
    for q in range(width + 1):
        g = GrassmannNumber.generator(k, q % k + 1) * rng.uniform(0.5, 2.0)
        for j in range(1, k + 1):
            g = g + GrassmannNumber.generator(k, j) * rng.normal(0, 0.2)
        xi.append(g)
    return x, xi


def corrupt(frieze, diagonal, row, amount=0.5):
    """Copy of the frieze with even entry (diagonal, row) perturbed."""
    even = [list(r) for r in frieze.even]
    g = even[diagonal][row - 1]
    even[diagonal][row - 1] = g + GrassmannNumber.scalar(g.k, amount)
    return SuperFrieze(frieze.width, even, frieze.odd, frieze.strip)
