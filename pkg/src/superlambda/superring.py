"""Exact arithmetic in R[x_1^(+-1/2), ..., x_m^(+-1/2) | theta_1, ..., theta_k].

A term is keyed by (exponents, theta_word). Exponents are integers counting
halves, so x1^(3/2) is stored as 3. Coefficients are Fractions.
"""

import json
import math
from fractions import Fraction

from .grassmann import GrassmannNumber, DimensionError, gmul


def sort_sign(word):
    """Sort a theta word. Returns (sorted_word, sign), or (None, 0) when an
    index repeats (the product vanishes)."""
    w = list(word)
    if len(set(w)) < len(w):
        return None, 0
    # count inversions; words are short
    inv = sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])
    return tuple(sorted(w)), (-1 if inv % 2 else 1)


def _merge_words(w1, w2):
    if not w1:
        return w2, 1
    if not w2:
        return w1, 1
    s1 = set(w1)
    if s1.intersection(w2):
        return None, 0
    inv = 0
    for j in w2:
        inv += sum(1 for i in w1 if i > j)
    return tuple(sorted(w1 + w2)), (-1 if inv % 2 else 1)


def _term_key(key):
    exps, word = key
    return (-sum(exps), tuple(-e for e in exps), len(word), word)


class SuperPolynomial:
    __slots__ = ("m", "k", "terms")

    def __init__(self, m, k, terms=None):
        self.m = int(m)
        self.k = int(k)
        clean = {}
        for (exps, word), c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            word = tuple(int(i) for i in word)
            if len(exps) != self.m:
                raise DimensionError(f"exponent vector has length {len(exps)}, expected {self.m}")
            if any(not 1 <= i <= self.k for i in word):
                raise DimensionError(f"theta index out of range in {word}")
            if any(word[i] >= word[i + 1] for i in range(len(word) - 1)):
                raise ValueError(f"theta word must be strictly ascending: {word}")
            c = Fraction(c)
            if c != 0:
                clean[(exps, word)] = clean.get((exps, word), Fraction(0)) + c
        self.terms = {key: c for key, c in clean.items() if c != 0}

    # constructors

    @classmethod
    def zero(cls, m, k):
        return cls(m, k)

    @classmethod
    def constant(cls, m, k, c):
        return cls(m, k, {((0,) * m, ()): c})

    @classmethod
    def monomial(cls, m, k, exponents=None, theta_word=(), coefficient=1):
        """exponents: dict var index (1-based) -> power as Fraction/int/float
        multiple of 1/2."""
        exps = [0] * m
        for i, p in (exponents or {}).items():
            h = Fraction(p) * 2
            if h.denominator != 1:
                raise ValueError(f"exponent {p} is not a multiple of 1/2")
            exps[i - 1] += int(h)
        word, sign = sort_sign(theta_word)
        if word is None:
            return cls(m, k)
        return cls(m, k, {(tuple(exps), word): Fraction(coefficient) * sign})

    @classmethod
    def var(cls, m, k, i, power=1):
        return cls.monomial(m, k, {i: power})

    @classmethod
    def theta(cls, m, k, j):
        return cls.monomial(m, k, theta_word=(j,))

    # ring operations

    def _check(self, other):
        if not isinstance(other, SuperPolynomial):
            raise TypeError("expected a SuperPolynomial")
        if (self.m, self.k) != (other.m, other.k):
            raise DimensionError(f"ring mismatch: ({self.m},{self.k}) vs ({other.m},{other.k})")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperPolynomial.constant(self.m, self.k, other)
        return sadd(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.m, self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return sadd(self, -other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SuperPolynomial(self.m, self.k, {key: c * other for key, c in self.terms.items()})
        return smul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return (self.m, self.k, self.terms) == (other.m, other.k, other.terms)

    def __hash__(self):
        return hash((self.m, self.k, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SuperPolynomial({self.render()})"

    # structure

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]))

    @property
    def is_even(self):
        return all(len(w) % 2 == 0 for _, w in self.terms)

    @property
    def is_odd(self):
        return all(len(w) % 2 == 1 for _, w in self.terms)

    def body_part(self):
        """Terms with no theta (the result of setting every theta to 0)."""
        return SuperPolynomial(self.m, self.k, {key: c for key, c in self.terms.items() if not key[1]})

    def soul_part(self):
        return SuperPolynomial(self.m, self.k, {key: c for key, c in self.terms.items() if key[1]})

    def has_integer_exponents(self):
        return all(e % 2 == 0 for exps, _ in self.terms for e in exps)

    def coefficients(self):
        return [c for _, c in self.sorted_terms()]

    def substitute_theta_signs(self, eps):
        """theta_j -> eps[j-1] * theta_j."""
        out = {}
        for (exps, word), c in self.terms.items():
            s = 1
            for j in word:
                s *= eps[j - 1]
            out[(exps, word)] = c * s
        return SuperPolynomial(self.m, self.k, out)

    def rescale_thetas(self, scalings):
        """Rewrite in a rescaled odd basis: if theta~_j = s_j theta_j with s_j
        the monomial given by scalings[j] (exponent vector in halves), each
        theta_j in a term becomes s_j^-1 theta~_j. The result is read with
        theta~ in place of theta."""
        out = {}
        for (exps, word), c in self.terms.items():
            e = list(exps)
            for j in word:
                for i, h in enumerate(scalings[j]):
                    e[i] -= h
            out[(tuple(e), word)] = c
        return SuperPolynomial(self.m, self.k, out)

    # output

    def render(self, var_names=None, theta_names=None, theta_symbol="θ"):
        if not self.terms:
            return "0"
        parts = [render_term(exps, word, c, var_names, theta_names, theta_symbol)
                 for (exps, word), c in self.sorted_terms()]
        return " + ".join(parts)

    def to_json_obj(self):
        return {
            "m": self.m,
            "k": self.k,
            "terms": [
                {"coefficient": str(c), "doubled_exponents": list(exps), "theta_word": list(word)}
                for (exps, word), c in self.sorted_terms()
            ],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), ensure_ascii=False)

    @classmethod
    def from_json_obj(cls, obj):
        terms = {}
        for t in obj["terms"]:
            key = (tuple(t["doubled_exponents"]), tuple(t["theta_word"]))
            if key in terms:
                raise ValueError(f"duplicate term {key}")
            terms[key] = Fraction(t["coefficient"])
        return cls(obj["m"], obj["k"], terms)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))


def _fmt_half(h):
    if h % 2 == 0:
        return str(h // 2)
    return f"{h}/2"


def render_term(exps, word, c, var_names, theta_names, theta_symbol):
    factors = []
    for i, h in enumerate(exps):
        if h == 0:
            continue
        name = var_names[i] if var_names else f"x{i + 1}"
        factors.append(name if h == 2 else f"{name}^({_fmt_half(h)})")
    th = "".join(theta_names[j - 1] if theta_names else f"{theta_symbol}{j}" for j in word)
    if th:
        factors.append(th)
    if not factors:
        return str(c)
    if c == 1:
        return " ".join(factors)
    return " ".join([f"({c})"] + factors)


def sadd(a, b):
    a._check(b)
    out = dict(a.terms)
    for key, c in b.terms.items():
        out[key] = out.get(key, Fraction(0)) + c
    return SuperPolynomial(a.m, a.k, out)


def smul(a, b):
    a._check(b)
    out = {}
    for (ea, wa), ca in a.terms.items():
        for (eb, wb), cb in b.terms.items():
            w, s = _merge_words(wa, wb)
            if w is None:
                continue
            key = (tuple(x + y for x, y in zip(ea, eb)), w)
            out[key] = out.get(key, Fraction(0)) + s * ca * cb
    return SuperPolynomial(a.m, a.k, out)


def evaluate(p, x_values, theta_images=None):
    """Substitute x_i^(1/2) -> sqrt(x_values[i-1]) and theta_j ->
    theta_images[j-1]. Without images, theta_j maps to generator j of a
    k-generator algebra."""
    if len(x_values) != p.m:
        raise DimensionError(f"expected {p.m} x values, got {len(x_values)}")
    for v in x_values:
        if not v > 0:
            raise ValueError(f"x values must be positive, got {v}")
    if theta_images is None:
        theta_images = [GrassmannNumber.generator(p.k, j) for j in range(1, p.k + 1)]
    if len(theta_images) != p.k:
        raise DimensionError(f"expected {p.k} theta images, got {len(theta_images)}")
    if not theta_images:
        kk = 0
    else:
        kk = theta_images[0].k
    for g in theta_images:
        if g.k != kk:
            raise DimensionError("theta images live in different algebras")
        if not g.is_odd:
            raise ValueError("theta images must be odd")
    xs = [float(v) for v in x_values]
    roots = [math.sqrt(v) for v in xs]
    by_word = {}
    for (exps, word), c in p.terms.items():
        s = float(c)
        for x, r, h in zip(xs, roots, exps):
            if h:
                s *= x ** (h // 2) * (r if h % 2 else 1.0)
        by_word[word] = by_word.get(word, 0.0) + s
    out = GrassmannNumber.zero(kk)
    cache = {(): GrassmannNumber.scalar(kk, 1.0)}

    def prod(word):
        if word not in cache:
            cache[word] = gmul(prod(word[:-1]), theta_images[word[-1] - 1])
        return cache[word]

    for word, s in by_word.items():
        if s != 0.0:
            out = out + prod(word) * s
    return out
