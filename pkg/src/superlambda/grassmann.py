"""Real Grassmann algebra on k odd generators.

An element is a dense vector of 2**k coefficients. Bit i-1 of an index marks
the presence of theta_i, so index 0b101 is theta_1 theta_3 (ascending word).
"""

from functools import lru_cache
from math import sqrt
from numbers import Real

import numpy as np

MAX_GENERATORS = 24
# above this the 3**k pair table gets too large; products go sparse
TABLE_LIMIT = 12


class DimensionError(ValueError):
    pass


class ParityError(ValueError):
    pass


class DomainError(ValueError):
    pass


def _word_to_mask(word):
    mask = 0
    prev = 0
    for i in word:
        if i <= prev:
            raise ValueError(f"theta word must be strictly ascending: {word}")
        mask |= 1 << (i - 1)
        prev = i
    return mask


def _mask_to_word(mask):
    word = []
    i = 1
    while mask:
        if mask & 1:
            word.append(i)
        mask >>= 1
        i += 1
    return tuple(word)


@lru_cache(maxsize=None)
def _pair_table(k):
    """All disjoint (A, B) pairs with the sign of theta_A theta_B.

    Built by adding generators one at a time. A new top generator placed in A
    sits after everything in B, so it contributes |B| transpositions.
    """
    ia = np.zeros(1, dtype=np.int64)
    ib = np.zeros(1, dtype=np.int64)
    par = np.zeros(1, dtype=np.int64)
    for g in range(k):
        bit = 1 << g
        nb = np.bitwise_count(ib).astype(np.int64)
        ia = np.concatenate([ia, ia | bit, ia])
        ib = np.concatenate([ib, ib, ib | bit])
        par = np.concatenate([par, par + nb, par])
    sign = np.where(par % 2 == 0, 1.0, -1.0)
    return ia, ib, ia | ib, sign


@lru_cache(maxsize=None)
def _grades(k):
    return np.bitwise_count(np.arange(1 << k, dtype=np.int64)).astype(np.int64)


def _check_k(k):
    if not isinstance(k, (int, np.integer)) or k < 0 or k > MAX_GENERATORS:
        raise ValueError(f"number of generators must be in 0..{MAX_GENERATORS}, got {k}")


class GrassmannNumber:
    __slots__ = ("k", "c")

    def __init__(self, k, coeffs=None):
        _check_k(k)
        self.k = int(k)
        if coeffs is None:
            self.c = np.zeros(1 << self.k)
        else:
            c = np.asarray(coeffs, dtype=float)
            if c.shape != (1 << self.k,):
                raise DimensionError(f"expected {1 << self.k} coefficients, got {c.shape}")
            self.c = c

    # constructors

    @classmethod
    def zero(cls, k):
        return cls(k)

    @classmethod
    def scalar(cls, k, value):
        g = cls(k)
        g.c[0] = float(value)
        return g

    @classmethod
    def generator(cls, k, i):
        if not 1 <= i <= k:
            raise ValueError(f"generator index {i} out of range 1..{k}")
        g = cls(k)
        g.c[1 << (i - 1)] = 1.0
        return g

    @classmethod
    def from_dict(cls, k, components):
        g = cls(k)
        for word, v in components.items():
            g.c[_word_to_mask(tuple(word))] += float(v)
        return g

    # views

    @property
    def num_generators(self):
        return self.k

    @property
    def components(self):
        nz = np.nonzero(self.c)[0]
        return {_mask_to_word(int(m)): float(self.c[m]) for m in nz}

    @property
    def body(self):
        return float(self.c[0])

    def soul(self):
        g = self.copy()
        g.c[0] = 0.0
        return g

    def _parity_mass(self, parity):
        return np.any(self.c[(_grades(self.k) % 2) == parity] != 0.0)

    @property
    def is_even(self):
        return not self._parity_mass(1)

    @property
    def is_odd(self):
        return not self._parity_mass(0)

    def max_abs(self):
        return float(np.max(np.abs(self.c))) if self.c.size else 0.0

    def copy(self):
        return GrassmannNumber(self.k, self.c.copy())

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, GrassmannNumber):
            if other.k != self.k:
                raise DimensionError(f"generator counts differ: {self.k} vs {other.k}")
            return other
        if isinstance(other, Real):
            return GrassmannNumber.scalar(self.k, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GrassmannNumber(self.k, self.c + o.c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GrassmannNumber(self.k, self.c - o.c)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GrassmannNumber(self.k, o.c - self.c)

    def __neg__(self):
        return GrassmannNumber(self.k, -self.c)

    def __mul__(self, other):
        if isinstance(other, Real):
            return GrassmannNumber(self.k, self.c * float(other))
        if isinstance(other, GrassmannNumber):
            return gmul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return GrassmannNumber(self.k, self.c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return GrassmannNumber(self.k, self.c / float(other))
        if isinstance(other, GrassmannNumber):
            return gmul(self, ginv(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GrassmannNumber):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.c, other.c)

    __hash__ = None

    def __repr__(self):
        return f"GrassmannNumber({self.k}, {format_grassmann(self)})"


def format_grassmann(g, digits=6):
    parts = []
    for word, v in sorted(g.components.items(), key=lambda kv: (len(kv[0]), kv[0])):
        mono = "".join(f"θ{i}" for i in word)
        num = f"{v:.{digits}g}"
        parts.append(num if not mono else f"{num}·{mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _sparse_mul(a, b):
    out = np.zeros(1 << a.k)
    na = np.nonzero(a.c)[0]
    nb = np.nonzero(b.c)[0]
    if na.size == 0 or nb.size == 0:
        return out
    vb = b.c[nb]
    for m in na:
        m = int(m)
        ok = (nb & m) == 0
        if not ok.any():
            continue
        bs = nb[ok]
        # inversions: for each bit i in m, count bits of B below i
        par = np.zeros(bs.size, dtype=np.int64)
        mm, i = m, 0
        while mm:
            if mm & 1:
                par += np.bitwise_count(bs & ((1 << i) - 1)).astype(np.int64)
            mm >>= 1
            i += 1
        sign = np.where(par % 2 == 0, 1.0, -1.0)
        np.add.at(out, bs | m, sign * a.c[m] * vb[ok])
    return out


def gmul(a, b):
    if not isinstance(a, GrassmannNumber) or not isinstance(b, GrassmannNumber):
        raise TypeError("gmul expects GrassmannNumber operands")
    if a.k != b.k:
        raise DimensionError(f"generator counts differ: {a.k} vs {b.k}")
    if a.k > TABLE_LIMIT:
        return GrassmannNumber(a.k, _sparse_mul(a, b))
    ia, ib, io, sign = _pair_table(a.k)
    w = sign * a.c[ia] * b.c[ib]
    return GrassmannNumber(a.k, np.bincount(io, weights=w, minlength=1 << a.k))


def _split_even(a, what):
    if not isinstance(a, GrassmannNumber):
        raise TypeError(f"{what} expects a GrassmannNumber")
    if not a.is_even:
        raise ParityError(f"{what} needs an even element")
    b0 = a.body
    return b0


def _nilpotent_series(a, b0, coeff):
    """b0-normalised series sum_j coeff(j) N**j with a = b0 (1 + N)."""
    n = a.soul() * (1.0 / b0)
    total = GrassmannNumber.scalar(a.k, coeff(0))
    power = GrassmannNumber.scalar(a.k, 1.0)
    for j in range(1, a.k + 1):
        power = gmul(power, n)
        if not power.c.any():
            break
        total = total + power * coeff(j)
    return total


def ginv(a):
    b0 = _split_even(a, "ginv")
    if b0 == 0.0:
        raise DomainError("element with zero body is not invertible")
    return _nilpotent_series(a, b0, lambda j: (-1.0) ** j) * (1.0 / b0)


def _half_binom(j):
    # C(1/2, j)
    num = 1.0
    for i in range(j):
        num *= 0.5 - i
    den = 1.0
    for i in range(2, j + 1):
        den *= i
    return num / den


def gsqrt(a):
    b0 = _split_even(a, "gsqrt")
    if not b0 > 0.0:
        raise DomainError("square root needs a strictly positive body")
    return _nilpotent_series(a, b0, _half_binom) * sqrt(b0)


def relative_deviation(got, want):
    """max |got - want| scaled by max |want| (or 1 when want is tiny)."""
    scale = max(want.max_abs(), 1e-300)
    return (got - want).max_abs() / scale
