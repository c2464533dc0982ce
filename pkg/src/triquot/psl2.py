"""PSL(2,p): order spectrum, Macbeath's generation criterion and an explicit
matrix realization for small p."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import divisors, is_prime
from .errors import PreconditionError, ResourceLimitError
from .groups import DEFAULT_REALIZE_BOUND, FiniteGroup, Psl2, realize
from .l2set import l2_set
from .signature import Triple, is_exceptional, is_hyperbolic


def _check_p(p):
    if p < 5 or not is_prime(p):
        raise PreconditionError(f"PSL(2,p) needs a prime p >= 5, got {p}")


@dataclass(frozen=True)
class OrderSpectrum:
    """Element orders of PSL(2,p): the divisors of p, (p-1)/2 and (p+1)/2."""
    p: int

    def __post_init__(self):
        _check_p(self.p)

    @property
    def maximal(self) -> tuple[int, int, int]:
        p = self.p
        return (p, (p - 1) // 2, (p + 1) // 2)

    def contains(self, n: int) -> bool:
        return n >= 1 and any(m % n == 0 for m in self.maximal)

    def __contains__(self, n):
        return self.contains(n)

    def orders(self) -> frozenset:
        out = set()
        for m in self.maximal:
            out.update(divisors(m))
        return frozenset(out)


def psl2_order(p: int) -> int:
    _check_p(p)
    return p * (p * p - 1) // 2


def macbeath_generated(p: int, tr: Triple) -> bool:
    """Whether PSL(2,p) is generated by x, y with |x|=r, |y|=s, |xy|=t.

    Valid for non-exceptional hyperbolic triples: every L2-set member must
    be p or divide (p-1)/2 or (p+1)/2.
    """
    _check_p(p)
    if not is_hyperbolic(tr) or is_exceptional(tr):
        raise PreconditionError(f"{tr} must be hyperbolic and non-exceptional")
    half_minus, half_plus = (p - 1) // 2, (p + 1) // 2
    return all(m == p or half_minus % m == 0 or half_plus % m == 0 for m in l2_set(tr))


@dataclass(frozen=True)
class MatrixGroupElement:
    """The class of [[a, b], [c, d]] mod +-1, stored in canonical form
    (first nonzero entry in 1..(p-1)/2)."""
    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        p = self.p
        vals = [v % p for v in (self.a, self.b, self.c, self.d)]
        if (vals[0] * vals[3] - vals[1] * vals[2]) % p != 1:
            raise ValueError(f"matrix {vals} does not have determinant 1 mod {p}")
        lead = next(v for v in vals if v)
        if lead > (p - 1) // 2:
            vals = [(-v) % p for v in vals]
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "MatrixGroupElement"):
        if other.p != self.p:
            raise ValueError("elements of different groups")
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MatrixGroupElement(self.p, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def order(self) -> int:
        x, n = self, 1
        ident = MatrixGroupElement(self.p, 1, 0, 0, 1)
        while x != ident:
            x = x * self
            n += 1
        return n

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.p}"


def _canonical(m, p):
    """Canonicalize an (n,4) int64 array of SL(2,p) matrices mod +-1."""
    m = m % p
    lead = np.where(m[:, 0] != 0, m[:, 0], m[:, 1])
    flip = lead > (p - 1) // 2
    m[flip] = (-m[flip]) % p
    return m


def _trace_order_table(p):
    """Order of a non-identity element of PSL(2,p) as a function of its trace
    (up to sign), obtained from explicit representatives."""
    table = {}
    for tr in range((p + 1) // 2):
        if tr == 2 % p:
            table[tr] = p
            continue
        # companion matrix [[0,-1],[1,tr]] has trace tr and determinant 1
        table[tr] = MatrixGroupElement(p, 0, -1, 1, tr).order()
    return table


class PSL2Group(FiniteGroup):
    """PSL(2,p) as sorted canonical matrices; index = position in that list."""

    def __init__(self, p: int):
        _check_p(p)
        self.p = p
        self.spec = Psl2(p)
        self.order = psl2_order(p)
        h = (p - 1) // 2
        mats = []
        r = np.arange(p, dtype=np.int64)
        # a != 0: a in 1..h, any b, c; d = (1 + b c) / a
        for a in range(1, h + 1):
            ainv = pow(a, -1, p)
            b, c = np.meshgrid(r, r, indexing="ij")
            b, c = b.ravel(), c.ravel()
            d = (1 + b * c) * ainv % p
            mats.append(np.stack([np.full(b.size, a), b, c, d], axis=1))
        # a == 0: b in 1..h, c = -1/b, any d
        for b in range(1, h + 1):
            c = (-pow(b, -1, p)) % p
            mats.append(np.stack([np.zeros(p, np.int64), np.full(p, b), np.full(p, c), r], axis=1))
        mats = np.concatenate(mats).astype(np.int64)
        codes = self._encode(mats)
        order = np.argsort(codes)
        self.mats = mats[order]
        self.codes = codes[order]
        if self.codes.size != self.order or np.any(np.diff(self.codes) <= 0):
            raise AssertionError("PSL(2,p) element list is inconsistent")
        self.identity = int(self._lookup(np.array([[1, 0, 0, 1]], dtype=np.int64))[0])

    def _encode(self, m):
        p = self.p
        return ((m[:, 0] * p + m[:, 1]) * p + m[:, 2]) * p + m[:, 3]

    def _lookup(self, m):
        return np.searchsorted(self.codes, self._encode(_canonical(m, self.p)))

    def _mul(self, a, b):
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        x = self.mats[a.ravel()]
        y = self.mats[b.ravel()]
        prod = np.stack([
            x[:, 0] * y[:, 0] + x[:, 1] * y[:, 2],
            x[:, 0] * y[:, 1] + x[:, 1] * y[:, 3],
            x[:, 2] * y[:, 0] + x[:, 3] * y[:, 2],
            x[:, 2] * y[:, 1] + x[:, 3] * y[:, 3],
        ], axis=1)
        return self._lookup(prod).reshape(shape)

    def _inv(self, a):
        shape = a.shape
        x = self.mats[a.ravel()]
        inv = np.stack([x[:, 3], -x[:, 1], -x[:, 2], x[:, 0]], axis=1)
        return self._lookup(inv).reshape(shape)

    def _orders(self):
        p = self.p
        table = _trace_order_table(p)
        lookup = np.zeros(p, dtype=np.int64)
        for tr, o in table.items():
            lookup[tr] = o
            lookup[(-tr) % p] = o
        tr = (self.mats[:, 0] + self.mats[:, 3]) % p
        out = lookup[tr]
        out[self.identity] = 1
        return out

    def describe(self, g):
        return tuple(int(v) for v in self.mats[int(g)])

    def element(self, g) -> MatrixGroupElement:
        return MatrixGroupElement(self.p, *self.describe(g))

    def locate(self, desc):
        m = np.array([list(desc)], dtype=np.int64)
        idx = int(self._lookup(m)[0])
        if idx >= self.order or self.codes[idx] != self._encode(_canonical(m, self.p))[0]:
            raise ValueError(f"{desc} is not an element of PSL(2,{self.p})")
        return idx


def realize_psl2(p: int, bound: int = DEFAULT_REALIZE_BOUND) -> PSL2Group:
    _check_p(p)
    if psl2_order(p) > bound:
        raise ResourceLimitError(f"PSL(2,{p}) has order {psl2_order(p)} > bound {bound}")
    return realize(Psl2(p), max_order=bound)


@dataclass(frozen=True)
class EpimorphismWitness:
    """Generators x, y of a group with |x|, |y|, |xy| as recorded."""
    group: object          # GroupSpec
    x: tuple
    y: tuple
    orders: tuple[int, int, int]

    def to_dict(self):
        return {"group": self.group.to_dict(), "x": _listify(self.x), "y": _listify(self.y),
                "orders": list(self.orders)}

    @classmethod
    def from_dict(cls, d):
        from .groups import spec_from_dict
        return cls(spec_from_dict(d["group"]), _tuplify(d["x"]), _tuplify(d["y"]),
                   tuple(int(v) for v in d["orders"]))


def _listify(x):
    return [_listify(v) for v in x] if isinstance(x, (tuple, list)) else x


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, (tuple, list)) else x


def find_smooth_generating_pair(group: FiniteGroup, tr: Triple, budget=None):
    """EpimorphismWitness for a smooth (r,s,t)-generating pair, or None."""
    r, s, t = tr
    hit = group.find_pair(r, s, t, exact=True, budget=budget)
    if hit is None:
        return None
    x, y = hit
    return EpimorphismWitness(group.spec, group.describe(x), group.describe(y), (r, s, t))


def check_epimorphism_witness(w: EpimorphismWitness, max_order=DEFAULT_REALIZE_BOUND) -> bool:
    g = realize(w.group, max_order=max_order)
    try:
        x, y = g.locate(w.x), g.locate(w.y)
    except (ValueError, KeyError):
        return False
    xy = int(g.mul(x, y))
    got = (g.element_order(x), g.element_order(y), g.element_order(xy))
    return got == tuple(w.orders) and g.generates([x, y])


def has_element_of_order(p: int, n: int) -> bool:
    return n in OrderSpectrum(p)

