"""Symbolic finite groups (GroupSpec) and their explicit realizations.

A realized group is index based: elements are 0..order-1 and every
operation takes and returns numpy integer arrays, so searches over element
pairs vectorize.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import divisors, is_prime
from .errors import PreconditionError, ResourceLimitError

DEFAULT_REALIZE_BOUND = 10**7


# ----------------------------------------------------------------------------
# symbolic descriptions

class GroupSpec:
    """Base class of the symbolic group descriptions."""

    kind = "?"

    def order(self) -> int:
        raise NotImplementedError

    def element_orders(self) -> frozenset:
        raise NotImplementedError

    def orders_dividing(self, n: int) -> frozenset:
        return frozenset(o for o in self.element_orders() if n % o == 0)

    def label(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind}

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class Cyclic(GroupSpec):
    n: int
    kind = "cyclic"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("cyclic group order must be positive")

    def order(self):
        return self.n

    def element_orders(self):
        return frozenset(divisors(self.n))

    def orders_dividing(self, n):
        return frozenset(divisors(math.gcd(n, self.n)))

    def label(self):
        return f"C{self.n}"

    def to_dict(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class Dihedral(GroupSpec):
    """Dihedral group of order 2m."""
    m: int
    kind = "dihedral"

    def __post_init__(self):
        if self.m < 3:
            raise ValueError("dihedral group needs m >= 3")

    def order(self):
        return 2 * self.m

    def element_orders(self):
        return frozenset(divisors(self.m)) | {2}

    def label(self):
        return f"D{self.m}"

    def to_dict(self):
        return {"kind": self.kind, "m": self.m}


@dataclass(frozen=True)
class Alt4(GroupSpec):
    kind = "alt4"

    def order(self):
        return 12

    def element_orders(self):
        return frozenset({1, 2, 3})

    def label(self):
        return "A4"


@dataclass(frozen=True)
class Sym4(GroupSpec):
    kind = "sym4"

    def order(self):
        return 24

    def element_orders(self):
        return frozenset({1, 2, 3, 4})

    def label(self):
        return "S4"


@dataclass(frozen=True)
class Alt5(GroupSpec):
    kind = "alt5"

    def order(self):
        return 60

    def element_orders(self):
        return frozenset({1, 2, 3, 5})

    def label(self):
        return "A5"


@dataclass(frozen=True)
class C3xC3(GroupSpec):
    kind = "c3xc3"

    def order(self):
        return 9

    def element_orders(self):
        return frozenset({1, 3})

    def label(self):
        return "C3xC3"


@dataclass(frozen=True)
class Psl2(GroupSpec):
    p: int
    kind = "psl2"

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"PSL(2,p) needs a prime p >= 5, got {self.p}")

    def order(self):
        p = self.p
        return p * (p * p - 1) // 2

    def maximal_orders(self):
        p = self.p
        return (p, (p - 1) // 2, (p + 1) // 2)

    def element_orders(self):
        out = set()
        for m in self.maximal_orders():
            out.update(divisors(m))
        return frozenset(out)

    def orders_dividing(self, n):
        out = set()
        for m in self.maximal_orders():
            out.update(divisors(math.gcd(n, m)))
        return frozenset(out)

    def label(self):
        return f"PSL(2,{self.p})"

    def to_dict(self):
        return {"kind": self.kind, "p": self.p}


@dataclass(frozen=True)
class DirectProduct(GroupSpec):
    factors: tuple
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("direct product needs at least one factor")

    def order(self):
        return math.prod(f.order() for f in self.factors)

    def element_orders(self):
        out = {1}
        for f in self.factors:
            out = {math.lcm(a, b) for a in out for b in f.element_orders()}
        return frozenset(out)

    def orders_dividing(self, n):
        out = {1}
        for f in self.factors:
            out = {math.lcm(a, b) for a in out for b in f.orders_dividing(n)}
        return frozenset(out)

    def label(self):
        return " x ".join(f.label() if not isinstance(f, DirectProduct) else f"({f.label()})"
                          for f in self.factors)

    def to_dict(self):
        return {"kind": self.kind, "factors": [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class GeneratedSubgroup(GroupSpec):
    """Subgroup of ``parent`` generated by the described elements.

    ``generators`` holds, for each generator, the tuple of its component
    orders in the factors of ``parent`` (a DirectProduct).
    """
    parent: GroupSpec
    generators: tuple
    kind = "generated"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))

    def order(self):
        raise PreconditionError("order of a generated subgroup is known only after realization")

    def element_orders(self):
        raise PreconditionError("element orders of a generated subgroup need realization; "
                                "use the parent spectrum as an upper bound")

    def orders_dividing(self, n):
        raise PreconditionError("generated subgroup spectra need realization")

    def label(self):
        gens = ", ".join("(" + ",".join(map(str, g)) + ")" for g in self.generators)
        return f"<{gens}> in {self.parent.label()}"

    def to_dict(self):
        return {"kind": self.kind, "parent": self.parent.to_dict(),
                "generators": [list(g) for g in self.generators]}


_SIMPLE = {"alt4": Alt4, "sym4": Sym4, "alt5": Alt5, "c3xc3": C3xC3}


def spec_from_dict(d: dict) -> GroupSpec:
    kind = d["kind"]
    if kind in _SIMPLE:
        return _SIMPLE[kind]()
    if kind == "cyclic":
        return Cyclic(int(d["n"]))
    if kind == "dihedral":
        return Dihedral(int(d["m"]))
    if kind == "psl2":
        return Psl2(int(d["p"]))
    if kind == "product":
        return DirectProduct(tuple(spec_from_dict(f) for f in d["factors"]))
    if kind == "generated":
        return GeneratedSubgroup(spec_from_dict(d["parent"]),
                                 tuple(tuple(int(x) for x in g) for g in d["generators"]))
    raise ValueError(f"unknown group kind {kind!r}")


def element_orders(spec: GroupSpec) -> frozenset:
    return spec.element_orders()


def has_element_of_order(spec: GroupSpec, n: int) -> bool:
    if n < 1:
        return False
    return n in spec.orders_dividing(n)


def is_cyclic_spec(spec: GroupSpec) -> bool:
    if isinstance(spec, Cyclic):
        return True
    if isinstance(spec, DirectProduct):
        if not all(is_cyclic_spec(f) for f in spec.factors):
            return False
        orders = [f.order() for f in spec.factors]
        return math.prod(orders) == math.lcm(*orders)
    return False


# ----------------------------------------------------------------------------
# realizations

class FiniteGroup:
    """Index-based finite group.  Subclasses provide ``_mul``, ``_inv``,
    ``_orders``, ``describe`` and ``locate``."""

    spec: GroupSpec
    order: int
    identity: int
    is_abelian = False

    def mul(self, a, b):
        return self._mul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def inv(self, a):
        return self._inv(np.asarray(a, dtype=np.int64))

    @property
    def orders(self) -> np.ndarray:
        if getattr(self, "_orders_cache", None) is None:
            self._orders_cache = self._orders()
        return self._orders_cache

    def _orders(self):
        # generic: repeated multiplication
        n = self.order
        allel = np.arange(n, dtype=np.int64)
        out = np.zeros(n, dtype=np.int64)
        cur = allel.copy()
        k = 1
        while True:
            done = (cur == self.identity) & (out == 0)
            out[done] = k
            if (out > 0).all():
                return out
            cur = self.mul(cur, allel)
            k += 1

    @property
    def is_cyclic(self) -> bool:
        return self.is_abelian and int(self.orders.max()) == self.order

    def element_order(self, g) -> int:
        return int(self.orders[int(g)])

    def closure_size(self, gens, stop_above=None) -> int:
        """Size of the subgroup generated by ``gens`` (breadth-first), or a
        value > stop_above as soon as the closure exceeds it."""
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        count = 1
        while frontier.size:
            cand = np.unique(self.mul(frontier[:, None], gens[None, :]).ravel())
            cand = cand[~seen[cand]]
            seen[cand] = True
            count += cand.size
            if stop_above is not None and count > stop_above:
                return count
            frontier = cand
        return count

    def generates(self, gens) -> bool:
        # a subgroup with more than half the elements is the whole group
        return 2 * self.closure_size(gens, stop_above=self.order // 2) > self.order

    def conjugacy_classes(self):
        """List of (representative, size); representative = least index."""
        if getattr(self, "_classes", None) is None:
            if self.is_abelian:
                self._classes = [(g, 1) for g in range(self.order)]
            else:
                allel = np.arange(self.order, dtype=np.int64)
                invs = self.inv(allel)
                assigned = np.zeros(self.order, dtype=bool)
                classes = []
                for g in range(self.order):
                    if assigned[g]:
                        continue
                    cls = np.unique(self.mul(self.mul(allel, g), invs))
                    assigned[cls] = True
                    classes.append((g, int(cls.size)))
                self._classes = classes
        return self._classes

    def elements_with_order(self, pred) -> np.ndarray:
        return np.flatnonzero(pred(self.orders)).astype(np.int64)

    def iter_pairs(self, r, s, t, exact, budget=None):
        """Yield (x, y) with order conditions on x, y, xy, x running over
        conjugacy-class representatives and pairs in canonical order.
        Pairs that cannot generate a non-cyclic group are skipped."""
        if exact:
            def match(o, n):
                return o == n
        else:
            def match(o, n):
                return n % o == 0
        reps = [g for g, _ in self.conjugacy_classes() if match(int(self.orders[g]), r)]
        ys = np.flatnonzero(match(self.orders, s)).astype(np.int64)
        cyclic = self.is_cyclic
        examined = 0
        for x in reps:
            if ys.size == 0:
                return
            if not cyclic and x == self.identity:
                continue
            examined += ys.size
            if budget is not None and examined > budget:
                raise ResourceLimitError(f"pair search budget {budget} exhausted in {self.spec}")
            prods = self.mul(x, ys)
            keep = match(self.orders[prods], t)
            if not cyclic:
                keep &= (ys != self.identity) & (prods != self.identity)
                if not self.is_abelian:
                    keep &= prods != self.mul(ys, x)
            for y in ys[keep]:
                yield int(x), int(y)

    def find_pair(self, r, s, t, exact, budget=None):
        for x, y in self.iter_pairs(r, s, t, exact, budget):
            if self.generates([x, y]):
                return x, y
        return None

    def hom_count(self, r, s, t) -> int:
        """Number of (x, y) with |x| | r, |y| | s, |xy| | t."""
        ys = np.flatnonzero(s % self.orders == 0).astype(np.int64)
        total = 0
        for x, size in self.conjugacy_classes():
            if r % int(self.orders[x]):
                continue
            prods = self.mul(x, ys)
            total += size * int(np.count_nonzero(t % self.orders[prods] == 0))
        return total

    def describe(self, g):
        raise NotImplementedError

    def locate(self, desc) -> int:
        raise NotImplementedError


class CyclicGroup(FiniteGroup):
    is_abelian = True

    def __init__(self, n, spec=None):
        self.spec = spec or Cyclic(n)
        self.order = n
        self.identity = 0

    def _mul(self, a, b):
        return (a + b) % self.order

    def _inv(self, a):
        return (-a) % self.order

    def _orders(self):
        a = np.arange(self.order, dtype=np.int64)
        return self.order // np.gcd(a, self.order)

    def describe(self, g):
        return (int(g),)

    def locate(self, desc):
        return int(desc[0]) % self.order


class DihedralGroup(FiniteGroup):
    """Index k + m*f stands for rho^k sigma^f, sigma rho sigma = rho^-1."""

    def __init__(self, m, spec=None):
        self.spec = spec or Dihedral(m)
        self.m = m
        self.order = 2 * m
        self.identity = 0

    def _split(self, a):
        return a % self.m, a // self.m

    def _mul(self, a, b):
        k1, f1 = self._split(a)
        k2, f2 = self._split(b)
        k = np.where(f1 == 0, k1 + k2, k1 - k2) % self.m
        return k + self.m * (f1 ^ f2)

    def _inv(self, a):
        k, f = self._split(a)
        return np.where(f == 0, (-k) % self.m, k) + self.m * f

    def _orders(self):
        k = np.arange(self.m, dtype=np.int64)
        rot = self.m // np.gcd(k, self.m)
        return np.concatenate([rot, np.full(self.m, 2, dtype=np.int64)])

    def describe(self, g):
        return tuple(int(v) for v in self._split(int(g)))

    def locate(self, desc):
        return int(desc[0]) % self.m + self.m * int(desc[1])


class TableGroup(FiniteGroup):
    """Small permutation group stored as a full Cayley table."""

    def __init__(self, spec, generators):
        degree = len(generators[0])
        ident = tuple(range(degree))
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for h in generators:
                    gh = tuple(h[g[i]] for i in range(degree))  # apply g, then h
                    if gh not in elems:
                        elems.add(gh)
                        nxt.append(gh)
            frontier = nxt
        self.elements = sorted(elems)
        index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                table[i, j] = index[tuple(h[g[k]] for k in range(degree))]
        self._index = index
        self.table = table
        self.spec = spec
        self.order = n
        self.identity = index[ident]
        self.is_abelian = bool((table == table.T).all())
        self._inverse = np.argmax(table == self.identity, axis=1).astype(np.int64)

    def _mul(self, a, b):
        return self.table[a, b]

    def _inv(self, a):
        return self._inverse[a]

    def describe(self, g):
        return self.elements[int(g)]

    def locate(self, desc):
        return self._index[tuple(int(v) for v in desc)]


class ProductGroup(FiniteGroup):
    """Direct product; index = mixed radix over the factor indices."""

    def __init__(self, spec, factors):
        self.spec = spec
        self.factors = list(factors)
        self.sizes = [f.order for f in self.factors]
        self.order = math.prod(self.sizes)
        self.is_abelian = all(f.is_abelian for f in self.factors)
        radix = []
        acc = 1
        for n in reversed(self.sizes):
            radix.append(acc)
            acc *= n
        self.radix = list(reversed(radix))
        self.identity = self._join([f.identity for f in self.factors])

    def _split(self, a):
        return [(a // w) % n for w, n in zip(self.radix, self.sizes)]

    def _join(self, parts):
        out = 0
        for w, p in zip(self.radix, parts):
            out = out + w * np.asarray(p, dtype=np.int64)
        return out if np.ndim(out) else int(out)

    def _mul(self, a, b):
        pa, pb = self._split(a), self._split(b)
        return self._join([f.mul(x, y) for f, x, y in zip(self.factors, pa, pb)])

    def _inv(self, a):
        return self._join([f.inv(x) for f, x in zip(self.factors, self._split(a))])

    def _orders(self):
        allel = np.arange(self.order, dtype=np.int64)
        out = np.ones(self.order, dtype=np.int64)
        for f, part in zip(self.factors, self._split(allel)):
            out = np.lcm(out, f.orders[part])
        return out

    def describe(self, g):
        return tuple(f.describe(int(x)) for f, x in zip(self.factors, self._split(int(g))))

    def locate(self, desc):
        return int(self._join([f.locate(d) for f, d in zip(self.factors, desc)]))


_PERM_GENERATORS = {
    "alt4": [(1, 2, 0, 3), (1, 0, 3, 2)],
    "sym4": [(1, 0, 2, 3), (1, 2, 3, 0)],
    "alt5": [(1, 2, 0, 3, 4), (1, 2, 3, 4, 0)],
}


@lru_cache(maxsize=64)
def _realize_cached(spec: GroupSpec) -> FiniteGroup:
    if isinstance(spec, Cyclic):
        return CyclicGroup(spec.n, spec)
    if isinstance(spec, Dihedral):
        return DihedralGroup(spec.m, spec)
    if isinstance(spec, C3xC3):
        return ProductGroup(spec, [CyclicGroup(3), CyclicGroup(3)])
    if spec.kind in _PERM_GENERATORS:
        return TableGroup(spec, _PERM_GENERATORS[spec.kind])
    if isinstance(spec, Psl2):
        from .psl2 import PSL2Group
        return PSL2Group(spec.p)
    if isinstance(spec, DirectProduct):
        return ProductGroup(spec, [_realize_cached(f) for f in spec.factors])
    raise PreconditionError(f"{spec.label()} cannot be realized directly")


def realize(spec: GroupSpec, max_order: int = DEFAULT_REALIZE_BOUND) -> FiniteGroup:
    if isinstance(spec, GeneratedSubgroup):
        raise PreconditionError("realize the parent group instead of a generated subgroup")
    order = spec.order()
    if order > max_order:
        raise ResourceLimitError(f"{spec.label()} has order {order} > realization bound {max_order}")
    return _realize_cached(spec)
