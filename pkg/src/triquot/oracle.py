"""Brute-force ground truth: is an explicit finite group a quotient (or a
smooth quotient) of a triangle group?  Also homomorphism counting, the
order-gap non-quotient argument and the closed-form dihedral test."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factorize
from .errors import PreconditionError, ResourceLimitError
from .groups import (DEFAULT_REALIZE_BOUND, Dihedral, GeneratedSubgroup, GroupSpec,
                     is_cyclic_spec, realize)
from .psl2 import EpimorphismWitness
from .signature import Triple


@dataclass(frozen=True)
class OracleConfig:
    # largest group the pair search is run on (certificate verification)
    max_group_order: int = 10**4
    # largest group that may be realized at all
    max_realize_order: int = DEFAULT_REALIZE_BOUND
    # cap on closure tests per query; None means unlimited
    search_budget: int | None = 10**4

    def __post_init__(self):
        if self.max_group_order < 1 or self.max_realize_order < 1:
            raise ValueError("oracle bounds must be positive")
        if self.search_budget is not None and self.search_budget < 1:
            raise ValueError("search budget must be positive")

    def can_search(self, spec: GroupSpec) -> bool:
        try:
            n = spec.order()
        except PreconditionError:
            return False
        return n <= min(self.max_group_order, self.max_realize_order)


DEFAULT_ORACLE = OracleConfig()


@dataclass(frozen=True)
class OracleResult:
    value: bool
    witness: EpimorphismWitness | None = None

    def __bool__(self):
        return self.value


def _search(spec, tr, cfg, exact):
    cfg = cfg or DEFAULT_ORACLE
    if isinstance(spec, GeneratedSubgroup):
        raise PreconditionError("realize the parent group instead of a generated subgroup")
    if spec.order() > cfg.max_group_order:
        raise ResourceLimitError(
            f"{spec.label()} has order {spec.order()} > oracle bound {cfg.max_group_order}")
    r, s, t = tr
    # cheap spectrum pruning before any realization
    if exact and not all(n in spec.element_orders() for n in (r, s, t)):
        return OracleResult(False)
    group = realize(spec, max_order=cfg.max_realize_order)
    tests = 0
    for x, y in group.iter_pairs(r, s, t, exact):
        tests += 1
        if cfg.search_budget is not None and tests > cfg.search_budget:
            raise ResourceLimitError(f"closure-test budget {cfg.search_budget} exhausted "
                                     f"for {spec.label()} and {tr}")
        if group.generates([x, y]):
            xy = int(group.mul(x, y))
            orders = (group.element_order(x), group.element_order(y), group.element_order(xy))
            return OracleResult(True, EpimorphismWitness(spec, group.describe(x),
                                                         group.describe(y), orders))
    return OracleResult(False)


def is_quotient(spec: GroupSpec, tr: Triple, cfg: OracleConfig | None = None) -> OracleResult:
    """Is ``spec`` generated by x, y with |x| | r, |y| | s, |xy| | t?"""
    return _search(spec, tr, cfg, exact=False)


def is_smooth_quotient(spec: GroupSpec, tr: Triple, cfg: OracleConfig | None = None) -> OracleResult:
    """Is ``spec`` generated by x, y with |x| = r, |y| = s, |xy| = t?"""
    return _search(spec, tr, cfg, exact=True)


def hom_count(tr: Triple, spec: GroupSpec, cfg: OracleConfig | None = None) -> int:
    cfg = cfg or DEFAULT_ORACLE
    group = realize(spec, max_order=min(cfg.max_group_order, cfg.max_realize_order))
    return group.hom_count(*tr)


@dataclass(frozen=True)
class OrderGapProof:
    """``group`` has no nontrivial element of order dividing ``entry`` of
    ``triple``; any image of the triangle group in it is cyclic."""
    group: GroupSpec
    triple: Triple
    entry: int

    def to_dict(self):
        return {"kind": "order-gap", "group": self.group.to_dict(),
                "triple": list(self.triple.as_tuple()), "entry": self.entry}

    def check(self) -> bool:
        return (self.entry in self.triple.as_tuple()
                and not is_cyclic_spec(self.group)
                and self.group.orders_dividing(self.entry) == {1})


def certify_not_quotient_by_order_gap(spec: GroupSpec, tr: Triple) -> OrderGapProof | None:
    if isinstance(spec, GeneratedSubgroup):
        raise PreconditionError("order gap needs a symbolic spectrum")
    if is_cyclic_spec(spec):
        raise PreconditionError(f"{spec.label()} is cyclic; the order-gap argument does not apply")
    for m in tr:
        if spec.orders_dividing(m) == {1}:
            return OrderGapProof(spec, tr, m)
    return None


def dihedral_quotient_test(tr: Triple, m: int) -> bool:
    """Closed form: D_m is a quotient of Delta(tr) iff one entry is divisible
    by m and the other two are even."""
    if m < 3:
        raise ValueError("dihedral test needs m >= 3")
    e = tr.as_tuple()
    for i in range(3):
        others = [e[j] for j in range(3) if j != i]
        if e[i] % m == 0 and all(x % 2 == 0 for x in others):
            return True
    return False


def dihedral_quotient_brute(tr: Triple, m: int, cfg: OracleConfig | None = None) -> bool:
    return bool(is_quotient(Dihedral(m), tr, cfg))


def cyclic_smooth_generated(n: int, tr: Triple) -> bool:
    """Closed form for C_n being (r,s,t)-generated: at every prime the two
    largest exponents agree, and at 2 a positive maximum is attained
    exactly twice."""
    r, s, t = tr
    if math.lcm(r, s, t) != n:
        return False
    for p, _ in factorize(n):
        exps = []
        for x in (r, s, t):
            k = 0
            while x % p == 0:
                x //= p
                k += 1
            exps.append(k)
        exps.sort()
        if exps[1] != exps[2]:
            return False
        if p == 2 and exps[0] == exps[2] and exps[2] > 0:
            return False
    return True
