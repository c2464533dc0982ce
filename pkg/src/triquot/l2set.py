"""L2-sets: the pairwise coprime decomposition of lcm(r,s,t) that governs
which PSL(2,p) are smooth quotients."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .arith import factorize
from .errors import PreconditionError
from .signature import Triple


@dataclass(frozen=True)
class L2Set:
    members: tuple[int, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, m):
        return m in self.members

    def member_divisible_by(self, q: int) -> int | None:
        for m in self.members:
            if m % q == 0:
                return m
        return None

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def l2_set(tr: Triple) -> L2Set:
    lcm = math.lcm(*tr)
    fact = factorize(lcm)
    primes = fact.primes
    parent = {p: p for p in primes}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for x in tr:
        ps = [p for p in primes if x % p == 0]
        for p in ps[1:]:
            a, b = find(ps[0]), find(p)
            if a != b:
                parent[b] = a
    classes: dict[int, int] = {}
    for p, e in fact:
        root = find(p)
        classes[root] = classes.get(root, 1) * p**e
    return L2Set(tuple(sorted(classes.values())))


@dataclass(frozen=True)
class L2Split:
    """Maximal prime powers q1, q2 of the common lcm that lie in different
    members m1, m2 of the L2-set of ``split_side`` while q1*q2 divides the
    member ``joined_member`` of the other triple's L2-set."""
    q1: int
    q2: int
    split_side: int      # 0 for the first triple, 1 for the second
    m1: int
    m2: int
    joined_member: int


def l2_split_witness(t1: Triple, t2: Triple) -> L2Split | None:
    lcm1, lcm2 = math.lcm(*t1), math.lcm(*t2)
    if lcm1 != lcm2:
        raise PreconditionError(f"lcm mismatch: {lcm1} != {lcm2}")
    sets = (l2_set(t1), l2_set(t2))
    if sets[0] == sets[1]:
        return None
    powers = factorize(lcm1).prime_powers()
    for split_side in (0, 1):
        split, joined = sets[split_side], sets[1 - split_side]
        for q1, q2 in combinations(powers, 2):
            jm = joined.member_divisible_by(q1 * q2)
            if jm is None:
                continue
            m1, m2 = split.member_divisible_by(q1), split.member_divisible_by(q2)
            if m1 != m2:
                return L2Split(q1, q2, split_side, m1, m2, jm)
    raise AssertionError(f"distinct L2-sets without a split: {sets}")
