"""The staged distinguishing pipeline and independent certificate checking.

Stages, cheapest first:

    0  identical multisets
    1  invariant mismatch (gcd, abelianization, product, lcm, pairwise sum, Euler sum)
    2  dihedral quotient
    3  L2-set split -> PSL(2,p)
    4  suppression of an entry q -> nondivisor quotient of the reduced triple
    5  q1*q2 direct product -> smooth generation separation

Side indices in certificates refer to the argument order (0 = first triple).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _iproduct

from .arith import (InconsistentCongruences, ResidueConstraint, divisors, factorize, find_prime,
                    is_prime, largest_divisor_not_divisible_by)
from .errors import PreconditionError, ResourceLimitError
from .groups import (Alt4, Alt5, C3xC3, Cyclic, Dihedral, DirectProduct, GeneratedSubgroup,
                     GroupSpec, Psl2, Sym4, realize)
from .l2set import L2Split, l2_set, l2_split_witness
from .oracle import (OracleConfig, OrderGapProof, certify_not_quotient_by_order_gap,
                     cyclic_smooth_generated, dihedral_quotient_test, is_quotient,
                     is_smooth_quotient)
from .psl2 import EpimorphismWitness, check_epimorphism_witness, macbeath_generated
from .signature import Triple, invariant_profile, is_exceptional, is_hyperbolic

SMOOTH_DEPENDENCY = "same-smooth-quotients"
STAGE_NAMES = ("identical", "invariants", "dihedral", "l2-split", "suppression", "direct-product")


@dataclass(frozen=True)
class DistinguishConfig:
    oracle: OracleConfig = field(default_factory=OracleConfig)
    prime_bound: int | None = None
    # rank every applicable stage instead of returning the first success
    strongest: bool = False
    # try composite suppressed entries (all prime factors blocked)
    extended_suppression: bool = True


# ----------------------------------------------------------------------------
# certificate variants

@dataclass(frozen=True)
class Identical:
    kind = "identical"
    stage = 0


@dataclass(frozen=True)
class InvariantMismatch:
    field: str
    value1: object
    value2: object
    kind = "invariant-mismatch"
    stage = 1


@dataclass(frozen=True)
class DihedralWitness:
    m: int
    side: int      # the side admitting D_m
    kind = "dihedral"
    stage = 2


@dataclass(frozen=True)
class PslQuotientWitness:
    p: int
    quotient_side: int
    epimorphism: EpimorphismWitness | None
    nonquotient: str        # "order-gap" or "oracle"
    gap_entry: int | None
    constraints: tuple = ()
    kind = "psl-quotient"
    stage = 3


@dataclass(frozen=True)
class SuppressionWitness:
    q: int
    quotient_side: int      # the side whose entries were reduced
    reduced: Triple
    group: GroupSpec
    basis: str              # how G is shown to be a quotient of the reduced triple
    constraints: tuple = ()
    extended_scope: bool = False
    kind = "suppression"
    stage = 4


@dataclass(frozen=True)
class DivisorSplit:
    q1: int
    q2: int
    m1: int
    m2: int
    first: tuple            # (r1, s1, t1), aligned with the smooth side's entries
    second: tuple           # (r2, s2, t2)
    component: GroupSpec    # the (r2,s2,t2)-generated factor
    component_basis: str
    component_constraints: tuple = ()


@dataclass(frozen=True)
class SmoothGenerationWitness:
    group: GroupSpec
    smooth_side: int
    blocked_order: int
    blocked_entry: int | None
    primes: tuple
    origin: int             # pipeline stage, 3 or 5
    split: DivisorSplit | None = None
    l2: L2Split | None = None
    constraints: tuple = ()
    depends_on: str = SMOOTH_DEPENDENCY
    kind = "smooth-generation"

    @property
    def stage(self):
        return self.origin


@dataclass(frozen=True)
class Unresolved:
    attempts: tuple         # (stage name, note) pairs
    kind = "unresolved"
    stage = 6


Certificate = (Identical, InvariantMismatch, DihedralWitness, PslQuotientWitness,
               SuppressionWitness, SmoothGenerationWitness, Unresolved)

# preference order in strongest mode
_RANK = {"identical": 0, "invariant-mismatch": 1, "dihedral": 2, "psl-quotient": 3,
         "suppression": 4, "smooth-generation": 5}


# ----------------------------------------------------------------------------
# helpers

def _strip(x: int, primes) -> int:
    for p in primes:
        while x % p == 0:
            x //= p
    return x


def _is_coprime_triple(tr: Triple) -> bool:
    """Some entry is coprime to each of the other two."""
    r, s, t = tr
    return math.gcd(r, s * t) == 1 or math.gcd(s, r * t) == 1 or math.gcd(t, r * s) == 1


def coprime_flag(t1: Triple, t2: Triple) -> bool:
    return _is_coprime_triple(t1) or _is_coprime_triple(t2)


# small groups for triples outside the PSL(2,p) criterion
EXCEPTIONAL_TABLE = {
    (2, 3, 3): Alt4(),
    (2, 3, 4): Sym4(),
    (3, 4, 4): Sym4(),
    (2, 3, 5): Alt5(),
    (2, 5, 5): Alt5(),
    (3, 3, 5): Alt5(),
    (3, 5, 5): Alt5(),
    (5, 5, 5): Alt5(),
    (3, 3, 3): C3xC3(),
}


def _macbeath_ok(tr: Triple) -> bool:
    return is_hyperbolic(tr) and not is_exceptional(tr)


def _find(constraints, cfg, min_value=5):
    try:
        return find_prime(constraints, bound=cfg.prime_bound, min_value=min_value)
    except InconsistentCongruences:
        return None


def _blocks(spec: GroupSpec, n: int) -> bool:
    """No element order of spec is divisible by n."""
    return all(o % n for o in spec.element_orders())


# ----------------------------------------------------------------------------
# stages

def _stage_identical(t1, t2, cfg):
    return Identical() if t1 == t2 else None


def _stage_invariants(t1, t2, cfg):
    diff = invariant_profile(t1).first_difference(invariant_profile(t2))
    if diff is None:
        return None
    return InvariantMismatch(*diff)


def _dihedral_candidates(t1, t2):
    a, b = t1.as_tuple(), t2.as_tuple()
    out = []
    for x, y in ((a, b), (b, a)):
        if sum(1 for e in x if e % 2 == 0) >= 2:
            if all(e % 2 == 0 for e in x):
                out.append(max(x[2], y[2]))
            else:
                odd = [e for e in a + b if e % 2]
                if odd:
                    out.append(max(odd))
    out.extend(sorted(set(a + b), reverse=True))
    seen, uniq = set(), []
    for m in out:
        if m >= 3 and m not in seen:
            seen.add(m)
            uniq.append(m)
    return uniq


def _stage_dihedral(t1, t2, cfg):
    for m in _dihedral_candidates(t1, t2):
        a, b = dihedral_quotient_test(t1, m), dihedral_quotient_test(t2, m)
        if a != b:
            return DihedralWitness(m, 0 if a else 1)
    return None


def _l2_constraints(members, m1):
    """p = 1 mod 2*m1 and p = -1 mod 2*n for the other members."""
    return tuple(ResidueConstraint(2 * m, frozenset({1 if m == m1 else 2 * m - 1}))
                 for m in members)


def _stage_l2(t1, t2, cfg):
    split = l2_split_witness(t1, t2)
    if split is None:
        return None
    side = split.split_side
    tri = (t1, t2)
    a, b = tri[side], tri[1 - side]
    if not (_macbeath_ok(a) and _macbeath_ok(b)):
        return None
    constraints = _l2_constraints(l2_set(a).members, split.m1)
    p = _find(constraints, cfg)
    if p is None:
        return None
    spec = Psl2(p)
    if not macbeath_generated(p, a) or macbeath_generated(p, b):
        raise AssertionError(f"L2 split prime {p} does not separate {a} and {b}")
    gap = certify_not_quotient_by_order_gap(spec, b)
    oracle_ok = cfg.oracle.can_search(spec)
    if gap is not None or (oracle_ok and _oracle_try(is_quotient, spec, b, cfg.oracle) is False):
        epi = is_smooth_quotient(spec, a, cfg.oracle).witness if oracle_ok else None
        return PslQuotientWitness(p, side, epi, "order-gap" if gap else "oracle",
                                  gap.entry if gap else None, constraints)
    blocked_entry = next((e for e in b if e not in spec.element_orders()), None)
    return SmoothGenerationWitness(spec, side, split.q1 * split.q2, blocked_entry, (p,), 3,
                                   l2=split, constraints=constraints)


def _suppression_group(reduced: Triple, qprimes, cfg):
    """(G, basis, constraints): a quotient of Delta(reduced) with no element of
    order divisible by any prime in qprimes, or None."""
    key = reduced.as_tuple()
    if key in EXCEPTIONAL_TABLE:
        return EXCEPTIONAL_TABLE[key], "table", ()
    if key[0] == key[1] == 2 and key[2] >= 3:
        return Dihedral(key[2]), "dihedral", ()
    if not _macbeath_ok(reduced):
        return None
    constraints = [ResidueConstraint(2 * m, frozenset({1, 2 * m - 1})) for m in l2_set(reduced)]
    for ell in qprimes:
        constraints.append(ResidueConstraint(2 * ell, None, frozenset({1, 2 * ell - 1})))
        constraints.append(ResidueConstraint(ell, None, frozenset({0})))
    constraints = tuple(constraints)
    p = _find(constraints, cfg)
    if p is None:
        return None
    return Psl2(p), "macbeath", constraints


def _suppression_candidates(t1, t2, extended):
    passes = (False, True) if extended else (False,)
    for composite in passes:
        for side, tr in enumerate((t1, t2)):
            for q in sorted(set(tr)):
                if math.gcd(q, 6) != 1 or is_prime(q) == composite:
                    continue
                yield side, q, composite


def _stage_suppression(t1, t2, cfg):
    tri = (t1, t2)
    for side, q, composite in _suppression_candidates(t1, t2, cfg.extended_suppression):
        qprimes = factorize(q).primes
        other = tri[1 - side]
        red = [_strip(x, qprimes) for x in other]
        if min(red) < 2:
            continue
        reduced = Triple(*red)
        found = _suppression_group(reduced, qprimes, cfg)
        if found is None:
            continue
        group, basis, constraints = found
        if group.orders_dividing(q) != {1}:
            continue
        return SuppressionWitness(q, 1 - side, reduced, group, basis, constraints, composite)
    return None


def _component_group(t2: tuple, q1: int, q2: int, cfg):
    """A (r2,s2,t2)-generated group with no element order divisible by q1 or
    q2: (spec, basis, constraints) or None."""
    tr = Triple(*t2)
    key = tr.as_tuple()
    cands = []
    if key in EXCEPTIONAL_TABLE:
        cands.append((EXCEPTIONAL_TABLE[key], "table", ()))
    if key[0] == key[1] == 2 and key[2] >= 3:
        cands.append((Dihedral(key[2]), "dihedral", ()))
    for spec, basis, cons in cands:
        if _blocks(spec, q1) and _blocks(spec, q2):
            return spec, basis, cons
    if _macbeath_ok(tr):
        constraints = [ResidueConstraint(2 * m, frozenset({1, 2 * m - 1})) for m in l2_set(tr)]
        for q in (q1, q2):
            constraints.append(ResidueConstraint(2 * q, None, frozenset({1, 2 * q - 1})))
            if is_prime(q):
                constraints.append(ResidueConstraint(q, None, frozenset({0})))
        constraints = tuple(constraints)
        p = _find(constraints, cfg)
        if p is not None:
            spec = Psl2(p)
            if _blocks(spec, q1) and _blocks(spec, q2):
                return spec, "macbeath", constraints
    n = math.lcm(*key)
    if n % q1 and n % q2 and cyclic_smooth_generated(n, tr):
        return Cyclic(n), "cyclic", ()
    return None


def _sign_constraints(members, m1, sign):
    out = []
    for m in members:
        plus = (m1 % m == 0) == (sign > 0)
        out.append(ResidueConstraint(2 * m, frozenset({1 if plus else 2 * m - 1})))
    return out


def _entry_options(x, q1, q2, m1, m2):
    if x % q1 == 0:
        x1, g = math.gcd(x, m1), math.gcd(x, m2)
        return [(x1, g if g > 1 else largest_divisor_not_divisible_by(x, q1))]
    if x % q2 == 0:
        x1, g = math.gcd(x, m2), math.gcd(x, m1)
        return [(x1, g if g > 1 else largest_divisor_not_divisible_by(x, q2))]
    g1, g2 = math.gcd(x, m1), math.gcd(x, m2)
    if g1 > 1 and g2 > 1:
        return [(g1, g2), (g2, g1)]
    return [(x, x)]


def _direct_product_attempt(a: Triple, q1: int, q2: int, cfg):
    lcm = math.lcm(*a)
    fact = factorize(lcm)
    p1 = {p for p in fact.primes if q1 % p == 0}
    p2 = {p for p in fact.primes if q2 % p == 0}
    others = [p for p in fact.primes if p not in p1 and p not in p2]
    power = dict(fact.factors)
    for mask in range(1 << len(others)):
        m1 = math.prod(p**power[p] for p in p1)
        m1 *= math.prod(others[i]**power[others[i]] for i in range(len(others)) if mask >> i & 1)
        m2 = lcm // m1
        opts = [_entry_options(x, q1, q2, m1, m2) for x in a]
        for choice in _iproduct(*opts):
            first = tuple(c[0] for c in choice)
            second = tuple(c[1] for c in choice)
            if min(second) < 2 or min(first) < 2:
                continue
            tr1 = Triple(*first)
            if not _macbeath_ok(tr1):
                continue
            if any(m % q1 == 0 or m % q2 == 0 for m in l2_set(Triple(*second))):
                continue
            members = l2_set(tr1).members
            forbid = ResidueConstraint(2 * q1 * q2, None, frozenset({1, 2 * q1 * q2 - 1}))
            for sign in (1, -1):
                constraints = tuple(_sign_constraints(members, m1, sign) + [forbid])
                p = _find(constraints, cfg)
                if p is None or not macbeath_generated(p, tr1):
                    continue
                comp = _component_group(second, q1, q2, cfg)
                if comp is None:
                    break
                g, basis, comp_cons = comp
                split = DivisorSplit(q1, q2, m1, m2, first, second, g, basis, comp_cons)
                prod = DirectProduct((Psl2(p), g))
                if q1 * q2 in prod.orders_dividing(q1 * q2):
                    continue
                primes = (p,) + ((g.p,) if isinstance(g, Psl2) else ())
                return split, prod, primes, constraints
    return None


def _q1q2_candidates(a: Triple, b: Triple):
    """(q1, q2, entry of b) with q1, q2 > 3 coprime, q1 q2 dividing that
    entry of b and no entry of a, and no entry of a a prime equal to q1 or q2."""
    prime_entries = {x for x in a if is_prime(x)}
    for y in sorted(set(b)):
        for d in divisors(y):
            if d < 20 or any(x % d == 0 for x in a):
                continue
            pp = factorize(d).prime_powers()
            for mask in range(1, (1 << len(pp)) - 1):
                q1 = math.prod(pp[i] for i in range(len(pp)) if mask >> i & 1)
                q2 = d // q1
                if q1 > q2 or q1 <= 3 or q2 <= 3:
                    continue
                if q1 in prime_entries or q2 in prime_entries:
                    continue
                yield q1, q2, y


def _stage_direct_product(t1, t2, cfg):
    tri = (t1, t2)
    for side in (0, 1):
        a, b = tri[side], tri[1 - side]
        for q1, q2, y in _q1q2_candidates(a, b):
            got = _direct_product_attempt(a, q1, q2, cfg)
            if got is None:
                continue
            split, prod, primes, constraints = got
            gens = (tuple(split.first), tuple(split.second))
            sub = GeneratedSubgroup(prod, ((gens[0][0], gens[1][0]), (gens[0][1], gens[1][1])))
            return SmoothGenerationWitness(sub, side, q1 * q2, y, primes, 5, split=split,
                                           constraints=constraints)
    return None


STAGES = (
    ("identical", _stage_identical),
    ("invariants", _stage_invariants),
    ("dihedral", _stage_dihedral),
    ("l2-split", _stage_l2),
    ("suppression", _stage_suppression),
    ("direct-product", _stage_direct_product),
)


def _check_input(t1, t2):
    for tr in (t1, t2):
        if not isinstance(tr, Triple):
            raise TypeError("distinguish expects Triple arguments")
        if not is_hyperbolic(tr):
            raise PreconditionError(f"{tr} is not hyperbolic")


def run_stages(t1: Triple, t2: Triple, cfg: DistinguishConfig | None = None,
               stages=None, first_only=True):
    """Run the named stages (default: all) and return [(name, cert or None, note)]."""
    cfg = cfg or DistinguishConfig()
    _check_input(t1, t2)
    out = []
    for name, fn in STAGES:
        if stages is not None and name not in stages:
            continue
        try:
            cert = fn(t1, t2, cfg)
            note = "ok" if cert is not None else "not applicable"
        except ResourceLimitError as exc:
            cert, note = None, f"resource limit: {exc}"
        out.append((name, cert, note))
        if cert is not None and first_only:
            break
    return out


def distinguish(t1: Triple, t2: Triple, cfg: DistinguishConfig | None = None):
    cfg = cfg or DistinguishConfig()
    results = run_stages(t1, t2, cfg, first_only=not cfg.strongest)
    found = [c for _, c, _ in results if c is not None]
    if not found:
        return Unresolved(tuple((name, note) for name, _, note in results))
    if isinstance(found[0], Identical) or not cfg.strongest:
        return found[0]
    return min(found, key=lambda c: (_RANK[c.kind], c.stage))


# ----------------------------------------------------------------------------
# verification

@dataclass
class Verdict:
    ok: bool
    reasons: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class _Checker:
    def __init__(self):
        self.reasons = []

    def require(self, cond, msg):
        if not cond:
            self.reasons.append(msg)
        return bool(cond)

    def verdict(self):
        return Verdict(not self.reasons, self.reasons)


def _profile_value(tr, name):
    return getattr(invariant_profile(tr), name)


def _oracle_try(fn, *args):
    """Run an oracle query; None when it exceeds the configured bounds."""
    try:
        return bool(fn(*args))
    except ResourceLimitError:
        return None


def _check_generated(ck, spec, basis, tr: Triple, cfg, what):
    if basis == "table":
        res = _oracle_try(is_smooth_quotient, spec, tr, cfg.oracle)
        ck.require(res is True, f"{spec} is not {tr}-generated ({what})")
    elif basis == "dihedral":
        ck.require(isinstance(spec, Dihedral) and tr.as_tuple() == (2, 2, spec.m),
                   f"{spec} is not the (2,2,m) dihedral group of {tr} ({what})")
    elif basis == "macbeath":
        ck.require(isinstance(spec, Psl2) and _macbeath_ok(tr) and macbeath_generated(spec.p, tr),
                   f"{spec} fails the PSL(2,p) criterion for {tr} ({what})")
    elif basis == "cyclic":
        ck.require(isinstance(spec, Cyclic) and cyclic_smooth_generated(spec.n, tr),
                   f"{spec} is not {tr}-generated ({what})")
    else:
        ck.require(False, f"unknown basis {basis!r} ({what})")


def _check_constraints(ck, p, constraints):
    for c in constraints:
        ck.require(c.admits(p), f"p = {p} violates {c.describe()}")


def verify(cert, t1: Triple, t2: Triple, cfg: DistinguishConfig | None = None) -> Verdict:
    cfg = cfg or DistinguishConfig()
    ck = _Checker()
    tri = (t1, t2)
    try:
        _verify(ck, cert, tri, cfg)
    except (PreconditionError, ValueError, KeyError, TypeError, IndexError) as exc:
        ck.require(False, f"malformed certificate: {exc}")
    return ck.verdict()


def _verify(ck, cert, tri, cfg):
    t1, t2 = tri
    kind = getattr(cert, "kind", None)
    if kind == "identical":
        ck.require(t1 == t2, f"{t1} and {t2} differ")
    elif kind == "invariant-mismatch":
        v1, v2 = _profile_value(t1, cert.field), _profile_value(t2, cert.field)
        ck.require(cert.field in invariant_profile(t1).COMPARED, f"{cert.field} is not a compared invariant")
        ck.require(v1 == cert.value1, f"{cert.field} of {t1} is {v1}, certificate says {cert.value1}")
        ck.require(v2 == cert.value2, f"{cert.field} of {t2} is {v2}, certificate says {cert.value2}")
        ck.require(v1 != v2, f"{cert.field} agrees on both triples")
    elif kind == "dihedral":
        _verify_dihedral(ck, cert, tri, cfg)
    elif kind == "psl-quotient":
        _verify_psl(ck, cert, tri, cfg)
    elif kind == "suppression":
        _verify_suppression(ck, cert, tri, cfg)
    elif kind == "smooth-generation":
        if cert.origin == 3:
            _verify_smooth_psl(ck, cert, tri, cfg)
        else:
            _verify_smooth_product(ck, cert, tri, cfg)
    elif kind == "unresolved":
        ck.require(False, "unresolved certificates prove nothing")
    else:
        ck.require(False, f"unknown certificate kind {kind!r}")


def _verify_dihedral(ck, cert, tri, cfg):
    m, side = cert.m, cert.side
    ck.require(side in (0, 1), "side must be 0 or 1")
    ck.require(dihedral_quotient_test(tri[side], m), f"D{m} is not a quotient of {tri[side]}")
    ck.require(not dihedral_quotient_test(tri[1 - side], m), f"D{m} is a quotient of {tri[1 - side]}")
    spec = Dihedral(m)
    if cfg.oracle.can_search(spec):
        ck.require(_oracle_try(is_quotient, spec, tri[side], cfg.oracle) is True,
                   f"oracle: D{m} is not a quotient of {tri[side]}")
        ck.require(_oracle_try(is_quotient, spec, tri[1 - side], cfg.oracle) is False,
                   f"oracle: D{m} is a quotient of {tri[1 - side]}")


def _verify_psl(ck, cert, tri, cfg):
    p, side = cert.p, cert.quotient_side
    spec = Psl2(p)
    a, b = tri[side], tri[1 - side]
    _check_constraints(ck, p, cert.constraints)
    ck.require(_macbeath_ok(a) and macbeath_generated(p, a), f"PSL(2,{p}) is not {a}-generated")
    if cert.epimorphism is not None:
        ck.require(cert.epimorphism.group == spec and tuple(cert.epimorphism.orders) == a.as_tuple(),
                   "epimorphism witness does not match the claim")
        ck.require(check_epimorphism_witness(cert.epimorphism), "epimorphism witness fails recomputation")
    if cert.nonquotient == "order-gap":
        ck.require(cert.gap_entry is not None and OrderGapProof(spec, b, cert.gap_entry).check(),
                   f"no order gap at entry {cert.gap_entry} of {b} in PSL(2,{p})")
    elif cert.nonquotient != "oracle":
        ck.require(False, f"unknown non-quotient proof {cert.nonquotient!r}")
    if cfg.oracle.can_search(spec):
        ck.require(_oracle_try(is_quotient, spec, a, cfg.oracle) is True,
                   f"oracle: PSL(2,{p}) is not a quotient of {a}")
        ck.require(_oracle_try(is_quotient, spec, b, cfg.oracle) is False,
                   f"oracle: PSL(2,{p}) is a quotient of {b}")
    else:
        ck.require(cert.nonquotient == "order-gap", f"PSL(2,{p}) is beyond the oracle bound")


def _verify_suppression(ck, cert, tri, cfg):
    q, side = cert.q, cert.quotient_side
    b, a = tri[side], tri[1 - side]      # reduced side b, suppressed entry q in a
    ck.require(q in a.as_tuple(), f"{q} is not an entry of {a}")
    ck.require(math.gcd(q, 6) == 1, f"{q} is not coprime to 6")
    qprimes = factorize(q).primes
    ck.require(is_prime(q) or cert.extended_scope, f"composite q = {q} without extended scope")
    red = [_strip(x, qprimes) for x in b]
    ck.require(min(red) >= 2 and Triple(*red) == cert.reduced,
               f"reducing {b} by {q} gives {red}, not {cert.reduced}")
    g = cert.group
    if isinstance(g, Psl2):
        _check_constraints(ck, g.p, cert.constraints)
    _check_generated(ck, g, cert.basis, cert.reduced, cfg, "reduced triple")
    ck.require(OrderGapProof(g, a, q).check(), f"{g} has elements of order dividing {q}")
    if cfg.oracle.can_search(g):
        ck.require(_oracle_try(is_quotient, g, b, cfg.oracle) is True,
                   f"oracle: {g} is not a quotient of {b}")
        ck.require(_oracle_try(is_quotient, g, a, cfg.oracle) is False,
                   f"oracle: {g} is a quotient of {a}")


def _verify_smooth_psl(ck, cert, tri, cfg):
    side = cert.smooth_side
    a, b = tri[side], tri[1 - side]
    g = cert.group
    if not ck.require(isinstance(g, Psl2), "stage-3 smooth witness must be a PSL(2,p)"):
        return
    p = g.p
    ck.require(cert.primes == (p,), "recorded primes disagree with the group")
    _check_constraints(ck, p, cert.constraints)
    ck.require(_macbeath_ok(a) and _macbeath_ok(b), "PSL(2,p) criterion inapplicable")
    ck.require(macbeath_generated(p, a), f"PSL(2,{p}) is not {a}-generated")
    ck.require(not macbeath_generated(p, b), f"PSL(2,{p}) is {b}-generated")
    ck.require(cert.blocked_order not in g.orders_dividing(cert.blocked_order),
               f"PSL(2,{p}) has an element of order {cert.blocked_order}")
    if cert.l2 is not None:
        ck.require(any(m % cert.blocked_order == 0 for m in l2_set(b)),
                   f"{cert.blocked_order} divides no L2-set member of {b}")
    if cert.blocked_entry is not None:
        ck.require(cert.blocked_entry in b.as_tuple()
                   and cert.blocked_entry not in g.element_orders(),
                   f"blocked entry {cert.blocked_entry} is not a missing order of {b}")
    if cfg.oracle.can_search(g):
        ck.require(_oracle_try(is_smooth_quotient, g, a, cfg.oracle) is True,
                   f"oracle: PSL(2,{p}) is not {a}-generated")
        ck.require(_oracle_try(is_smooth_quotient, g, b, cfg.oracle) is False,
                   f"oracle: PSL(2,{p}) is {b}-generated")


def _verify_smooth_product(ck, cert, tri, cfg):
    side = cert.smooth_side
    a, b = tri[side], tri[1 - side]
    sp = cert.split
    if not ck.require(sp is not None and isinstance(cert.group, GeneratedSubgroup),
                      "direct-product witness needs a divisor split and a generated subgroup"):
        return
    prod = cert.group.parent
    if not ck.require(isinstance(prod, DirectProduct) and len(prod.factors) == 2
                      and isinstance(prod.factors[0], Psl2) and prod.factors[1] == sp.component,
                      "parent must be PSL(2,p) x component"):
        return
    psl, comp = prod.factors
    q1, q2, y = sp.q1, sp.q2, cert.blocked_entry
    ck.require(q1 > 3 and q2 > 3 and math.gcd(q1, q2) == 1, "q1, q2 must be coprime and > 3")
    ck.require(cert.blocked_order == q1 * q2, "blocked order must be q1*q2")
    ck.require(y in b.as_tuple() and y % (q1 * q2) == 0, f"q1*q2 does not divide an entry {y} of {b}")
    ck.require(all(x % (q1 * q2) for x in a), f"q1*q2 divides an entry of {a}")
    ck.require(sp.m1 * sp.m2 == math.lcm(*a) and math.gcd(sp.m1, sp.m2) == 1
               and sp.m1 % q1 == 0 and sp.m2 % q2 == 0, "bad coprime split m1*m2 of the lcm")
    ck.require(all(math.lcm(x1, x2) == x for x1, x2, x in zip(sp.first, sp.second, a)),
               "component orders do not combine to the smooth side")
    gens = cert.group.generators
    ck.require(gens == ((sp.first[0], sp.second[0]), (sp.first[1], sp.second[1])),
               "generator descriptors disagree with the split")
    _check_constraints(ck, psl.p, cert.constraints)
    if isinstance(comp, Psl2):
        _check_constraints(ck, comp.p, sp.component_constraints)
    ck.require(cert.primes == (psl.p,) + ((comp.p,) if isinstance(comp, Psl2) else ()),
               "recorded primes disagree with the groups")
    _check_generated(ck, psl, "macbeath", Triple(*sp.first), cfg, "first factor")
    _check_generated(ck, comp, sp.component_basis, Triple(*sp.second), cfg, "second factor")
    ck.require(_blocks(comp, q1) and _blocks(comp, q2),
               f"{comp} has an element order divisible by {q1} or {q2}")
    ck.require(q1 * q2 not in prod.orders_dividing(q1 * q2),
               f"{prod} has an element of order {q1 * q2}")
    ck.require(y not in prod.orders_dividing(y), f"{prod} has an element of order {y}")
    ck.require(all(x in prod.orders_dividing(x) for x in a), "smooth orders not realizable")
    if cfg.oracle.can_search(prod):
        _oracle_product_check(ck, psl, comp, sp, a, y, cfg)


def _oracle_product_check(ck, psl, comp, sp, a, y, cfg):
    """Explicit check inside the realized product: generators of the right
    orders exist and their span has no element of order y."""
    w1 = is_smooth_quotient(psl, Triple(*sp.first), cfg.oracle).witness
    w2 = is_smooth_quotient(comp, Triple(*sp.second), cfg.oracle).witness
    if not ck.require(w1 is not None and w2 is not None, "oracle: factor witnesses not found"):
        return
    g1, g2 = realize(psl), realize(comp)
    prod = realize(DirectProduct((psl, comp)))

    def aligned(w, g, want):
        # witness orders are for the sorted triple; permute to match positions
        x, y_ = g.locate(w.x), g.locate(w.y)
        z = int(g.inv(g.mul(x, y_)))
        elems = {w.orders[0]: x, w.orders[1]: y_, w.orders[2]: z}
        return elems if set(want) == set(w.orders) and len(set(want)) == 3 else None

    e1 = aligned(w1, g1, sp.first)
    e2 = aligned(w2, g2, sp.second)
    if e1 is None or e2 is None:
        return  # repeated entries: symbolic checks above remain authoritative
    x = prod.locate((g1.describe(e1[sp.first[0]]), g2.describe(e2[sp.second[0]])))
    yy = prod.locate((g1.describe(e1[sp.first[1]]), g2.describe(e2[sp.second[1]])))
    got = (prod.element_order(x), prod.element_order(yy), prod.element_order(int(prod.mul(x, yy))))
    ck.require(got == a.as_tuple(), f"oracle: product generators have orders {got}, not {a}")
    ck.require(not (prod.orders == y).any(), f"oracle: product has an element of order {y}")
