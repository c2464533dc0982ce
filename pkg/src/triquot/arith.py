"""Exact integer number theory: factorization, sieve, CRT, primality, and
prime search under residue constraints."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _iproduct

from sympy import factorint

from . import _kernels
from .errors import InconsistentCongruences, ResourceLimitError

INT64_MAX = 2**63 - 1
SPF_BUDGET = 12_000_000
# products of allowed-residue combinations up to this size are expanded by CRT
MAX_CRT_COMBINATIONS = 64
# forbidden classes are folded into the CRT classes when the lift is this cheap
_MAX_LIFT = 4096


def checked_mul(*factors: int) -> int:
    """Product of the factors; raises OverflowError beyond signed 64-bit."""
    out = 1
    for f in factors:
        out *= f
        if abs(out) > INT64_MAX:
            raise OverflowError(f"integer overflow: product of {factors} exceeds 2^63-1")
    return out


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.factors):
            raise ValueError(f"malformed factorization {self.factors}")

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> tuple[int, ...]:
        """The maximal prime-power divisors, in prime order."""
        return tuple(p**e for p, e in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


_SMALL_LIMIT = 1 << 16


@lru_cache(maxsize=1)
def _small_spf():
    return _kernels._spf_sieve_np(_SMALL_LIMIT)


def factorize(n: int) -> Factorization:
    if not 1 <= n <= INT64_MAX:
        raise ValueError(f"factorize expects 1 <= n <= 2^63-1, got {n}")
    if n <= _SMALL_LIMIT:
        spf = _small_spf()
        out: dict[int, int] = {}
        while n > 1:
            p = int(spf[n])
            n //= p
            out[p] = out.get(p, 0) + 1
        return Factorization(tuple(sorted(out.items())))
    return Factorization(tuple(sorted((int(p), int(e)) for p, e in factorint(n).items())))


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def largest_divisor_not_divisible_by(n: int, q: int) -> int:
    """Largest divisor of n that q does not divide."""
    for d in reversed(divisors(n)):
        if d % q:
            return d
    raise ValueError(f"every divisor of {n} is divisible by {q}")


class SpfTable:
    """Smallest-prime-factor table for 2 <= n <= limit."""

    def __init__(self, limit: int, budget: int = SPF_BUDGET, backend=None):
        if limit < 1:
            raise ValueError("limit must be positive")
        if limit > budget:
            raise ResourceLimitError(f"spf table of size {limit} exceeds budget {budget}")
        self.limit = limit
        self.table = _kernels.spf_sieve(limit, backend=backend)

    def __getitem__(self, n):
        if not 2 <= n <= self.limit:
            raise IndexError(n)
        return int(self.table[n])

    def factorize(self, n: int) -> Factorization:
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.table[n])
            n //= p
            out[p] = out.get(p, 0) + 1
        return Factorization(tuple(sorted(out.items())))


def spf_table(limit: int, budget: int = SPF_BUDGET, backend=None) -> SpfTable:
    return SpfTable(limit, budget=budget, backend=backend)


def crt(constraints) -> tuple[int, int]:
    """Combine congruences x = a_i (mod m_i); returns (x mod M, M), M = lcm(m_i)."""
    constraints = list(constraints)
    if not constraints:
        raise ValueError("crt needs at least one congruence")
    x, m = 0, 1
    seen: list[tuple[int, int]] = []
    for a, mod in constraints:
        if mod < 1:
            raise ValueError(f"modulus must be positive, got {mod}")
        a %= mod
        g = math.gcd(m, mod)
        if (a - x) % g:
            for b, mb in seen:
                h = math.gcd(mb, mod)
                if (a - b) % h:
                    raise InconsistentCongruences(
                        f"x = {b} mod {mb} clashes with x = {a} mod {mod}", clash=((b, mb), (a, mod)))
            raise InconsistentCongruences(f"x = {a} mod {mod} is incompatible with x = {x} mod {m}",
                                          clash=((x, m), (a, mod)))
        # x + m*k = a  (mod mod)
        k = ((a - x) // g) * pow(m // g, -1, mod // g) % (mod // g)
        x = x + m * k
        m = m // g * mod
        x %= m
        seen.append((a, mod))
    return x, m


# Deterministic for n < 3.3e24 (Sorenson & Webster); covers the full 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ResidueConstraint:
    """Residues allowed / forbidden modulo ``modulus``.

    ``allowed=None`` means every residue not listed in ``forbidden``.
    """
    modulus: int
    allowed: frozenset | None = None
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        m = self.modulus
        if self.allowed is not None:
            object.__setattr__(self, "allowed", frozenset(a % m for a in self.allowed))
        object.__setattr__(self, "forbidden", frozenset(a % m for a in self.forbidden))
        if self.allowed is not None and self.allowed & self.forbidden:
            raise ValueError("allowed and forbidden residues overlap")

    def admits(self, n: int) -> bool:
        r = n % self.modulus
        if r in self.forbidden:
            return False
        return self.allowed is None or r in self.allowed

    def to_dict(self):
        return {
            "modulus": self.modulus,
            "allowed": None if self.allowed is None else sorted(self.allowed),
            "forbidden": sorted(self.forbidden),
        }

    @classmethod
    def from_dict(cls, d):
        allowed = d.get("allowed")
        return cls(int(d["modulus"]),
                   None if allowed is None else frozenset(allowed),
                   frozenset(d.get("forbidden", ())))

    def describe(self) -> str:
        parts = []
        if self.allowed is not None:
            parts.append("in {" + ",".join(map(str, sorted(self.allowed))) + "}")
        if self.forbidden:
            parts.append("not in {" + ",".join(map(str, sorted(self.forbidden))) + "}")
        return f"p mod {self.modulus} " + " and ".join(parts)


def plus_minus_one(modulus: int) -> ResidueConstraint:
    """p = +-1 (mod modulus)."""
    return ResidueConstraint(modulus, frozenset({1, modulus - 1}))


def not_plus_minus_one(modulus: int) -> ResidueConstraint:
    return ResidueConstraint(modulus, None, frozenset({1, modulus - 1}))


def default_prime_bound(constraints) -> int:
    prod = 1
    for c in constraints:
        prod *= c.modulus
        if prod > INT64_MAX:
            return INT64_MAX
    return min(INT64_MAX, (1 << 20) * prod)


def _allowed_classes(constraints):
    """CRT-expand the allowed sets into residue classes mod M, or None when
    there are too many combinations."""
    restricted = [c for c in constraints if c.allowed is not None]
    count = 1
    for c in restricted:
        count *= len(c.allowed)
    if count > MAX_CRT_COMBINATIONS:
        return None
    if count == 0:
        raise InconsistentCongruences("a constraint has an empty allowed set")
    if not restricted:
        return [0], 1
    modulus = math.lcm(*(c.modulus for c in restricted))
    classes = set()
    first_clash = None
    for combo in _iproduct(*(sorted(c.allowed) for c in restricted)):
        try:
            x, _ = crt(zip(combo, (c.modulus for c in restricted)))
        except InconsistentCongruences as exc:
            first_clash = first_clash or exc
            continue
        classes.add(x)
    if not classes:
        raise InconsistentCongruences(
            f"allowed residue sets are mutually incompatible ({first_clash})",
            clash=first_clash.clash if first_clash else None)
    return sorted(classes), modulus


def find_prime(constraints, bound: int | None = None, min_value: int = 2) -> int | None:
    """Smallest prime p with min_value <= p <= bound satisfying every constraint.

    Returns None when no such prime exists below the bound.  Raises
    InconsistentCongruences when no integer at all satisfies the constraints
    (detected by CRT enumeration of the allowed sets).
    """
    constraints = list(constraints)
    if bound is None:
        bound = default_prime_bound(constraints)
    expanded = _allowed_classes(constraints)
    if expanded is None:
        return _scan_all(constraints, bound, min_value)
    classes, modulus = expanded
    # fold cheap forbidden constraints into the class list
    pending = []
    for c in constraints:
        if not c.forbidden and c.allowed is not None:
            continue
        lift = c.modulus // math.gcd(modulus, c.modulus)
        if lift * len(classes) <= _MAX_LIFT:
            new_mod = modulus * lift
            classes = sorted(x + modulus * k for x in classes for k in range(lift)
                             if c.admits(x + modulus * k))
            modulus = new_mod
            if not classes:
                raise InconsistentCongruences(
                    f"every residue class allowed by the constraints is forbidden by {c.describe()}")
        else:
            pending.append(c)
    # a class x sharing the factor g with the modulus holds at most one prime, g itself
    live = [x for x in classes if math.gcd(x, modulus) == 1]
    special = sorted(g for g in {math.gcd(x, modulus) for x in classes} - {1}
                     if g % modulus in classes and min_value <= g <= bound and is_prime(g)
                     and all(c.admits(g) for c in constraints))
    if special:
        bound = min(bound, special[0])
    hit = _sweep(live, modulus, pending, bound, min_value)
    if hit is not None:
        return hit
    return special[0] if special else None


def _sweep(live, modulus, pending, bound, min_value):
    if not live:
        return None
    k = max(0, (min_value - modulus) // modulus)
    while True:
        base = k * modulus
        if base + live[0] > bound:
            return None
        for x in live:
            n = base + x
            if n > bound:
                return None
            if n >= min_value and all(c.admits(n) for c in pending) and is_prime(n):
                return n
        k += 1


def _scan_all(constraints, bound, min_value):
    n = max(2, min_value)
    while n <= bound:
        if all(c.admits(n) for c in constraints) and is_prime(n):
            return n
        n += 1 if n == 2 else (2 if n % 2 else 1)
    return None
