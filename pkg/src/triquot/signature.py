"""Triangle-group signatures (r, s, t) and their cheap quotient invariants."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import checked_mul
from .errors import InvalidSignature, NotSmoothOrder, PreconditionError


@dataclass(frozen=True, order=True)
class Triple:
    """A signature r <= s <= t with every entry >= 2; the constructor sorts."""
    r: int
    s: int
    t: int

    def __post_init__(self):
        vals = (self.r, self.s, self.t)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
            try:
                vals = tuple(int(v) for v in vals)
            except (TypeError, ValueError):
                raise InvalidSignature(f"non-integer entries {vals!r}") from None
        if min(vals) < 2:
            raise InvalidSignature(f"triangle group entries must be >= 2, got {vals}")
        r, s, t = sorted(vals)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @classmethod
    def parse(cls, text: str) -> "Triple":
        parts = text.replace("(", " ").replace(")", " ").replace(",", " ").split()
        if len(parts) != 3:
            raise InvalidSignature(f"expected three entries, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError:
            raise InvalidSignature(f"non-integer entries in {text!r}") from None

    def __iter__(self):
        return iter((self.r, self.s, self.t))

    def __str__(self):
        return f"({self.r},{self.s},{self.t})"

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.s, self.t)

    def euler_sum(self) -> Fraction:
        return Fraction(1, self.r) + Fraction(1, self.s) + Fraction(1, self.t)


class SignatureClass(enum.Enum):
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"

    def __str__(self):
        return self.value


def classify(tr: Triple) -> SignatureClass:
    x = tr.euler_sum()
    if x > 1:
        return SignatureClass.SPHERICAL
    if x == 1:
        return SignatureClass.EUCLIDEAN
    return SignatureClass.HYPERBOLIC


def is_hyperbolic(tr: Triple) -> bool:
    return classify(tr) is SignatureClass.HYPERBOLIC


# Macbeath's exceptional hyperbolic triples; (3,3,3) and the spherical ones are
# the non-hyperbolic exceptions.
EXCEPTIONAL_HYPERBOLIC = frozenset({(2, 5, 5), (3, 4, 4), (3, 3, 5), (3, 5, 5), (5, 5, 5)})


def is_exceptional(tr: Triple) -> bool:
    if classify(tr) is SignatureClass.SPHERICAL:
        return True
    return tr.as_tuple() == (3, 3, 3) or tr.as_tuple() in EXCEPTIONAL_HYPERBOLIC


def _lcm3_of_gcds(r, s, t):
    return math.lcm(math.gcd(r, s), math.gcd(r, t), math.gcd(s, t))


def abelianization(tr: Triple) -> tuple[int, int]:
    """(d, e) with the abelianization isomorphic to C_d x C_e."""
    r, s, t = tr
    d = math.gcd(r, s, t)
    e = _lcm3_of_gcds(r, s, t)
    if d * e * math.lcm(r, s, t) != r * s * t:
        raise AssertionError(f"abelianization invariants inconsistent for {tr}")
    return d, e


@dataclass(frozen=True)
class InvariantProfile:
    gcd3: int
    lcm3: int
    product: int
    pairwise_sum: int
    ab_d: int
    ab_e: int
    euler_sum: Fraction
    even_count: int
    entries: tuple[int, int, int]

    # comparison order used by the distinguishing pipeline
    COMPARED = ("gcd3", "ab_e", "product", "lcm3", "pairwise_sum", "euler_sum")

    def first_difference(self, other: "InvariantProfile"):
        for name in self.COMPARED:
            a, b = getattr(self, name), getattr(other, name)
            if a != b:
                return name, a, b
        return None


def invariant_profile(tr: Triple) -> InvariantProfile:
    r, s, t = tr
    product = checked_mul(r, s, t)
    pairwise = checked_mul(r, s) + checked_mul(r, t) + checked_mul(s, t)
    d, e = abelianization(tr)
    return InvariantProfile(
        gcd3=d,
        lcm3=math.lcm(r, s, t),
        product=product,
        pairwise_sum=pairwise,
        ab_d=d,
        ab_e=e,
        euler_sum=Fraction(pairwise, product),
        even_count=sum(1 for x in tr if x % 2 == 0),
        entries=tr.as_tuple(),
    )


def genus_of_smooth_action(order: int, tr: Triple) -> int:
    """Genus g of the surface on which a smooth (r,s,t)-quotient of the given
    order acts, from 2 - 2g = order * (1/r + 1/s + 1/t - 1)."""
    if not is_hyperbolic(tr):
        raise PreconditionError(f"{tr} is not hyperbolic")
    if order < 1:
        raise ValueError("order must be positive")
    two_minus_2g = order * (tr.euler_sum() - 1)
    if two_minus_2g.denominator != 1 or two_minus_2g.numerator % 2:
        raise NotSmoothOrder(f"{order} is not the order of a smooth quotient of Delta{tr}: "
                             f"2-2g = {two_minus_2g}")
    g = (2 - two_minus_2g.numerator) // 2
    if g < 0:
        raise NotSmoothOrder(f"negative genus for order {order} and {tr}")
    return g


@dataclass(frozen=True)
class SymbolicOrder:
    """The integer base**exponent * cofactor, kept unevaluated."""
    base: int
    exponent: int
    cofactor: int

    def __str__(self):
        return f"{self.base}^{self.exponent} * {self.cofactor}"

    def log2(self) -> float:
        return self.exponent * math.log2(self.base) + math.log2(self.cofactor)


def abelian_cover_order(tr: Triple, order: int, n: int) -> SymbolicOrder:
    """Order n^(2g) |G| of the abelian-by-G smooth quotient of exponent n."""
    if n < 1:
        raise ValueError("n must be positive")
    g = genus_of_smooth_action(order, tr)
    return SymbolicOrder(n, 2 * g, order)
