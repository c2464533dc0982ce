import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import abelianization_snf
from triquot.errors import InvalidSignature, NotSmoothOrder, PreconditionError
from triquot.signature import (SignatureClass, Triple, abelian_cover_order, abelianization,
                               classify, genus_of_smooth_action, invariant_profile, is_exceptional,
                               is_hyperbolic)

entry = st.integers(min_value=2, max_value=400)


def test_triple_sorts_and_validates():
    assert Triple(7, 2, 3).as_tuple() == (2, 3, 7)
    assert Triple.parse("(9, 39, 65)") == Triple(65, 9, 39)
    for bad in ((1, 5, 5), (0, 3, 7), (-2, 3, 7)):
        with pytest.raises(InvalidSignature):
            Triple(*bad)
    with pytest.raises(InvalidSignature):
        Triple.parse("2 3")
    with pytest.raises(InvalidSignature):
        Triple.parse("2 x 7")


def test_classify_examples():
    assert classify(Triple(2, 3, 5)) is SignatureClass.SPHERICAL
    assert classify(Triple(3, 3, 3)) is SignatureClass.EUCLIDEAN
    assert classify(Triple(2, 3, 7)) is SignatureClass.HYPERBOLIC
    for tr in ((2, 3, 6), (2, 4, 4), (3, 3, 3)):
        assert classify(Triple(*tr)) is SignatureClass.EUCLIDEAN
    for n in range(2, 30):
        assert classify(Triple(2, 2, n)) is SignatureClass.SPHERICAL


@settings(max_examples=200)
@given(entry, entry, entry)
def test_classify_permutation_invariant(a, b, c):
    classes = {classify(Triple(*p)) for p in permutations((a, b, c))}
    assert len(classes) == 1
    val = Fraction(1, a) + Fraction(1, b) + Fraction(1, c)
    want = (SignatureClass.SPHERICAL if val > 1 else
            SignatureClass.EUCLIDEAN if val == 1 else SignatureClass.HYPERBOLIC)
    assert classes == {want}


def test_is_exceptional_examples():
    assert is_exceptional(Triple(2, 5, 5))
    assert not is_exceptional(Triple(2, 3, 7))
    assert is_exceptional(Triple(3, 3, 3))
    for tr in ((3, 4, 4), (3, 3, 5), (3, 5, 5), (5, 5, 5), (2, 3, 5), (2, 2, 9)):
        assert is_exceptional(Triple(*tr))
    assert not is_exceptional(Triple(2, 4, 4))
    assert not is_exceptional(Triple(2, 3, 6))


def test_abelianization_examples():
    assert abelianization(Triple(2, 3, 7)) == (1, 1)
    assert abelianization(Triple(3, 3, 3)) == (3, 3)
    assert abelianization(Triple(15, 42, 63)) == (3, 21)
    assert abelianization_snf(15, 42, 63) == (3, 21)


def test_abelianization_against_snf_grid():
    for r in range(2, 19):
        for s in range(r, 19):
            for t in range(s, 19):
                assert abelianization(Triple(r, s, t)) == abelianization_snf(r, s, t)


@settings(max_examples=300)
@given(entry, entry, entry)
def test_abelianization_product_identity(a, b, c):
    tr = Triple(a, b, c)
    d, e = abelianization(tr)
    assert d == math.gcd(a, b, c)
    assert d * e == a * b * c // math.lcm(a, b, c)
    assert e % d == 0


def test_abelianization_identity_random():
    rng = random.Random(3)
    for _ in range(10**5):
        a, b, c = (rng.randint(2, 10**4) for _ in range(3))
        d, e = abelianization(Triple(a, b, c))
        assert d * e * math.lcm(a, b, c) == a * b * c


def test_invariant_profile_examples():
    for tr in ((15, 42, 63), (21, 21, 90)):
        p = invariant_profile(Triple(*tr))
        assert (p.product, p.lcm3, p.pairwise_sum, p.gcd3, p.ab_e) == (39690, 630, 4221, 3, 21)
        assert p.euler_sum == Fraction(67, 630)
        assert p.even_count == 1
    p = invariant_profile(Triple(2, 2, 2))
    assert p.product == 8 and p.euler_sum == Fraction(3, 2) and p.even_count == 3


@pytest.mark.parametrize("pair", [((15, 42, 63), (21, 21, 90)), ((13, 15, 117), (9, 39, 65))])
def test_profile_equal_for_worked_pairs(pair):
    a, b = (invariant_profile(Triple(*x)) for x in pair)
    assert a.first_difference(b) is None
    for name in ("gcd3", "lcm3", "product", "pairwise_sum", "ab_d", "ab_e", "euler_sum"):
        assert getattr(a, name) == getattr(b, name)
    assert a.entries != b.entries


@settings(max_examples=200)
@given(entry, entry, entry)
def test_profile_type_invariants(a, b, c):
    p = invariant_profile(Triple(a, b, c))
    assert p.ab_d == p.gcd3
    assert p.ab_d * p.ab_e == p.product // p.lcm3
    assert p.euler_sum == Fraction(p.pairwise_sum, p.product)
    assert p.entries == tuple(sorted((a, b, c)))


def test_genus_examples():
    assert genus_of_smooth_action(168, Triple(2, 3, 7)) == 3
    assert genus_of_smooth_action(3420, Triple(3, 5, 9)) == 609
    with pytest.raises(NotSmoothOrder):
        genus_of_smooth_action(169, Triple(2, 3, 7))
    with pytest.raises(PreconditionError):
        genus_of_smooth_action(60, Triple(2, 3, 5))


def test_abelian_cover_order_examples():
    o = abelian_cover_order(Triple(2, 3, 7), 168, 5)
    assert (o.base, o.exponent, o.cofactor) == (5, 6, 168)
    assert str(o) == "5^6 * 168"
    o = abelian_cover_order(Triple(2, 3, 7), 168, 1)
    assert o.base ** o.exponent * o.cofactor == 168
    o = abelian_cover_order(Triple(3, 5, 9), 3420, 2)
    assert (o.base, o.exponent, o.cofactor) == (2, 1218, 3420)
    with pytest.raises(NotSmoothOrder):
        abelian_cover_order(Triple(2, 3, 7), 169, 2)


def test_hyperbolic_helper():
    assert is_hyperbolic(Triple(2, 3, 7))
    assert not is_hyperbolic(Triple(2, 4, 4))
