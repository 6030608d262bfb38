import random

import pytest
from hypothesis import given, settings, strategies as st

from erjw.coefficients import CoeffElement
from erjw.exact2local import Local2Rational
from erjw.projective_modules import (
    MonomialKey,
    SmashElement,
    ZeroElement,
    conjugate,
    d1_exact,
    key_degree,
    lead_term,
    mul_by,
    order_compare,
    smash_keys,
    smash_product,
)

L = 8


def key(I, eps):
    return MonomialKey(tuple(I), tuple(eps))


def random_homogeneous(rng, n, max_len, terms=4):
    """A random homogeneous element: a few monomials v1h^a v2^b key in one degree."""
    pool = [(k, a, b) for k in smash_keys(n, max_len) for a in range(4) for b in range(8)]
    k0, a0, b0 = rng.choice(pool)
    d = key_degree(k0, a0, b0)
    same = [t for t in pool if key_degree(*t) == d]
    z = SmashElement(n, max_len)
    for k, a, b in rng.sample(same, min(terms, len(same))):
        c = Local2Rational(rng.randint(-9, 9), rng.choice((1, 3, 7)))
        z = z + SmashElement.monomial(k, max_len, CoeffElement.monomial(a, b, c))
    return z


def test_smash_condition():
    with pytest.raises(ValueError):
        key((0, 1), (0, 0))
    assert key((0, 1), (1, 0)).length == 3


def test_order_is_total_and_length_first():
    keys = smash_keys(2, 6)
    for a in keys:
        for b in keys:
            c = order_compare(a, b)
            assert c == -order_compare(b, a)
            assert (c == 0) == (a == b)
            if a.length < b.length:
                assert c < 0
    assert keys == sorted(keys)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_conjugation_is_an_involution(seed):
    z = random_homogeneous(random.Random(seed), 2, L)
    assert conjugate(conjugate(z)) == z


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_d1_is_a_differential_of_degree_18(seed):
    z = random_homogeneous(random.Random(seed), 2, L)
    dz = d1_exact(z)
    assert d1_exact(dz).terms == {}
    if dz:
        assert dz.degrees() == {(d + 18) % 48 for d in z.degrees()}


@pytest.mark.parametrize("m", [("v1h", 1), ("v2", 2), ("p", 1), ("p", 2)])
def test_d1_is_linear_over_real_classes(m):
    rng = random.Random(7)
    for _ in range(5):
        z = random_homogeneous(rng, 2, L)
        assert d1_exact(mul_by(z, m)) == mul_by(d1_exact(z), m)


def test_conjugation_is_multiplicative():
    rng = random.Random(3)
    a, b = random_homogeneous(rng, 2, L), random_homogeneous(rng, 2, L)
    assert conjugate(smash_product(a, b)) == smash_product(conjugate(a), conjugate(b))


def test_lead_term_is_the_minimum():
    z = SmashElement(1, L, {key((1,), (1,)): CoeffElement.scalar(1), key((2,), (0,)): CoeffElement.scalar(3)})
    assert lead_term(z)[0] == key((1,), (1,))
    with pytest.raises(ZeroElement):
        lead_term(SmashElement(1, L))


def test_d1_of_u_displayed_expansion():
    du = d1_exact(SmashElement.monomial(key((0,), (1,)), 5))
    want = {
        key((0,), (1,)): CoeffElement.monomial(0, 5, 2),
        key((1,), (0,)): CoeffElement.monomial(1, 5),
        key((2,), (0,)): CoeffElement.monomial(0, 5, Local2Rational(-1, 7))
        + CoeffElement.monomial(3, 5, Local2Rational(-3, 7)),
    }
    assert {k: c for k, c in du.terms.items() if k.length <= 4} == want
