from itertools import product

import pytest

from erjw.coefficients import CoeffElement
from erjw.projective_modules import MonomialKey, d1_exact, lead_term
from erjw.unitary_modules import (
    ChernMonomial,
    PontryaginMonomial,
    PropertyAViolation,
    SymKey,
    chern_to_smash,
    chern_to_w,
    expand_w,
    has_property_a,
    parity_of,
    pk_to_w,
    pontryagin_to_smash,
    sym_keys,
    w_to_chern,
)

L = 8


def test_property_a():
    assert has_property_a((1, 0), (0, 1))
    assert not has_property_a((0, 1), (1, 0))
    with pytest.raises(PropertyAViolation):
        SymKey((0, 1), (1, 0))


def test_w_is_the_orbit_sum():
    w = expand_w(SymKey((1, 0), (0, 1)), L)
    assert set(w.terms) == {MonomialKey((1, 0), (0, 1)), MonomialKey((0, 1), (1, 0))}


def test_first_chern_class():
    c1 = chern_to_smash(ChernMonomial((1, 0)), L)
    one = CoeffElement.scalar(1)
    assert {(k.I, k.eps): c for k, c in c1.terms.items()} == {((0, 0), (1, 0)): one, ((0, 0), (0, 1)): one}
    c1c2 = chern_to_smash(ChernMonomial((1, 1)), L)
    k, c = lead_term(c1c2)
    assert k == MonomialKey((1, 0), (0, 1)) and c == CoeffElement.scalar(-1)


def test_pontryagin_classes_are_real():
    p2 = pontryagin_to_smash(PontryaginMonomial((0, 1)), L)
    assert lead_term(p2)[0] == MonomialKey((1, 1), (0, 0))
    assert not d1_exact(p2)


def test_symmetric_images_have_symmetric_d1():
    z = chern_to_smash(ChernMonomial((1, 2)), L)
    dz = d1_exact(z)
    for k, c in dz.terms.items():
        swapped = MonomialKey(k.I[::-1], k.eps[::-1])
        assert dz.terms[swapped] == c


def test_chern_round_trip():
    for k in sym_keys(3, 7):
        assert chern_to_w(w_to_chern(k)) == k


def test_pk_to_w_matches_lead_weights():
    assert pk_to_w((0, 1), (0, 0)) == SymKey((1, 1), (0, 0))
    assert pk_to_w((1, 0), (0, 1)) == SymKey((1, 0), (1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_parity_lemma_exhaustive(n):
    for J in product(range(4), repeat=n):
        if J[-1] == 0:
            continue
        k = chern_to_w(ChernMonomial(J))
        assert parity_of(ChernMonomial(J)) == ("odd" if sum(k.eps) % 2 else "even")


def test_w_coordinates_recover_the_key():
    from erjw.unitary_modules import sym_coordinates
    for k in sym_keys(3, 6):
        assert sym_coordinates(expand_w(k, 6)) == {k: CoeffElement.scalar(1)}
