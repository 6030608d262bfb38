from hypothesis import given, strategies as st

from erjw.exact2local import Local2Rational
from erjw.coefficients import CoeffElement, CoeffMonomial, coeff_mul, conj_coeff, point_bss

mono = st.builds(CoeffMonomial, st.integers(0, 4), st.integers(0, 7))
elem = st.dictionaries(mono, st.integers(-5, 5), max_size=4).map(CoeffElement)


def test_v2_exponent_is_periodic():
    assert CoeffMonomial(0, 8) == CoeffMonomial(0, 0)
    assert CoeffMonomial(1, 3).degree == (16 - 18) % 48


def test_conjugation_flips_odd_v2():
    z = CoeffElement.monomial(1, 3, 2) + CoeffElement.monomial(0, 2, 1)
    assert conj_coeff(z) == CoeffElement.monomial(1, 3, -2) + CoeffElement.monomial(0, 2, 1)


@given(elem, elem, elem)
def test_ring_axioms(a, b, c):
    assert coeff_mul(a, b) == coeff_mul(b, a)
    assert coeff_mul(a, b + c) == coeff_mul(a, b) + coeff_mul(a, c)
    assert coeff_mul(coeff_mul(a, b), c) == coeff_mul(a, coeff_mul(b, c))


@given(elem, elem)
def test_conjugation_is_a_ring_involution(a, b):
    assert conj_coeff(conj_coeff(a)) == a
    assert conj_coeff(coeff_mul(a, b)) == coeff_mul(conj_coeff(a), conj_coeff(b))


def test_json_round_trip():
    z = CoeffElement.monomial(2, 5, Local2Rational(3, 7)) - CoeffElement.scalar(1)
    assert CoeffElement.from_json(z.to_json()) == z


def test_point_pages():
    pages = {p.page: p for p in point_bss()}
    assert [b for _, b in pages[2].basis] == [0, 2, 4, 6]
    assert pages[2].ring == "Z/2[v1h]"
    assert [b for _, b in pages[4].basis] == [0, 4]
    assert pages[8].basis == ()
