from dataclasses import replace

from erjw.theorem_oracles import (
    OracleWindow,
    chern_exponents,
    degree,
    diff_reports,
    enumerate_family,
    enumerate_set,
    mu_families,
    mux1_families,
    restrict,
    smash_families,
    summary_families,
)


def test_smash_e4_has_two_generators():
    fam = smash_families(2)["E4"]
    gens = enumerate_family(fam, None, OracleWindow(2, 20, 6))
    assert gens == [((1, 1), (0, 0), 0, 0), ((1, 1), (0, 0), 0, 4)]
    assert sorted(g for d in range(48) for g in enumerate_family(fam, d, OracleWindow(2, 20, 6))) == gens


def test_mu3_x7_is_a_polynomial_ring_on_p2():
    gens = enumerate_family(mu_families(3)["x7"], None, OracleWindow(3, 14, 2))
    # P2^k P3: I = (k+1, k+1, 1)
    assert [g[0] for g in gens] == [(1, 1, 1), (2, 2, 1), (3, 3, 1)]


def test_first_part_example():
    fam = mu_families(3)["E_1,3.free"]
    for I, eps, a, b in enumerate_family(fam, None, OracleWindow(3, 8, 0)):
        assert I[0] == I[1] and eps[:2] == (0, 0)


def test_families_are_internally_consistent():
    w = OracleWindow(3, 10, 2)
    for fams, sym in ((smash_families(3), False), (mu_families(3), True), (mux1_families(3), True)):
        for f in fams.values():
            for I, eps, a, b in enumerate_family(f, None, w):
                assert all(i + e for i, e in zip(I, eps))
                w8 = [2 * i + e for i, e in zip(I, eps)]
                assert not sym or all(x >= y for x, y in zip(w8, w8[1:]))
                assert 2 * sum(I) + sum(eps) <= w.max_len and a <= w.max_a


def test_perturbed_oracle_is_caught():
    w = OracleWindow(2, 8, 3)
    fam = smash_families(2)["E2"]
    good = enumerate_set([fam], w)
    loose = replace(fam, keys=lambda I, e: not any(e))
    d = diff_reports(good, enumerate_set([loose], w))
    assert not d.empty and not d.extra and d.missing


def test_restrict_modes():
    w = OracleWindow(1, 8, 0)
    fam = smash_families(1)["E2"]
    assert {g[3] for g in enumerate_family(restrict(fam, "8*"), None, w)} == {0, 4}
    assert {g[3] for g in enumerate_family(restrict(fam, "16*"), None, w)} == {0}


def test_summary_matches_stage_lists():
    assert set(summary_families(3)) == {"x1.0", "x1.1", "x1.2", "x1.3"}


def test_chern_exponents_follow_weights():
    assert chern_exponents((1, 0), (0, 1)) == (1, 1)
    assert degree((1,), (0,), 0, 4) == 40


def test_literal_reading_only_has_even_c1():
    w = OracleWindow(2, 8, 4)
    lit = enumerate_set([mux1_families(2, "literal")["x1.1"]], w)
    amd = enumerate_set([mux1_families(2, "amended")["x1.1"]], w)
    assert len(lit) == len(amd) and lit != amd
    assert all(chern_exponents(I, e)[0] % 2 == 0 for I, e, a, b in lit)
    assert all(e[0] == 0 for I, e, a, b in amd)
    assert any(e[0] == 1 for I, e, a, b in lit)
