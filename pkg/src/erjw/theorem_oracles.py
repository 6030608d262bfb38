"""Closed-form answers, transcribed as predicates on exponent data.

Nothing here calls the engine.  A generator is the plain tuple
``(I, eps, a, b)`` standing for ``v1h^a v2^b p^I u^eps`` (for MU(n) the
key is the lead term of w_{I,eps}).  Families are enumerated inside a
finite window ``length <= max_len``, ``a <= max_a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

__all__ = [
    "EnumeratedFamily",
    "OracleWindow",
    "Diff",
    "enumerate_family",
    "enumerate_set",
    "diff_reports",
    "smash_families",
    "mu_families",
    "mux1_families",
    "chern_exponents",
    "restrict",
    "summary_families",
    "expected_sets",
    "compare",
    "degree",
]


def degree(I, eps, a, b) -> int:
    return (16 * a - 6 * b - 32 * sum(I) - 16 * sum(eps)) % 48


def length(I, eps) -> int:
    return 2 * sum(I) + sum(eps)


@dataclass(frozen=True)
class OracleWindow:
    n: int
    max_len: int
    max_a: int


@dataclass(frozen=True)
class EnumeratedFamily:
    """One clause of a stated answer.

    ``keys`` is a predicate on (I, eps); ``a_mode`` is "any", "zero" or
    "positive"; ``v2`` is "oe0246" (b = s(eps) mod 2 + 0, 2, 4, 6), "04"
    or "0"; ``order`` is the torsion order or None for page classes.
    """

    ident: str
    keys: Callable
    a_mode: str
    v2: str
    order: int | None = None
    stage: int | None = None
    sym: bool = False
    parity: Callable | None = None   # (I, eps) -> 0/1 overriding s(eps) for v2^{o/e}

    def a_values(self, max_a: int):
        if self.a_mode == "zero":
            return range(1)
        if self.a_mode == "positive":
            return range(1, max_a + 1)
        return range(max_a + 1)

    def b_values(self, eps, I=None):
        o = self.parity(I, eps) if self.parity else sum(eps) % 2
        if self.v2 == "oe0246":
            return (o, o + 2, o + 4, o + 6)
        if self.v2 == "04":
            return (0, 4)
        if self.v2 == "0":
            return (0,)
        raise ValueError(self.v2)


def _smash_condition(I, eps):
    return all(i + e > 0 for i, e in zip(I, eps))


def _property_a(I, eps):
    w = [2 * i + e for i, e in zip(I, eps)]
    return w[-1] > 0 and all(x >= y for x, y in zip(w, w[1:]))


def _candidates(n, max_len, sym):
    for eps in product((0, 1), repeat=n):
        budget = (max_len - sum(eps)) // 2
        if budget < 0:
            continue
        for I in product(range(budget + 1), repeat=n):
            if length(I, eps) > max_len or not _smash_condition(I, eps):
                continue
            if sym and not _property_a(I, eps):
                continue
            yield I, eps


def enumerate_family(family: EnumeratedFamily, d, window: OracleWindow) -> list:
    """Generators of ``family`` in degree ``d`` (None for every degree)."""
    out = []
    for I, eps in _candidates(window.n, window.max_len, family.sym):
        if not family.keys(I, eps):
            continue
        for a in family.a_values(window.max_a):
            for b in family.b_values(eps, I):
                if d is None or degree(I, eps, a, b) == d % 48:
                    out.append((I, eps, a, b))
    return sorted(out)


def enumerate_set(families, window: OracleWindow) -> set:
    out = set()
    for f in families:
        out.update(enumerate_family(f, None, window))
    return out


@dataclass
class Diff:
    missing: list      # in the oracle, not produced
    extra: list        # produced, not in the oracle

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        def enc(g):
            return {"I": list(g[0]), "eps": list(g[1]), "v1": g[2], "v2": g[3]}
        return {"missing": [enc(g) for g in self.missing], "extra": [enc(g) for g in self.extra]}


def diff_reports(engine, oracle) -> Diff:
    """Symmetric difference of two generator sets, per degree order."""
    engine, oracle = set(engine), set(oracle)
    key = lambda g: (degree(*g), g)
    return Diff(sorted(oracle - engine, key=key), sorted(engine - oracle, key=key))


# --- smash^n CP^infty -------------------------------------------------------------

def _ones(I, upto):
    return all(i == 1 for i in I[:upto])


def smash_families(n: int) -> dict:
    """Families of the smash answer: pages E_{1,j}, x^1 by stage, E2, x^3, E4, x^7."""
    fam = {}
    fam["E_1,1"] = EnumeratedFamily("smash.E_1,1", lambda I, e: True, "any", "oe0246")
    fam["E_1,2"] = EnumeratedFamily("smash.E_1,2", lambda I, e: e[0] == 0, "zero", "oe0246")
    for j in range(2, n + 1):
        fam[f"E_1,{j + 1}"] = EnumeratedFamily(
            f"smash.E_1,{j + 1}",
            lambda I, e, j=j: not any(e[:j]) and _ones(I, j - 1),
            "zero", "oe0246")
    fam["x1.0"] = EnumeratedFamily("smash.x1.0", lambda I, e: True, "any", "oe0246", 1, 0)
    fam["x1.1"] = EnumeratedFamily("smash.x1.1", lambda I, e: e[0] == 0, "positive", "oe0246", 1, 1)
    for j in range(2, n + 1):
        fam[f"x1.{j}"] = EnumeratedFamily(
            f"smash.x1.{j}",
            lambda I, e, j=j: not any(e[:j]) and _ones(I, j - 2) and I[j - 2] > 1,
            "zero", "oe0246", 1, j)
    top = lambda I, e: not any(e) and _ones(I, n - 1)
    fam["E2"] = EnumeratedFamily("smash.E2", lambda I, e: top(I, e) and I[-1] >= 1, "zero", "oe0246")
    fam["x3"] = EnumeratedFamily("smash.x3", lambda I, e: top(I, e) and I[-1] >= 2, "zero", "04", 3)
    fam["E4"] = EnumeratedFamily("smash.E4", lambda I, e: top(I, e) and I[-1] == 1, "zero", "04")
    fam["x7"] = EnumeratedFamily("smash.x7", lambda I, e: top(I, e) and I[-1] == 1, "zero", "0", 7)
    return fam


# --- MU(n) ------------------------------------------------------------------------

def _i(I, k):
    """i_k with the convention i_{n+1} = 0 (1-based)."""
    return I[k - 1] if k <= len(I) else 0


def _first_part(I, j):
    return all(_i(I, 2 * b - 1) == _i(I, 2 * b) for b in range(1, (j + 1) // 2 + 1))


def _second_part(I, j, b, last_strict=False):
    """Second part of E_{1,j+1} with parameter b; optionally i_j > i_{j+1} replaces the last equality."""
    if not 0 < 2 * b + 2 <= j + 1:
        return False
    if not all(_i(I, 2 * c - 1) == _i(I, 2 * c) for c in range(1, b + 1)):
        return False
    if not _i(I, 2 * b + 1) > _i(I, 2 * b + 2):
        return False
    for a in range(b + 1, (j + 1) // 2 + 1):
        if not 2 * b < 2 * a < j + 1:
            continue
        if last_strict and 2 * a == j:
            if not _i(I, j) > _i(I, j + 1):
                return False
        elif _i(I, 2 * a) != _i(I, 2 * a + 1):
            return False
    if last_strict and j % 2 == 0 and 2 * b + 2 > j:
        return False
    return True


def _k_to_key(K):
    n = len(K)
    return tuple(sum(K[j:]) for j in range(n)), (0,) * n


def _p_family(n, support, needs, top_exact=None):
    """Lead keys of P^K with K supported on ``support`` and K_k >= needs[k]."""
    def pred(I, e):
        if any(e):
            return False
        K = [I[k] - (I[k + 1] if k + 1 < n else 0) for k in range(n)]
        if any(x < 0 for x in K):
            return False
        for k in range(n):
            if K[k] and (k + 1) not in support:
                return False
            if K[k] < needs.get(k + 1, 0):
                return False
        if top_exact is not None and K[n - 1] != top_exact:
            return False
        return True
    return pred


def mu_families(n: int) -> dict:
    fam = {}
    for j in range(1, n + 1):
        base = lambda I, e, j=j: not any(e[:j])
        fam[f"E_1,{j + 1}.free"] = EnumeratedFamily(
            f"mu.E_1,{j + 1}.free", lambda I, e, j=j, base=base: base(I, e) and _first_part(I, j),
            "any", "oe0246", sym=True)
        fam[f"E_1,{j + 1}.fixed"] = EnumeratedFamily(
            f"mu.E_1,{j + 1}.fixed",
            lambda I, e, j=j, base=base: base(I, e) and any(_second_part(I, j, b) for b in range(0, j + 1)),
            "zero", "oe0246", sym=True)
        if j % 2 == 1:
            q = (j - 1) // 2
            fam[f"x1.{j}"] = EnumeratedFamily(
                f"mu.x1.{j}",
                lambda I, e, j=j, q=q, base=base: base(I, e)
                and all(_i(I, 2 * b - 1) == _i(I, 2 * b) for b in range(1, q + 1))
                and _i(I, j) > _i(I, j + 1),
                "positive", "oe0246", 1, j, sym=True)
        else:
            fam[f"x1.{j}"] = EnumeratedFamily(
                f"mu.x1.{j}",
                lambda I, e, j=j, base=base: base(I, e)
                and any(_second_part(I, j, b, last_strict=True) for b in range(0, j + 1)),
                "zero", "oe0246", 1, j, sym=True)
    fam["x1.0"] = EnumeratedFamily("mu.x1.0", lambda I, e: True, "any", "oe0246", 1, 0, sym=True)
    if n % 2 == 0:
        evens = set(range(2, n + 1, 2))
        fam["E2"] = EnumeratedFamily("mu.E2", _p_family(n, evens, {n: 1}), "any", "oe0246", sym=True)
        fam["x3"] = EnumeratedFamily("mu.x3", _p_family(n, evens, {n: 1}), "positive", "04", 3, sym=True)
        fam["E4"] = EnumeratedFamily("mu.E4", _p_family(n, evens, {n: 1}), "zero", "04", sym=True)
        fam["x7"] = EnumeratedFamily("mu.x7", _p_family(n, evens, {n: 1}), "zero", "0", 7, sym=True)
    else:
        m = (n - 1) // 2
        e2, x3 = [], []
        for b in range(0, m + 1):
            support = set(range(2, 2 * b + 1, 2)) | set(range(2 * b + 1, n + 1, 2))
            needs = {2 * b + 1: 1, n: 1}
            if 2 * b + 1 == n:
                needs = {n: 2}
            x3.append(_p_family(n, support, needs))
            if b < m:
                e2.append(_p_family(n, support, needs))
        top_support = set(range(2, n, 2)) | {n}
        e2.append(_p_family(n, top_support, {n: 1}))
        fam["E2"] = EnumeratedFamily("mu.E2", lambda I, e: any(p(I, e) for p in e2), "zero", "oe0246", sym=True)
        fam["x3"] = EnumeratedFamily("mu.x3", lambda I, e: any(p(I, e) for p in x3), "zero", "04", 3, sym=True)
        e4 = _p_family(n, set(range(2, n, 2)) | {n}, {n: 1}, top_exact=1)
        fam["E4"] = EnumeratedFamily("mu.E4", e4, "zero", "04", sym=True)
        fam["x7"] = EnumeratedFamily("mu.x7", e4, "zero", "0", 7, sym=True)
    return fam


def chern_exponents(I, eps) -> tuple:
    """J with w_{I,eps} = c^J mod higher filtration: j_k = m_k - m_{k+1}."""
    m = [2 * i + e for i, e in zip(I, eps)] + [0]
    return tuple(m[k] - m[k + 1] for k in range(len(I)))


def _pc_split(J, p_support, needs, j, n, lead_fix=False):
    """Does c^J factor as P^K c^r with K on ``p_support`` (K_k >= needs[k]),
    r on j+1..n, and r_n >= 1 unless j = n?

    With ``lead_fix`` the exponent of c_j is only asked to make eps_j = 0,
    i.e. j_j >= 1 and j_j + ... + j_n even.
    """
    for k in range(1, n + 1):
        x = J[k - 1]
        if k > j:
            continue
        if lead_fix and k == j:
            if x < 1 or sum(J[j - 1:]) % 2:
                return False
            continue
        if k not in p_support:
            if x:
                return False
        elif x % 2 or x // 2 < needs.get(k, 0):
            return False
    return j == n or J[n - 1] >= 1


def _odd_sum(J, start):
    return sum(J[k - 1] for k in range(start, len(J) + 1, 2)) % 2


def mux1_families(n: int, reading: str = "amended") -> dict:
    """x^1 lists in Pontryagin/Chern form.

    ``reading="literal"`` takes every clause as printed: c_j enters only
    through P_j (even exponent), and the odd-j parity sum starts at j + 2.
    ``reading="amended"`` lets the exponent of c_j be anything making
    eps_j = 0 and reads v2^{o/e} off j_1 + j_3 + ... directly.  In both,
    the even-j parity sum starts at j + 1.
    """
    if reading not in ("literal", "amended"):
        raise ValueError(reading)
    fix = reading == "amended"
    lemma = lambda I, e: _odd_sum(chern_exponents(I, e), 1)
    fam = {"x1.0": EnumeratedFamily("mux1.x1.0", lambda I, e: chern_exponents(I, e)[-1] >= 1,
                                    "any", "oe0246", 1, 0, sym=True, parity=lemma)}
    for j in range(1, n + 1):
        if j % 2:
            b = (j - 1) // 2
            sup = set(range(2, 2 * b + 1, 2)) | {j}
            pred = lambda I, e, sup=sup, j=j: _pc_split(chern_exponents(I, e), sup, {j: 1}, j, n, fix)
            par = lemma if fix else (lambda I, e, j=j: _odd_sum(chern_exponents(I, e), j + 2))
            fam[f"x1.{j}"] = EnumeratedFamily(f"mux1.x1.{j}", pred, "positive", "oe0246", 1, j,
                                              sym=True, parity=par)
        else:
            splits = []
            for b in range(0, j // 2):
                sup = set(range(2, 2 * b + 1, 2)) | set(range(2 * b + 1, j, 2)) | {j}
                splits.append((sup, {2 * b + 1: 1, j: 1}))
            pred = lambda I, e, splits=splits, j=j: any(
                _pc_split(chern_exponents(I, e), sup, nd, j, n, fix) for sup, nd in splits)
            par = lambda I, e, j=j: _odd_sum(chern_exponents(I, e), j + 1)
            fam[f"x1.{j}"] = EnumeratedFamily(f"mux1.x1.{j}", pred, "zero", "oe0246", 1, j,
                                              sym=True, parity=par)
    return fam


def restrict(family: EnumeratedFamily, mode: str) -> EnumeratedFamily:
    """Degree-8* view keeps v2^{0,4}; degree-16* keeps v2^0 only."""
    from dataclasses import replace
    if mode == "8*":
        return replace(family, ident=family.ident + "@8*", v2="04" if family.v2 != "0" else "0", parity=None)
    if mode == "16*":
        return replace(family, ident=family.ident + "@16*", v2="0", parity=None)
    raise ValueError(mode)


def summary_families(n: int) -> dict:
    """The collected smash x^1 list; clause by clause it is the per-stage list."""
    fam = smash_families(n)
    return {k: fam[k] for k in fam if k.startswith("x1.")}


def expected_sets(space: str, n: int, window: OracleWindow, reading: str = "amended") -> dict:
    """Check name -> oracle generator set.  Names: E2, E4, x3, x7, x1.<stage>,
    E_1,<j+1> for 1 <= j <= n, and for MU also chern.x1.<stage>."""
    fam = smash_families(n) if space == "smash" else mu_families(n)
    names = ["E2", "E4", "x3", "x7"] + [f"x1.{s}" for s in range(n + 1)]
    out = {k: enumerate_set([fam[k]], window) for k in names}
    for j in range(1, n + 1):
        parts = [f for k, f in fam.items() if k.split(".")[0] == f"E_1,{j + 1}"]
        out[f"E_1,{j + 1}"] = enumerate_set(parts, window)
    if space == "mu":
        ch = mux1_families(n, reading)
        for s in range(n + 1):
            out[f"chern.x1.{s}"] = enumerate_set([ch[f"x1.{s}"]], window)
    return out


def compare(engine_sets: dict, oracle_sets: dict) -> dict:
    """Diff per check; checks missing from ``engine_sets`` are taken for the
    matching x1 stage (the Chern lists describe the same classes)."""
    out = {}
    for name, want in oracle_sets.items():
        got = engine_sets.get(name, engine_sets.get(name.replace("chern.", ""), set()))
        out[name] = diff_reports(got, want)
    return out
