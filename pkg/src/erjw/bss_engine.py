"""Bockstein spectral sequence runner.

Graded mode works over F2 on the basis (key, a) = v1h^a * key, ordered by
key first and then by a.  The differential left after d_{1,0} only keeps
the terms of (1 + c) whose s(eps) parity differs from the source's, which
is what lets the v2 exponents line up (v2^{o/e} bookkeeping).  A single
persistence-style reduction of that differential gives every d_{1,j} at
once; the stage of a pair is read off from the source key.

Exact mode builds the actual d1 matrices over Z_(2) on the same truncated
window and takes local Smith normal forms.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .coefficients import PERIOD
from .exact2local import Local2Rational
from .projective_modules import MonomialKey, SmashElement, conjugate, key_degree, order_key, smash_keys
from .unitary_modules import expand_w, has_property_a, sym_coordinates, sym_keys

__all__ = [
    "Window",
    "Basis",
    "build_basis",
    "Reduction",
    "reduce_graded",
    "GradedState",
    "initial_state",
    "stage_of",
    "slots",
    "local_smith",
    "d1_column",
    "ExactDegree",
    "m_degree",
    "gen_degree",
    "DEFAULT_MAX_LEN",
    "DEFAULT_V1_CAP",
    "DEFAULT_MARGIN",
    "gr_d1_step",
    "run_graded",
    "run_d3",
    "run_d7",
    "run_pages",
    "d5_room",
    "run_exact",
    "exact_dimensions",
    "graded_dimensions",
    "check_lemma12",
    "engine_sets",
    "graded_states",
    "LemmaCheck",
    "Gen",
    "TorsionEntry",
    "PageReport",
    "StageNotInjective",
    "WindowExhausted",
    "RewriteFailed",
    "PageEightNonzero",
    "PrecisionLost",
]

DEFAULT_MAX_LEN = 10
DEFAULT_V1_CAP = 12
DEFAULT_MARGIN = 4


class StageNotInjective(RuntimeError):
    pass


class WindowExhausted(RuntimeError):
    pass


class RewriteFailed(RuntimeError):
    pass


class PageEightNonzero(RuntimeError):
    pass


class PrecisionLost(ArithmeticError):
    """A Smith pivot reached the working 2-adic precision."""


@dataclass(frozen=True)
class Window:
    space: str          # "smash" or "mu"
    n: int
    max_len: int = DEFAULT_MAX_LEN
    v1_cap: int = DEFAULT_V1_CAP
    margin: int = DEFAULT_MARGIN

    def __post_init__(self):
        if self.space not in ("smash", "mu"):
            raise ValueError(f"unknown space {self.space!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.margin < 3:
            raise ValueError("margin must be at least 3")
        if self.max_len < 2 * self.n:
            raise WindowExhausted(f"max_len {self.max_len} < 2n = {2 * self.n}")

    @property
    def trusted_len(self) -> int:
        return self.max_len - self.margin

    @property
    def trusted_v1(self) -> int:
        return self.v1_cap - self.margin

    def trusted(self, key, a: int) -> bool:
        return key.length <= self.trusted_len and a <= self.trusted_v1

    def header(self) -> dict:
        return {"space": self.space, "n": self.n, "max_len": self.max_len,
                "v1_cap": self.v1_cap, "margin": self.margin}


def m_degree(key, a: int) -> int:
    """Degree of v1h^a * key, before any v2 factor."""
    return key_degree(key, a, 0)


def gen_degree(key, a: int, b: int) -> int:
    return key_degree(key, a, b)


# --- basis and conjugation tables ----------------------------------------

@dataclass
class Basis:
    """Sorted keys of a window with exact and mod-2 conjugation data.

    ``conj[i]`` maps key indices to the Z_(2) v1h-polynomial coefficient of
    c(key_i); ``d2[i]`` is the F2 image of the parity-changing part of
    (1 + c) as a set of (key index, v1h shift).
    """

    window: Window
    keys: list
    index: dict
    conj: list
    d2: list
    dfull: list

    @property
    def width(self) -> int:
        return self.window.v1_cap + 1

    def idx(self, k: int, a: int) -> int:
        return k * self.width + a

    def split(self, x: int):
        return divmod(x, self.width)


def _conj_table(window: Window, key):
    L = window.max_len
    if window.space == "smash":
        img = conjugate(SmashElement.monomial(key, L))
        return dict(img.terms)
    img = conjugate(expand_w(key, L))
    return sym_coordinates(img)


def _mod2_rows(key, conj_terms, index):
    """Mod-2 images of (1 + c): parity-changing part and everything."""
    s = key.s_eps % 2
    d2, dfull = set(), set()
    for k2, coeff in conj_terms.items():
        j = index.get(k2)
        if j is None:
            continue
        for mono in coeff.mod2():
            if mono.v2_exp:
                raise AssertionError("conjugation produced a v2 power")
            t = (j, mono.v1_exp)
            if k2 == key and mono.v1_exp == 0:
                # c(y) = (-1)^s y + ..., and y + y vanishes mod 2
                continue
            dfull ^= {t}
            if k2.s_eps % 2 != s:
                d2 ^= {t}
    return frozenset(d2), frozenset(dfull)


@lru_cache(maxsize=None)
def build_basis(window: Window) -> Basis:
    if window.space == "smash":
        keys = smash_keys(window.n, window.max_len)
    else:
        keys = sym_keys(window.n, window.max_len)
    index = {k: i for i, k in enumerate(keys)}
    conj, d2, dfull = [], [], []
    for k in keys:
        terms = _conj_table(window, k)
        conj.append(terms)
        a, b = _mod2_rows(k, terms, index)
        d2.append(a)
        dfull.append(b)
    return Basis(window, keys, index, conj, d2, dfull)


# --- F2 reduction ---------------------------------------------------------

def _low(v: int) -> int:
    return (v & -v).bit_length() - 1


def _bits(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


@dataclass
class Reduction:
    """Pairs of a filtration-raising F2 differential.

    Columns are processed from the highest basis element down and reduced
    only by columns already processed, so each pair (source, target) is a
    differential in the spectral sequence of the order filtration with the
    target its lead term.
    """

    basis: Basis
    model: str
    size: int
    pair_of: dict          # source -> target
    owner: dict            # target -> source
    R: dict                # reduced column of each source
    V: dict                # cycle representative of each survivor
    survivors: list

    def is_survivor(self, x: int) -> bool:
        return x in self.V

    def normal_form(self, v: int) -> list:
        """Survivors whose representatives sum to ``v`` modulo boundaries."""
        out = []
        while v:
            low = _low(v)
            src = self.owner.get(low)
            if src is not None:
                v ^= self.R[src]
            elif low in self.V:
                out.append(low)
                v ^= self.V[low]
            else:
                raise RewriteFailed(f"element {self.basis.split(low)} is not a cycle")
        return out

    def times_v1(self, v: int) -> int:
        """Multiply a bit vector by v1h, dropping what leaves the window."""
        w = self.basis.width
        out = 0
        for x in _bits(v):
            if (x % w) + 1 < w:
                out |= 1 << (x + 1)
        return out


def _column(basis: Basis, table, x: int) -> int:
    k, a = basis.split(x)
    w = basis.width
    v = 0
    for j, da in table[k]:
        if a + da < w:
            v ^= 1 << (j * w + a + da)
    return v


@lru_cache(maxsize=None)
def reduce_graded(window: Window, model: str = "parity") -> Reduction:
    basis = build_basis(window)
    table = basis.d2 if model == "parity" else basis.dfull
    size = len(basis.keys) * basis.width
    return _reduce(basis, model, size, lambda x: _column(basis, table, x))


def _reduce(basis, model, size, column) -> Reduction:
    owner, pair_of, R, combo, cycles = {}, {}, {}, {}, {}
    for x in range(size - 1, -1, -1):
        col = column(x)
        acc = 1 << x
        while col:
            src = owner.get(_low(col))
            if src is None:
                break
            col ^= R[src]
            acc ^= combo[src]
        if col:
            low = _low(col)
            owner[low] = x
            pair_of[x] = low
            R[x] = col
            combo[x] = acc
        else:
            cycles[x] = acc
    surv = sorted(x for x in cycles if x not in owner)
    return Reduction(basis, model, size, pair_of, owner, R, {x: cycles[x] for x in surv}, surv)


# --- exact mode -------------------------------------------------------------

PRECISION_BITS = 64


def _val(x: int, K: int) -> int:
    return K if x == 0 else ((x & -x).bit_length() - 1)


def local_smith(columns, K: int = PRECISION_BITS) -> list:
    """Valuations of the elementary divisors of a matrix over Z_(2).

    ``columns`` is a list of ``{row: Local2Rational or int}``.  Work happens
    in Z/2^K.  Every pivot has minimal valuation among what is left, so an
    update subtracts (x / 2^v) times entries divisible by 2^v and no
    precision is lost; only divisors of valuation >= K would be invisible,
    and anything past K / 2 is treated as a failure.
    """
    mod = 1 << K
    cols = {}
    for j, col in enumerate(columns):
        c = {}
        for r, q in col.items():
            q = Local2Rational.coerce(q).mod_power_of_two(K) if not isinstance(q, int) else q % mod
            if q:
                c[r] = q
        if c:
            cols[j] = c
    rows = {}
    for j, c in cols.items():
        for r in c:
            rows.setdefault(r, set()).add(j)
    out = []
    v = 0
    while cols and v < K:
        found = False
        for j in sorted(cols, key=lambda j: len(cols[j])):
            if j not in cols:
                continue
            cand = [r for r, q in cols[j].items() if _val(q, K) == v]
            if not cand:
                continue
            i = min(cand, key=lambda r: len(rows[r]))
            p = cols[j][i]
            inv = pow(p >> v, -1, mod)
            pcol = cols.pop(j)
            for r in pcol:
                rows[r].discard(j)
            for l in list(rows[i]):
                cl = cols[l]
                f = ((cl[i] >> v) * inv) % mod
                for r, q in pcol.items():
                    nq = (cl.get(r, 0) - f * q) % mod
                    if nq:
                        if r not in cl:
                            rows[r].add(l)
                        cl[r] = nq
                    elif r in cl:
                        del cl[r]
                        rows[r].discard(l)
                if not cl:
                    del cols[l]
            del rows[i]
            out.append(v)
            found = True
        if not found:
            v += 1
    if cols or any(x >= K // 2 for x in out):
        raise PrecisionLost("an elementary divisor reached the working precision")
    return out


def _exact_gens(window: Window):
    """All window generators (k, a, b) grouped by degree."""
    basis = build_basis(window)
    by_deg = {}
    for k, key in enumerate(basis.keys):
        for a in range(window.v1_cap + 1):
            for b in range(8):
                by_deg.setdefault(gen_degree(key, a, b), []).append((k, a, b))
    return basis, by_deg


def d1_column(basis: Basis, k: int, a: int, b: int) -> dict:
    """Exact d1 of v1h^a v2^b key_k in the window: {(k', a', b'): coeff}."""
    cap = basis.window.v1_cap
    sign = -1 if b % 2 else 1
    out = {}
    b2 = (b - 3) % 8
    out[(k, a, b2)] = Local2Rational(1)
    for k2, coeff in basis.conj[k].items():
        j = basis.index.get(k2)
        if j is None:
            continue
        for mono, q in coeff.terms.items():
            a2 = a + mono.v1_exp
            if a2 > cap:
                continue
            t = (j, a2, b2)
            val = out.get(t, Local2Rational(0)) - q * sign
            if val:
                out[t] = val
            else:
                out.pop(t, None)
    return out


def _smith_out(window: Window, d: int) -> list:
    basis, by_deg = _exact_gens(window)
    cols = []
    for k, a, b in by_deg.get(d, []):
        cols.append(d1_column(basis, k, a, b))
    return local_smith(cols)


@dataclass
class ExactDegree:
    degree: int
    dim: int
    rank_out: int
    rank_in: int
    free: int
    torsion: list          # valuations of incoming elementary divisors > 0

    @property
    def f2_dim(self) -> int:
        return self.free + len(self.torsion)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ERJW_THREADS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def _all_smith(window: Window) -> dict:
    degrees = list(range(PERIOD))
    workers = _threads()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(_smith_out, [window] * PERIOD, degrees))
    else:
        res = [_smith_out(window, d) for d in degrees]
    return dict(zip(degrees, res))


def run_exact(window: Window, degree: int) -> ExactDegree:
    """Homology of the exact d1 on the truncated window, in degree ``degree`` mod 48."""
    d = degree % PERIOD
    _, by_deg = _exact_gens(window)
    smith = _all_smith(window)
    out_div = smith[d]
    in_div = smith[(d - 18) % PERIOD]
    dim = len(by_deg.get(d, []))
    free = dim - len(out_div) - len(in_div)
    return ExactDegree(d, dim, len(out_div), len(in_div), free, sorted(v for v in in_div if v > 0))


def exact_dimensions(window: Window) -> dict:
    return {d: run_exact(window, d).f2_dim for d in range(PERIOD)}


def slots(s_eps: int) -> tuple:
    """The four v2 exponents b = s(eps) mod 2 + 0, 2, 4, 6 carried after d_{1,0}."""
    o = s_eps % 2
    return (o, o + 2, o + 4, o + 6)


def graded_dimensions(window: Window, model: str = "parity") -> dict:
    red = reduce_graded(window, model)
    basis = red.basis
    out = {d: 0 for d in range(PERIOD)}
    for x in red.survivors:
        k, a = basis.split(x)
        key = basis.keys[k]
        for b in slots(key.s_eps):
            out[gen_degree(key, a, b)] += 1
    return out


# --- reports ----------------------------------------------------------------

SCHEMA = "erjw/1"


@dataclass(frozen=True)
class Gen:
    key: MonomialKey
    a: int
    b: int
    block: str = "Z/2"

    @property
    def degree(self) -> int:
        return gen_degree(self.key, self.a, self.b)

    def ident(self) -> tuple:
        return (self.key.I, self.key.eps, self.a, self.b)

    def render(self) -> str:
        parts = []
        if self.a:
            parts.append("v1h" if self.a == 1 else f"v1h^{self.a}")
        if self.b:
            parts.append("v2" if self.b == 1 else f"v2^{self.b}")
        parts.append(self.key.render())
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"key": self.key.to_json(), "v1": self.a, "v2": self.b, "block": self.block}


@dataclass(frozen=True)
class TorsionEntry:
    order: int
    stage: int | None
    source: Gen
    target: Gen
    coeff: str = "1"

    def to_json(self) -> dict:
        out = {"source": self.source.to_json(), "target": self.target.to_json(), "coeff": self.coeff}
        if self.stage is not None:
            out["stage"] = self.stage
        return out


@dataclass
class PageReport:
    window: Window
    page: int
    gens: list
    torsion: dict = field(default_factory=lambda: {1: [], 3: [], 7: []})
    notes: list = field(default_factory=list)
    context: object = None

    def by_degree(self) -> dict:
        out = {}
        for g in self.gens:
            out.setdefault(g.degree, []).append(g)
        return dict(sorted(out.items()))

    def trusted_gens(self) -> list:
        return [g for g in self.gens if self.window.trusted(g.key, g.a)]

    def to_json(self) -> dict:
        degs = []
        for d, gs in self.by_degree().items():
            gs = sorted(gs, key=lambda g: (order_key(g.key), g.a, g.b))
            degs.append({"deg": d, "gens": [g.to_json() for g in gs]})
        return {
            "schema": SCHEMA,
            "params": self.window.header(),
            "space": self.window.space,
            "n": self.window.n,
            "page": self.page,
            "degrees": degs,
            "torsion": {str(r): [t.to_json() for t in self.torsion.get(r, [])] for r in (1, 3, 7)},
            "notes": list(self.notes),
        }

    def render(self) -> str:
        w = self.window
        lines = [f"# space={w.space} n={w.n} page={self.page} max_len={w.max_len} "
                 f"v1_cap={w.v1_cap} margin={w.margin}"]
        for d, gs in self.by_degree().items():
            gs = sorted(gs, key=lambda g: (order_key(g.key), g.a, g.b))
            lines.append(f"deg {d}: " + ", ".join(g.render() for g in gs))
        for r in (1, 3, 7):
            ts = self.torsion.get(r, [])
            lines.append(f"x^{r}-torsion: {len(ts)} generators")
        lines.extend(f"note: {x}" for x in self.notes)
        return "\n".join(lines)


# --- graded mode --------------------------------------------------------------

def stage_of(key) -> int:
    """First index j with eps_j = 1; 0 when eps = 0."""
    for j, e in enumerate(key.eps, 1):
        if e:
            return j
    return 0


@dataclass
class GradedState:
    window: Window
    stage: int
    remaining: set                 # basis positions (key index, a) still alive
    block: str
    torsion_log: list
    reduction: Reduction
    edge: set = field(default_factory=set)

    @property
    def space(self) -> str:
        return self.window.space


def initial_state(window: Window, model: str = "parity") -> GradedState:
    red = reduce_graded(window, model)
    return GradedState(window, -1, set(range(red.size)), "Z_(2)[v1h]{v2^0..7}", [], red)


def gr_d1_step(state: GradedState) -> GradedState:
    """Advance one stage: j = 0 is d_{1,0}, j >= 1 removes the W_j pairs."""
    red = state.reduction
    basis = red.basis
    w = state.window
    j = state.stage + 1
    log = list(state.torsion_log)
    remaining = set(state.remaining)
    edge = set(state.edge)
    if j == 0:
        for x in sorted(remaining):
            k, a = basis.split(x)
            key = basis.keys[k]
            for b in slots(key.s_eps):
                log.append(TorsionEntry(1, 0, Gen(key, a, (b + 3) % 8, "Z_(2)"), Gen(key, a, b, "Z_(2)"), "2"))
        return GradedState(w, 0, remaining, "Z/2[v1h]{v2^oe v2^0,2,4,6}", log, red, edge)
    if j > w.n:
        raise ValueError("all stages already run")
    for src in sorted(red.pair_of, reverse=True):
        k, a = basis.split(src)
        key = basis.keys[k]
        if stage_of(key) != j:
            continue
        tgt = red.pair_of[src]
        k2, a2 = basis.split(tgt)
        tkey = basis.keys[k2]
        if src not in remaining or tgt not in remaining:
            raise StageNotInjective(f"stage {j}: {key.render()} or its target already removed")
        if any(tkey.eps[:j]):
            if w.trusted(tkey, a2):
                raise StageNotInjective(f"stage {j}: target {tkey.render()} has eps_k = 1 for k <= {j}")
            edge.add(tgt)
        remaining.discard(src)
        remaining.discard(tgt)
        for b in slots(key.s_eps):
            log.append(TorsionEntry(1, j, Gen(key, a, b), Gen(tkey, a2, (b - 3) % 8)))
    for x in remaining:
        k, a = basis.split(x)
        key = basis.keys[k]
        if any(key.eps[:j]):
            if w.trusted(key, a):
                raise StageNotInjective(f"stage {j}: {key.render()} v1h^{a} survives with eps_k = 1, k <= {j}")
            edge.add(x)
    return GradedState(w, j, remaining, state.block, log, red, edge)


def run_graded(window: Window, model: str = "parity") -> PageReport:
    """Page 2 (= page 3) together with the x^1-torsion log."""
    state = initial_state(window, model)
    while state.stage < window.n:
        state = gr_d1_step(state)
    red = state.reduction
    if set(red.survivors) != state.remaining:
        raise StageNotInjective("stage-wise removal disagrees with the global reduction")
    basis = red.basis
    gens = []
    for x in red.survivors:
        k, a = basis.split(x)
        key = basis.keys[k]
        for b in slots(key.s_eps):
            gens.append(Gen(key, a, b))
    rep = PageReport(window, 2, gens, {1: state.torsion_log, 3: [], 7: []}, context=state)
    if any(g.degree % 2 for g in gens):
        raise RewriteFailed("odd-degree class on page 2")
    rep.notes.append("E2 = E3: every class sits in even degree and d2 has odd degree")
    if state.edge:
        rep.notes.append(f"{len(state.edge)} window-edge classes outside the trusted region")
    return rep


# --- d3 and d7 ----------------------------------------------------------------

def _pair_map(sources, column):
    """Lead-term pairing of an F2 map given on ``sources`` (bit positions).

    Sources are taken from the highest down, so a source is only modified
    by higher ones; returns (pairs, kernel) with kernel combinations keyed by
    their lowest source.
    """
    owner, R, combo, pairs, kernel = {}, {}, {}, {}, {}
    for x in sorted(sources, reverse=True):
        col = column(x)
        acc = 1 << x
        while col:
            src = owner.get(_low(col))
            if src is None:
                break
            col ^= R[src]
            acc ^= combo[src]
        if col:
            owner[_low(col)] = x
            R[x] = col
            combo[x] = acc
            pairs[x] = _low(col)
        else:
            kernel[x] = acc
    return pairs, kernel


def _survivor_gen(basis, x, b, block="Z/2"):
    k, a = basis.split(x)
    return Gen(basis.keys[k], a, b, block)


def run_d3(page3: PageReport) -> PageReport:
    """d3(v2^b m) = v1h v2^(b-6) m on the slots b = o + 2, o + 6."""
    state = page3.context
    red = state.reduction
    basis = red.basis
    surv = red.survivors

    def column(x):
        v = red.times_v1(red.V[x])
        out = 0
        for y in red.normal_form(v):
            out |= 1 << y
        return out

    pairs, kernel = _pair_map(surv, column)
    hit = set(pairs.values())
    tors = []
    gens = []
    for x in surv:
        k, _ = basis.split(x)
        o = basis.keys[k].s_eps % 2
        if x in pairs:
            for b in (o + 2, o + 6):
                tors.append(TorsionEntry(3, None, _survivor_gen(basis, x, b), _survivor_gen(basis, pairs[x], (b - 6) % 8)))
        else:
            gens.extend(_survivor_gen(basis, x, b) for b in (o + 2, o + 6))
        if x not in hit:
            gens.extend(_survivor_gen(basis, x, b) for b in (o, o + 4))
    for t in tors:
        if (t.target.degree - t.source.degree) % PERIOD != 52 % PERIOD:
            raise RewriteFailed("d3 does not raise degree by 52")
    torsion = dict(page3.torsion)
    torsion[3] = tors
    rep = PageReport(page3.window, 4, gens, torsion, [], context=(state, pairs, kernel))
    rep.notes.append("E4 = E7: d4 and d6 have odd degree")
    rep.notes.append("d5 vanishes: no two trusted page-4 classes are 86 apart in degree"
                     if d5_room(rep) == [] else "trusted page-4 classes 86 apart in degree exist")
    return rep


def d5_room(page4: PageReport) -> list:
    """Trusted page-4 pairs whose degrees differ by 17*5 + 1 = 86 (mod 48)."""
    gens = page4.trusted_gens()
    return [(g1, g2) for g1 in gens for g2 in gens if (g2.degree - g1.degree) % PERIOD == 86 % PERIOD]


def run_d7(page7: PageReport) -> PageReport:
    """d7(v2^4 m) = m: the v2^(o+4) classes kill the v2^o classes (and o+6 kills o+2)."""
    alive = {g.ident(): g for g in page7.gens}
    tors = []
    for g in sorted(page7.gens, key=lambda g: (order_key(g.key), g.a, g.b)):
        o = g.key.s_eps % 2
        if g.b not in ((o + 4) % 8, (o + 6) % 8):
            continue
        tgt = Gen(g.key, g.a, (g.b - 12) % 8, g.block)
        if tgt.ident() not in alive or g.ident() not in alive:
            continue
        del alive[g.ident()]
        del alive[tgt.ident()]
        tors.append(TorsionEntry(7, None, g, tgt))
    torsion = dict(page7.torsion)
    torsion[7] = tors
    rep = PageReport(page7.window, 8, list(alive.values()), torsion, [], context=page7.context)
    if alive:
        raise PageEightNonzero(f"{len(alive)} classes survive to page 8")
    return rep


def run_pages(window: Window, model: str = "parity") -> dict:
    """Pages 2, 4 and 8 keyed by page number."""
    p2 = run_graded(window, model)
    p4 = run_d3(p2)
    p8 = run_d7(p4)
    return {2: p2, 4: p4, 8: p8}


# --- lead-term recipes for d_{1,j} on MU(n) ---------------------------------------

def graded_states(window: Window, model: str = "parity") -> list:
    """States after stages 0 .. n; entry j is E_{1,j+1}."""
    state = gr_d1_step(initial_state(window, model))
    out = [state]
    while state.stage < window.n:
        state = gr_d1_step(state)
        out.append(state)
    return out


def _run_below(I, h: int) -> int:
    """Maximal t with i_{h-t} = ... = i_{h-1} = i_h + 1 (1-based h)."""
    t = 0
    while h - t - 1 >= 1 and I[h - t - 2] == I[h - 1] + 1:
        t += 1
    return t


@dataclass
class LemmaCheck:
    lemma: str
    stage: int
    source: Gen
    predicted: Gen
    actual: Gen | None

    @property
    def ok(self) -> bool:
        return self.actual is not None and self.actual.ident() == self.predicted.ident()


def check_lemma12(window: Window, model: str = "parity") -> list:
    """Compare the engine's d_{1,j} lead terms with the three closed recipes.

    Let s be the run of i = i_j + 1 just below j.  Every recipe trades u_j
    for p_j; on top of that "free" (v1h-free source, s even) raises a by
    one, "odd run" (s odd, even run below j - s) adds p_{j-s}, and
    "even run" adds p_k for the first k < j - s with an even run that
    lands in E_{1,j}.
    """
    if window.space != "mu":
        raise ValueError("the d_{1,j} recipes are stated for MU(n)")
    states = graded_states(window, model)
    red = states[0].reduction
    basis = red.basis
    w = basis.width
    out = []
    for j in range(1, window.n + 1):
        alive = states[j - 1].remaining
        for x in sorted(alive):
            k, a = basis.split(x)
            key = basis.keys[k]
            if stage_of(key) != j or not window.trusted(key, a):
                continue
            I = key.I
            s = _run_below(I, j)
            # free part: v1h * key is still alive in E_{1,j}
            free = (k * w + 1) in alive
            pred = None
            if free and s % 2 == 0:
                pred = ("free", key.shift(j, 1, -1), a + 1)
            elif not free and a == 0 and s % 2 == 1:
                t = _run_below(I, j - s)
                if t % 2 == 0:
                    pred = ("odd run", key.shift(j - s, 1).shift(j, 1, -1), 0)
            elif not free and a == 0 and s % 2 == 0:
                for kk in range(1, j - s):
                    if _run_below(I, kk) % 2:
                        continue
                    cand = key.shift(kk, 1).shift(j, 1, -1)
                    ci = basis.index.get(cand)
                    if ci is not None and ci * w in alive and has_property_a(cand.I, cand.eps):
                        pred = ("even run", cand, 0)
                        break
            if pred is None:
                continue
            lemma, pkey, pa = pred
            if not window.trusted(pkey, pa):
                continue
            tgt = red.pair_of.get(x)
            actual = None
            if tgt is not None:
                k2, a2 = basis.split(tgt)
                actual = Gen(basis.keys[k2], a2, 0)
            out.append(LemmaCheck(lemma, j, Gen(key, a, 0), Gen(pkey, pa, 0), actual))
    return out


def engine_sets(pages: dict, states=None) -> dict:
    """Trusted generator idents per check (E2, E4, x3, x7, x1.<stage>) from :func:`run_pages`.

    With ``states`` from :func:`graded_states`, also E_1,<j+1> for j >= 1.
    """
    w = pages[2].window
    keep = lambda gs: {g.ident() for g in gs if w.trusted(g.key, g.a)}
    out = {
        "E2": keep(pages[2].gens),
        "E4": keep(pages[4].gens),
        "E8": keep(pages[8].gens),
        "x3": keep(t.target for t in pages[4].torsion[3]),
        "x7": keep(t.target for t in pages[8].torsion[7]),
    }
    for s in range(w.n + 1):
        out[f"x1.{s}"] = keep(t.target for t in pages[2].torsion[1] if t.stage == s)
    for j, st in enumerate(states or ()):
        if j == 0:
            continue
        basis = st.reduction.basis
        alive = set()
        for x in st.remaining:
            k, a = basis.split(x)
            key = basis.keys[k]
            if w.trusted(key, a):
                alive.update((key.I, key.eps, a, b) for b in slots(key.s_eps))
        out[f"E_1,{j + 1}"] = alive
    return out
