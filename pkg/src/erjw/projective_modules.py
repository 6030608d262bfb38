"""E(2)^*(smash^n CP^infty) on the basis p^I u^eps.

A basis key is a pair of n-tuples (I, eps) with eps in {0, 1} and
``i_k + eps_k > 0``.  Its length ``2 s(I) + s(eps)`` is the filtration the
whole engine truncates against: multiplication and conjugation never lower
it, so dropping everything longer than L is a quotient by an ideal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .coefficients import CoeffElement, conj_coeff
from .formal_group import TruncationExceeded, conj_u_canonical, u_power_canonical

__all__ = [
    "MonomialKey",
    "SmashElement",
    "ZeroElement",
    "LT",
    "EQ",
    "GT",
    "order_compare",
    "order_key",
    "lead_term",
    "conjugate",
    "d1_exact",
    "mul_by",
    "smash_keys",
    "key_degree",
]

LT, EQ, GT = -1, 0, 1


class ZeroElement(ValueError):
    """Lead term of zero requested."""


@dataclass(frozen=True, eq=False)
class MonomialKey:
    I: tuple
    eps: tuple

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(self.I))
        object.__setattr__(self, "eps", tuple(self.eps))
        if len(self.I) != len(self.eps) or not self.I:
            raise ValueError("I and eps must be nonempty and of equal length")
        for i, e in zip(self.I, self.eps):
            if i < 0 or e not in (0, 1):
                raise ValueError(f"bad exponents {self.I}, {self.eps}")
            if i + e == 0:
                raise ValueError(f"smash condition fails for {self.I}, {self.eps}")

    @classmethod
    def product_key(cls, I, eps) -> "MonomialKey":
        """A key of the product space, where factors with i_k + eps_k = 0 are allowed."""
        key = object.__new__(cls)
        object.__setattr__(key, "I", tuple(I))
        object.__setattr__(key, "eps", tuple(eps))
        return key

    def __eq__(self, other):
        if not isinstance(other, MonomialKey):
            return NotImplemented
        return self.I == other.I and self.eps == other.eps

    def __hash__(self):
        return hash((self.I, self.eps))

    @property
    def is_smash(self) -> bool:
        return all(i + e > 0 for i, e in zip(self.I, self.eps))

    @property
    def n(self) -> int:
        return len(self.I)

    @property
    def length(self) -> int:
        return 2 * sum(self.I) + sum(self.eps)

    @property
    def s_eps(self) -> int:
        return sum(self.eps)

    @property
    def s_I(self) -> int:
        return sum(self.I)

    def weights(self) -> tuple:
        """The list ``2 i_k + eps_k``."""
        return tuple(2 * i + e for i, e in zip(self.I, self.eps))

    def shift(self, j: int, di: int = 0, de: int = 0) -> "MonomialKey":
        """Add ``di`` to i_j and ``de`` to eps_j (j is 1-based)."""
        I = list(self.I)
        E = list(self.eps)
        I[j - 1] += di
        E[j - 1] += de
        return MonomialKey(tuple(I), tuple(E))

    def render(self) -> str:
        parts = []
        for k, (i, e) in enumerate(zip(self.I, self.eps), 1):
            if i:
                parts.append(f"p{k}" if i == 1 else f"p{k}^{i}")
            if e:
                parts.append(f"u{k}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"I": list(self.I), "eps": list(self.eps)}

    @classmethod
    def from_json(cls, d) -> "MonomialKey":
        return cls(tuple(d["I"]), tuple(d["eps"]))

    def __lt__(self, other):
        return order_key(self) < order_key(other)


def order_key(key: MonomialKey) -> tuple:
    """Sort key realising the filtration order: length, then 2i_k + eps_k from k = n down."""
    return (key.length, tuple(reversed(key.weights())))


def order_compare(a: MonomialKey, b: MonomialKey) -> int:
    if a.n != b.n:
        raise ValueError("keys have different factor counts")
    ka, kb = order_key(a), order_key(b)
    if ka == kb:
        # equal weights force equal exponents
        return EQ
    return LT if ka < kb else GT


def key_degree(key: MonomialKey, v1: int = 0, v2: int = 0) -> int:
    return (16 * v1 - 6 * v2 - 32 * key.s_I - 16 * key.s_eps) % 48


def smash_keys(n: int, max_len: int, min_len: int = 0):
    """All smash keys with ``min_len <= length <= max_len``, in increasing order."""
    out = []
    for eps in product((0, 1), repeat=n):
        se = sum(eps)
        budget = (max_len - se) // 2
        if budget < 0:
            continue
        for I in product(range(budget + 1), repeat=n):
            if 2 * sum(I) + se > max_len or 2 * sum(I) + se < min_len:
                continue
            if all(i + e > 0 for i, e in zip(I, eps)):
                out.append(MonomialKey(I, eps))
    out.sort(key=order_key)
    return out


class SmashElement:
    """Finitely supported MonomialKey -> CoeffElement, known modulo length > trunc_len."""

    __slots__ = ("n", "trunc_len", "terms")

    def __init__(self, n: int, trunc_len: int, terms=None):
        self.n = n
        self.trunc_len = trunc_len
        clean = {}
        for k, c in (terms or {}).items():
            if k.n != n:
                raise ValueError("key has wrong factor count")
            if k.length > trunc_len:
                continue
            if not isinstance(c, CoeffElement):
                c = CoeffElement.scalar(c)
            if c:
                clean[k] = c
        self.terms = clean

    @classmethod
    def monomial(cls, key: MonomialKey, trunc_len: int, coeff=None):
        coeff = CoeffElement.scalar(1) if coeff is None else coeff
        return cls(key.n, trunc_len, {key: coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SmashElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __add__(self, other: "SmashElement") -> "SmashElement":
        L = min(self.trunc_len, other.trunc_len)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return SmashElement(self.n, L, out)

    def __neg__(self):
        return SmashElement(self.n, self.trunc_len, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SmashElement":
        if not isinstance(c, CoeffElement):
            c = CoeffElement.scalar(c)
        return SmashElement(self.n, self.trunc_len, {k: v * c for k, v in self.terms.items()})

    def truncate(self, L: int) -> "SmashElement":
        return SmashElement(self.n, min(L, self.trunc_len), self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: order_key(kv[0]))

    def degrees(self) -> set:
        out = set()
        for k, c in self.terms.items():
            for m in c.terms:
                out.add(key_degree(k, m.v1_exp, m.v2_exp))
        return out

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def mod2(self) -> dict:
        """``{(key, v1_exp, v2_exp): 1}`` for the odd coefficients."""
        out = {}
        for k, c in self.terms.items():
            for m in c.mod2():
                out[(k, m.v1_exp, m.v2_exp)] = 1
        return out

    def __mul__(self, other):
        if isinstance(other, SmashElement):
            return smash_product(self, other)
        return self.scale(other)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_terms():
            for m, q in c.items():
                body = " ".join(x for x in (m.render(), k.render()) if x)
                if q == 1:
                    parts.append(body)
                elif q == -1:
                    parts.append("-" + body)
                else:
                    parts.append(f"{q} {body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"SmashElement({self.render()})"

    def to_json(self) -> list:
        out = []
        for k, c in self.sorted_terms():
            for m, q in c.items():
                out.append({"c": str(q), "v1": m.v1_exp, "v2": m.v2_exp, "I": list(k.I), "eps": list(k.eps)})
        return out


def lead_term(z: SmashElement):
    if not z.terms:
        raise ZeroElement("zero has no lead term")
    k = min(z.terms, key=order_key)
    return k, z.terms[k]


# --- per-factor tables ---------------------------------------------------

@lru_cache(maxsize=None)
def _conj_factor(i: int, e: int, L: int) -> tuple:
    """c(p^i u^e) in one variable: tuple of ((i', e'), coeff) with 2i' + e' <= L."""
    if e == 0:
        return (((i, 0), CoeffElement.scalar(1)),) if 2 * i <= L else ()
    cu = conj_u_canonical(max(L, 1))
    out = []
    for (r, ee), c in cu.coeffs.items():
        if 2 * (r + i) + ee <= L:
            out.append(((r + i, ee), c))
    return tuple(out)


@lru_cache(maxsize=None)
def _mul_factor(e1: int, e2: int, L: int) -> tuple:
    """u^(e1 + e2) as ((dr, e), coeff) in one variable, valid to length L."""
    if e1 + e2 < 2:
        return (((0, e1 + e2), CoeffElement.scalar(1)),)
    cf = u_power_canonical(2, max(L, 2))
    return tuple(((r, ee), c) for (r, ee), c in cf.coeffs.items())


def _expand_per_factor(n, L, tables):
    """Multiply out per-factor expansions, dropping anything past length L."""
    acc = {((), ()): CoeffElement.scalar(1)}
    for k in range(n):
        nxt = {}
        for (I, E), c in acc.items():
            base = 2 * sum(I) + sum(E)
            for (i, e), cc in tables[k]:
                if base + 2 * i + e > L:
                    continue
                kk = (I + (i,), E + (e,))
                prod = c * cc
                nxt[kk] = nxt[kk] + prod if kk in nxt else prod
        acc = {kk: v for kk, v in nxt.items() if v}
    # smash inputs give smash outputs, since c(u) and u^2 have no constant term
    return {MonomialKey.product_key(I, E): c for (I, E), c in acc.items()}


def conjugate(z: SmashElement) -> SmashElement:
    """Apply c: conj_coeff on coefficients, c(u_k) factor-wise, c(p_k) = p_k."""
    L = z.trunc_len
    out = {}
    for key, coeff in z.terms.items():
        tables = [_conj_factor(i, e, L) for i, e in zip(key.I, key.eps)]
        cc = conj_coeff(coeff)
        for k2, c2 in _expand_per_factor(z.n, L, tables).items():
            t = c2 * cc
            out[k2] = out[k2] + t if k2 in out else t
    return SmashElement(z.n, L, out)


_V2_INV3 = CoeffElement.monomial(0, -3)


def d1_exact(z: SmashElement) -> SmashElement:
    """d1 = v2^-3 (1 - c), exact modulo length > trunc_len."""
    if z.trunc_len < 1:
        raise TruncationExceeded("element carries no usable length")
    return (z - conjugate(z)).scale(_V2_INV3)


def smash_product(a: SmashElement, b: SmashElement) -> SmashElement:
    if a.n != b.n:
        raise ValueError("factor counts differ")
    L = min(a.trunc_len, b.trunc_len)
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            if ka.length + kb.length > L:
                continue
            tables = []
            for i1, e1, i2, e2 in zip(ka.I, ka.eps, kb.I, kb.eps):
                tables.append(tuple(((r + i1 + i2, ee), c) for (r, ee), c in _mul_factor(e1, e2, L)))
            c0 = ca * cb
            for k2, c2 in _expand_per_factor(a.n, L, tables).items():
                t = c2 * c0
                out[k2] = out[k2] + t if k2 in out else t
    return SmashElement(a.n, L, out)


def mul_by(z: SmashElement, m) -> SmashElement:
    """Multiply by ``("v1h", k)``, ``("v2", k)`` or ``("p", j)``; a CoeffElement also works."""
    if isinstance(m, CoeffElement):
        return z.scale(m)
    kind, k = m
    if kind == "v1h":
        return z.scale(CoeffElement.monomial(k, 0))
    if kind == "v2":
        return z.scale(CoeffElement.monomial(0, k))
    if kind == "p":
        if not 1 <= k <= z.n:
            raise ValueError(f"no factor p{k} in n={z.n}")
        return SmashElement(z.n, z.trunc_len, {key.shift(k, 1): c for key, c in z.terms.items()})
    raise ValueError(f"unknown multiplier {m!r}")

