"""E(2)^*(MU(n)) inside the smash module, as symmetric functions.

Everything is computed on the image in E(2)^*(smash^n CP^infty).  A
symmetric element is determined by its coefficients on property-A keys,
since each orbit of the pair-permutation action has exactly one sorted
representative.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .coefficients import CoeffElement
from .projective_modules import MonomialKey, SmashElement, conjugate, smash_keys, smash_product

__all__ = [
    "PropertyAViolation",
    "SymKey",
    "ChernMonomial",
    "PontryaginMonomial",
    "has_property_a",
    "expand_w",
    "sym_keys",
    "sym_coordinates",
    "chern_to_smash",
    "w_to_chern",
    "chern_to_w",
    "pk_to_w",
    "parity_of",
    "pontryagin_to_smash",
]


class PropertyAViolation(ValueError):
    pass


def has_property_a(I, eps) -> bool:
    w = [2 * i + e for i, e in zip(I, eps)]
    return w[-1] > 0 and all(a >= b for a, b in zip(w, w[1:]))


class SymKey(MonomialKey):
    """A MonomialKey with 2i_1 + eps_1 >= ... >= 2i_n + eps_n > 0."""

    def __post_init__(self):
        super().__post_init__()
        if not has_property_a(self.I, self.eps):
            raise PropertyAViolation(f"{self.I}, {self.eps} lacks property A")

    @classmethod
    def of(cls, key: MonomialKey) -> "SymKey":
        return cls(key.I, key.eps)


@dataclass(frozen=True)
class ChernMonomial:
    J: tuple

    def __post_init__(self):
        object.__setattr__(self, "J", tuple(self.J))
        if any(j < 0 for j in self.J):
            raise ValueError("negative Chern exponent")

    @property
    def n(self) -> int:
        return len(self.J)

    @property
    def in_mu(self) -> bool:
        return self.J[-1] > 0

    def render(self) -> str:
        parts = [f"c{k}" if j == 1 else f"c{k}^{j}" for k, j in enumerate(self.J, 1) if j]
        return " ".join(parts) or "1"

    def to_json(self) -> dict:
        return {"c": list(self.J)}


@dataclass(frozen=True)
class PontryaginMonomial:
    K: tuple

    def __post_init__(self):
        object.__setattr__(self, "K", tuple(self.K))
        if any(k < 0 for k in self.K):
            raise ValueError("negative Pontryagin exponent")

    @property
    def n(self) -> int:
        return len(self.K)

    def render(self) -> str:
        parts = [f"P{k}" if j == 1 else f"P{k}^{j}" for k, j in enumerate(self.K, 1) if j]
        return " ".join(parts) or "1"

    def to_json(self) -> dict:
        return {"P": list(self.K)}


def expand_w(key, L: int) -> SmashElement:
    """w_{I,eps}: the sum of all distinct rearrangements of the pairs (i_k, eps_k)."""
    if not has_property_a(key.I, key.eps):
        raise PropertyAViolation(f"{key.I}, {key.eps} lacks property A")
    pairs = list(zip(key.I, key.eps))
    terms = {}
    one = CoeffElement.scalar(1)
    for perm in set(permutations(pairs)):
        terms[MonomialKey(tuple(p[0] for p in perm), tuple(p[1] for p in perm))] = one
    return SmashElement(len(pairs), L, terms)


def sym_keys(n: int, max_len: int, min_len: int = 0):
    """Property-A keys in increasing order."""
    return [SymKey.of(k) for k in smash_keys(n, max_len, min_len) if has_property_a(k.I, k.eps)]


def sym_coordinates(z: SmashElement) -> dict:
    """Coefficients of a symmetric element in the w basis."""
    return {SymKey.of(k): c for k, c in z.terms.items() if has_property_a(k.I, k.eps)}


def _elementary(n: int, k: int, L: int) -> SmashElement:
    one = CoeffElement.scalar(1)
    terms = {}
    for S in combinations(range(n), k):
        E = tuple(1 if i in S else 0 for i in range(n))
        terms[MonomialKey.product_key((0,) * n, E)] = one
    return SmashElement(n, L, terms)


def _power_product(factors, n, L) -> SmashElement:
    out = SmashElement(n, L, {MonomialKey.product_key((0,) * n, (0,) * n): CoeffElement.scalar(1)})
    for f, e in factors:
        for _ in range(e):
            out = smash_product(out, f)
    return out


def chern_to_smash(c: ChernMonomial, L: int) -> SmashElement:
    """Image of c^J: a product of elementary symmetric functions in the u_k."""
    n = c.n
    return _power_product([(_elementary(n, k, L), j) for k, j in enumerate(c.J, 1)], n, L)


def pontryagin_to_smash(p: PontryaginMonomial, L: int) -> SmashElement:
    """Image of P^K, with P_k mapping to c_k c(c_k)."""
    n = p.n
    factors = []
    for k, e in enumerate(p.K, 1):
        if e:
            ck = _elementary(n, k, L)
            factors.append((smash_product(ck, conjugate(ck)), e))
    return _power_product(factors, n, L)


def w_to_chern(key) -> ChernMonomial:
    """Lead-term correspondence j_k = (2i_k + eps_k) - (2i_{k+1} + eps_{k+1})."""
    if not has_property_a(key.I, key.eps):
        raise PropertyAViolation(f"{key.I}, {key.eps} lacks property A")
    w = [2 * i + e for i, e in zip(key.I, key.eps)] + [0]
    return ChernMonomial(tuple(w[k] - w[k + 1] for k in range(len(w) - 1)))


def chern_to_w(c: ChernMonomial) -> SymKey:
    """Inverse of :func:`w_to_chern`: u_k carries exponent J_k + ... + J_n."""
    m = [sum(c.J[k:]) for k in range(c.n)]
    return SymKey(tuple(x // 2 for x in m), tuple(x % 2 for x in m))


def pk_to_w(K, r) -> SymKey:
    """The w key whose lead term matches P^K c^r: i_j = s_j + g_j, e_j = 2 g_j + eps_j."""
    n = len(K)
    s = [sum(K[i:]) for i in range(n)]
    e = [sum(r[i:]) for i in range(n)]
    return SymKey(tuple(s[i] + e[i] // 2 for i in range(n)), tuple(e[i] % 2 for i in range(n)))


def parity_of(c: ChernMonomial) -> str:
    return "odd" if sum(c.J[0::2]) % 2 else "even"
