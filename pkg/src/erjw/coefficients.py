"""The coefficient ring E(2)^* with v2-hat set to 1.

Elements are Z_(2)-combinations of monomials ``v1h^a v2^b`` with ``a >= 0``
and ``b`` taken mod 8 (``v2^-8 = v2-hat = 1``).  The ring is graded over
Z/48: ``|v1h| = 16`` and ``|v2| = -6``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .exact2local import Local2Rational

__all__ = [
    "CoeffMonomial",
    "CoeffElement",
    "TorsionLabel",
    "conj_coeff",
    "coeff_mul",
    "point_bss",
    "ER2_REFERENCE",
    "V1H",
    "V2",
]

DEGREE_V1H = 16
DEGREE_V2 = -6
PERIOD = 48


@dataclass(frozen=True, order=True)
class CoeffMonomial:
    v1_exp: int = 0
    v2_exp: int = 0

    def __post_init__(self):
        if self.v1_exp < 0:
            raise ValueError("negative v1h exponent")
        if not 0 <= self.v2_exp < 8:
            object.__setattr__(self, "v2_exp", self.v2_exp % 8)

    @property
    def degree(self) -> int:
        return (DEGREE_V1H * self.v1_exp + DEGREE_V2 * self.v2_exp) % PERIOD

    def __mul__(self, other: "CoeffMonomial") -> "CoeffMonomial":
        return CoeffMonomial(self.v1_exp + other.v1_exp, self.v2_exp + other.v2_exp)

    def render(self) -> str:
        parts = []
        if self.v1_exp:
            parts.append("v1h" if self.v1_exp == 1 else f"v1h^{self.v1_exp}")
        if self.v2_exp:
            parts.append("v2" if self.v2_exp == 1 else f"v2^{self.v2_exp}")
        return " ".join(parts)


class CoeffElement:
    """Finitely supported map CoeffMonomial -> Local2Rational, zeros dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[CoeffMonomial, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Local2Rational.coerce(c)
            if c:
                clean[mono] = clean.get(mono, Local2Rational(0)) + c
                if not clean[mono]:
                    del clean[mono]
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffElement is immutable")

    @classmethod
    def monomial(cls, v1: int = 0, v2: int = 0, c=1) -> "CoeffElement":
        return cls({CoeffMonomial(v1, v2): c})

    @classmethod
    def scalar(cls, c) -> "CoeffElement":
        return cls.monomial(0, 0, c)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = CoeffElement.scalar(other)
        if not isinstance(other, CoeffElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "CoeffElement") -> "CoeffElement":
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Local2Rational(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return CoeffElement(out)

    def __neg__(self):
        return CoeffElement({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Local2Rational)):
            other = CoeffElement.scalar(other)
        return coeff_mul(self, other)

    __rmul__ = __mul__

    def degrees(self) -> set[int]:
        return {m.degree for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def mod2(self) -> dict[CoeffMonomial, int]:
        return {m: 1 for m, c in self._terms.items() if c.mod2()}

    def render(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.items():
            body = m.render()
            if not body:
                out.append(str(c))
            elif c == 1:
                out.append(body)
            elif c == -1:
                out.append("-" + body)
            else:
                out.append(f"{c} {body}")
        return " + ".join(out).replace("+ -", "- ")

    __str__ = render

    def __repr__(self):
        return f"CoeffElement({self.render()!r})"

    def to_json(self) -> list[dict]:
        return [{"c": str(c), "v1": m.v1_exp, "v2": m.v2_exp} for m, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "CoeffElement":
        return cls({CoeffMonomial(d["v1"], d["v2"]): Local2Rational.parse(d["c"]) for d in data})


def coeff_mul(a: CoeffElement, b: CoeffElement) -> CoeffElement:
    out: dict[CoeffMonomial, Local2Rational] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            m = ma * mb
            out[m] = out.get(m, Local2Rational(0)) + ca * cb
    return CoeffElement(out)


def conj_coeff(z: CoeffElement) -> CoeffElement:
    """Complex conjugation: fixes v1h, negates v2."""
    return CoeffElement({m: (-c if m.v2_exp % 2 else c) for m, c in z._terms.items()})


V1H = CoeffElement.monomial(1, 0)
V2 = CoeffElement.monomial(0, 1)


@dataclass(frozen=True)
class TorsionLabel:
    order: int
    name_hint: str | None = None

    def __post_init__(self):
        if self.order not in (1, 3, 7):
            raise ValueError(f"torsion order must be 1, 3 or 7, got {self.order}")


# Static description of ER(2)^* used only for labels and cross-checks.
# Each entry: generator name, degree mod 48, image in E(2)^* (None for x-powers).
ER2_REFERENCE = {
    "free": [
        ("1", 0, CoeffElement.scalar(1)),
        ("w", (-8) % 48, CoeffElement.monomial(1, 4)),
        ("alpha1", (-12) % 48, CoeffElement.monomial(0, 2, 2)),
        ("alpha2", (-24) % 48, CoeffElement.monomial(0, 4, 2)),
        ("alpha3", (-36) % 48, CoeffElement.monomial(0, 6, 2)),
    ],
    "v1h_torsion": ["x", "x^2", "x w", "x^2 w"],
    "finite_torsion": ["x^3", "x^4", "x^5", "x^6"],
    "x_degree": (-17) % 48,
}


@dataclass(frozen=True)
class PointPage:
    page: int
    basis: tuple[tuple[str, int], ...]   # (description, v2 exponent)
    ring: str                            # "Z_(2)[v1h]", "Z/2[v1h]", "Z/2" or "0"
    torsion: tuple[tuple[str, int], ...] = ()  # generators created by the outgoing differential
    torsion_order: int | None = None


def point_bss() -> list[PointPage]:
    """The Bockstein spectral sequence for a point.

    Worked from the three coefficient differentials ``d1(v2^b) =
    v2^-3 (1 - (-1)^b) v2^b``, ``d3(v2^2) = v1h v2^-4`` and
    ``d7(v2^4) = 1``, each linear over the part it commutes with.
    """
    e1 = tuple((f"v2^{b}", b) for b in range(8))
    # d1(v2^b) = 2 v2^(b-3) for b odd; the images are 2 times even powers
    d1_sources = [b for b in range(8) if b % 2]
    x1 = tuple(sorted((f"2 v2^{(b - 3) % 8}", (b - 3) % 8) for b in d1_sources))
    e2_exps = [b for b in range(8) if b % 2 == 0]
    e2 = tuple((f"v2^{b}", b) for b in e2_exps)
    # d3: v2^2 -> v1h v2^4, v2^6 -> v1h v2^0, linear over Z/2[v1h]
    d3_sources = [b for b in e2_exps if b % 4 == 2]
    x3 = tuple(sorted((f"v1h v2^{(b - 6) % 8}", (b - 6) % 8) for b in d3_sources))
    e4_exps = [b for b in e2_exps if b % 4 == 0]
    e4 = tuple((f"v2^{b}", b) for b in e4_exps)
    # d7: v2^4 -> 1; nothing survives
    x7 = tuple(("1", (b - 4) % 8) for b in e4_exps if b == 4)
    e8_exps = [b for b in e4_exps if b not in (4, 0)]
    return [
        PointPage(1, e1, "Z_(2)[v1h]", x1, 1),
        PointPage(2, e2, "Z/2[v1h]", x3, 3),
        PointPage(4, e4, "Z/2", x7, 7),
        PointPage(8, tuple((f"v2^{b}", b) for b in e8_exps), "0"),
    ]
