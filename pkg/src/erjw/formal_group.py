"""The 2-typical (Araki) formal group law of E(2), hatted.

Everything before the hat substitution happens over Q[v1, v2] with
``fractions.Fraction`` coefficients.  A coefficient of ``x^i y^j`` in the
degree-2 law is homogeneous of degree ``2 - 2(i + j)``, so each monomial
``v1^a v2^b`` has ``a + 3b = i + j - 1`` and becomes ``v1h^a v2h^b`` after
hatting.  Setting ``v2h = 1`` lands in :mod:`erjw.coefficients`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coefficients import CoeffElement, CoeffMonomial
from .exact2local import Local2Rational

__all__ = [
    "TruncationExceeded",
    "log_coefficients",
    "exp_coefficients",
    "fgl_formal",
    "fgl_hat",
    "conjugate_u",
    "conjugate_u_via_log",
    "phat_series",
    "USeries",
    "BiSeries",
    "CanonicalForm",
    "canonicalize",
    "u_power_canonical",
    "conj_u_canonical",
]


class TruncationExceeded(ValueError):
    """A term beyond the carried truncation was requested."""


# --- polynomials over Q in two variables, {(a, b): Fraction} -------------

def _padd(p, q, scale=1):
    out = dict(p)
    for k, c in q.items():
        s = out.get(k, 0) + scale * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pmul(p, q):
    out = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            k = (a1 + a2, b1 + b2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _ppow(p, e):
    out = {(0, 0): Fraction(1)}
    for _ in range(e):
        out = _pmul(out, p)
    return out


def _araki_v(k):
    # v_k as a polynomial in v1, v2; v_k = 0 for k > 2
    if k == 1:
        return {(1, 0): Fraction(1)}
    if k == 2:
        return {(0, 1): Fraction(1)}
    return {}


@lru_cache(maxsize=None)
def log_coefficients(count: int) -> tuple[dict, ...]:
    """``m_0 .. m_{count-1}`` with ``log(x) = sum m_i x^(2^i)``.

    Araki's relation ``(2 - 2^(2^n)) m_n = sum_{i<n} m_i v_{n-i}^(2^i)``.
    """
    ms = [{(0, 0): Fraction(1)}]
    for n in range(1, count):
        acc = {}
        for i in range(n):
            acc = _padd(acc, _pmul(ms[i], _ppow(_araki_v(n - i), 2 ** i)))
        factor = Fraction(1, 2 - 2 ** (2 ** n))
        ms.append({k: c * factor for k, c in acc.items()})
    return tuple(ms)


def _log_count(order: int) -> int:
    count = 1
    while 2 ** count <= order:
        count += 1
    return count


# --- univariate series with polynomial coefficients -----------------------

def _smul(f, g, order):
    out = [dict() for _ in range(order + 1)]
    for i, fi in enumerate(f):
        if not fi or i > order:
            continue
        for j, gj in enumerate(g):
            if i + j > order:
                break
            if gj:
                out[i + j] = _padd(out[i + j], _pmul(fi, gj))
    return out


@lru_cache(maxsize=None)
def _log_series(order: int):
    ms = log_coefficients(_log_count(order))
    f = [dict() for _ in range(order + 1)]
    for i, m in enumerate(ms):
        if 2 ** i <= order:
            f[2 ** i] = m
    return f


@lru_cache(maxsize=None)
def exp_coefficients(order: int):
    """Compositional inverse of the logarithm, coefficients of t^0..t^order."""
    log = _log_series(order)
    e = [dict() for _ in range(order + 1)]
    e[1] = {(0, 0): Fraction(1)}
    for k in range(2, order + 1):
        # [t^k] sum_i m_i e(t)^(2^i), with e known below degree k
        acc = {}
        for i in range(2, order + 1):
            if not log[i]:
                continue
            p = e
            for _ in range(i - 1):
                p = _smul(p, e, k)
            if len(p) > k and p[k]:
                acc = _padd(acc, _pmul(log[i], p[k]))
        e[k] = {key: -c for key, c in acc.items()}
    return e


@lru_cache(maxsize=None)
def fgl_formal(order: int) -> dict:
    """Unhatted F(x, y) = exp(log x + log y) to total degree ``order``.

    Returns ``{(i, j): poly}`` with ``poly`` a dict over ``(v1_exp, v2_exp)``.
    """
    log = _log_series(order)
    exp = exp_coefficients(order)
    # S = log x + log y as {(i, j): poly}
    S = {}
    for k, m in enumerate(log):
        if m:
            S[(k, 0)] = m
            S[(0, k)] = _padd(S.get((0, k), {}), m)
    F = {}
    power = {(0, 0): {(0, 0): Fraction(1)}}
    for k in range(1, order + 1):
        nxt = {}
        for (i1, j1), p1 in power.items():
            for (i2, j2), p2 in S.items():
                if i1 + i2 + j1 + j2 > order:
                    continue
                key = (i1 + i2, j1 + j2)
                nxt[key] = _padd(nxt.get(key, {}), _pmul(p1, p2))
        power = {key: p for key, p in nxt.items() if p}
        if exp[k]:
            for key, p in power.items():
                F[key] = _padd(F.get(key, {}), _pmul(exp[k], p))
    return {key: p for key, p in F.items() if p}


def _hat_to_coeff(poly, total_degree) -> CoeffElement:
    """Hat a coefficient of x^... of total degree ``total_degree`` and set v2h = 1."""
    terms = {}
    for (a, b), c in poly.items():
        if a + 3 * b != total_degree - 1:
            raise AssertionError("inhomogeneous formal group coefficient")
        mono = CoeffMonomial(a, 0)
        terms[mono] = terms.get(mono, Local2Rational(0)) + Local2Rational.coerce(c)
    return CoeffElement(terms)


@dataclass(frozen=True)
class BiSeries:
    trunc_len: int
    coeffs: dict  # (i, j) -> CoeffElement, i + j <= trunc_len

    def coeff(self, i: int, j: int) -> CoeffElement:
        if i + j > self.trunc_len:
            raise TruncationExceeded(f"x^{i} y^{j} beyond order {self.trunc_len}")
        return self.coeffs.get((i, j), CoeffElement())


@lru_cache(maxsize=None)
def fgl_hat(trunc_len: int) -> BiSeries:
    if trunc_len < 2:
        raise ValueError("trunc_len must be at least 2")
    F = fgl_formal(trunc_len)
    return BiSeries(trunc_len, {k: _hat_to_coeff(p, sum(k)) for k, p in F.items()})


# --- series in u-hat with coefficients in E(2)^* --------------------------

class USeries:
    """``sum_{k=0}^{L} coeffs[k] u^k`` known modulo u^(L+1)."""

    __slots__ = ("trunc_len", "coeffs")

    def __init__(self, coeffs, trunc_len: int | None = None):
        coeffs = list(coeffs)
        if trunc_len is None:
            trunc_len = len(coeffs) - 1
        coeffs = coeffs[: trunc_len + 1]
        coeffs += [CoeffElement()] * (trunc_len + 1 - len(coeffs))
        self.trunc_len = trunc_len
        self.coeffs = tuple(c if isinstance(c, CoeffElement) else CoeffElement.scalar(c) for c in coeffs)

    def __getitem__(self, k):
        if k > self.trunc_len:
            raise TruncationExceeded(f"u^{k} beyond order {self.trunc_len}")
        return self.coeffs[k]

    def __add__(self, other):
        L = min(self.trunc_len, other.trunc_len)
        return USeries([self.coeffs[k] + other.coeffs[k] for k in range(L + 1)], L)

    def __neg__(self):
        return USeries([-c for c in self.coeffs], self.trunc_len)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CoeffElement):
            return USeries([c * other for c in self.coeffs], self.trunc_len)
        L = min(self.trunc_len, other.trunc_len)
        out = [CoeffElement() for _ in range(L + 1)]
        for i in range(L + 1):
            if not self.coeffs[i]:
                continue
            for j in range(L + 1 - i):
                if other.coeffs[j]:
                    out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
        return USeries(out, L)

    def shift(self, k: int) -> "USeries":
        """Multiply by u^k (the truncation grows by k)."""
        return USeries([CoeffElement()] * k + list(self.coeffs), self.trunc_len + k)

    def unshift(self, k: int) -> "USeries":
        """Divide by u^k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("series is not divisible by u^%d" % k)
        return USeries(self.coeffs[k:], self.trunc_len - k)

    def inverse(self) -> "USeries":
        c0 = self.coeffs[0]
        if set(c0.terms) != {CoeffMonomial(0, 0)} or not c0.terms[CoeffMonomial(0, 0)].is_unit():
            raise ValueError("constant term is not a unit of Z_(2)")
        inv0 = CoeffElement.scalar(c0.terms[CoeffMonomial(0, 0)].inverse())
        out = [inv0]
        for k in range(1, self.trunc_len + 1):
            acc = CoeffElement()
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(acc * inv0))
        return USeries(out, self.trunc_len)

    def compose(self, g: "USeries") -> "USeries":
        """``self(g(u))`` for ``g`` without constant term."""
        if g.coeffs[0]:
            raise ValueError("inner series must have zero constant term")
        L = min(self.trunc_len, g.trunc_len)
        out = USeries([self.coeffs[0]], L)
        power = USeries([CoeffElement.scalar(1)], L)
        for k in range(1, L + 1):
            power = power * g
            if self.coeffs[k]:
                out = out + power * self.coeffs[k]
        return out

    def truncate(self, L: int) -> "USeries":
        return USeries(self.coeffs[: L + 1], min(L, self.trunc_len))

    def __eq__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        L = min(self.trunc_len, other.trunc_len)
        return self.coeffs[: L + 1] == other.coeffs[: L + 1]

    def render(self, var: str = "uh") -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            body = c.render()
            if not mono:
                parts.append(body)
            elif body == "1":
                parts.append(mono)
            elif body == "-1":
                parts.append("-" + mono)
            elif len(c.terms) > 1:
                parts.append(f"({body}) {mono}")
            else:
                parts.append(f"{body} {mono}")
        return (" + ".join(parts) or "0").replace("+ -", "- ") + f" + O({var}^{self.trunc_len + 1})"

    def __repr__(self):
        return f"USeries({self.render()})"


@lru_cache(maxsize=None)
def conjugate_u(trunc_len: int) -> USeries:
    """The series c(u) with F(u, c(u)) = 0, solved one power of u at a time.

    Writing F(x, y) = x + y + sum a_ij x^i y^j (i, j >= 1), the coefficient
    of u^k in F(u, c(u)) is c_k plus terms needing only c_1 .. c_{k-1}.
    """
    if trunc_len < 2:
        return USeries([CoeffElement(), CoeffElement.scalar(-1)], 1).truncate(trunc_len)
    F = fgl_hat(trunc_len)
    one = CoeffElement.scalar(1)
    c = [CoeffElement(), -one]
    for k in range(2, trunc_len + 1):
        partial = USeries(c + [CoeffElement()] * (trunc_len + 1 - len(c)), trunc_len)
        # powers of the partial series, truncated at u^k
        acc = CoeffElement()
        power = USeries([one], k)
        cur = partial.truncate(k)
        for j in range(1, k):
            power = power * cur
            for i in range(1, k - j + 1):
                a = F.coeffs.get((i, j))
                if a and power.coeffs[k - i]:
                    acc = acc + a * power.coeffs[k - i]
        c.append(-acc)
    return USeries(c, trunc_len)


def conjugate_u_via_log(trunc_len: int) -> USeries:
    """Independent route: c(u) = exp(-log u), hatted afterwards."""
    log = _log_series(trunc_len)
    exp = exp_coefficients(trunc_len)
    neg_log = [{k: -v for k, v in p.items()} for p in log]
    out = [dict() for _ in range(trunc_len + 1)]
    power = [dict() for _ in range(trunc_len + 1)]
    power[0] = {(0, 0): Fraction(1)}
    for k in range(1, trunc_len + 1):
        power = _smul(power, neg_log, trunc_len)
        if exp[k]:
            for i, p in enumerate(power):
                if p:
                    out[i] = _padd(out[i], _pmul(exp[k], p))
    coeffs = [CoeffElement()] + [_hat_to_coeff(out[k], k) for k in range(1, trunc_len + 1)]
    return USeries(coeffs, trunc_len)


@lru_cache(maxsize=None)
def phat_series(trunc_len: int) -> USeries:
    """p-hat = u c(u), known modulo u^(trunc_len + 1)."""
    return conjugate_u(trunc_len - 1).shift(1)


# --- canonical form A(p) + B(p) u -----------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    """``sum coeffs[(r, e)] p^r u^e`` with ``e`` in {0, 1}, valid for 2r + e <= trunc_len."""

    trunc_len: int
    coeffs: dict

    def A(self) -> list[CoeffElement]:
        return [self.coeffs.get((r, 0), CoeffElement()) for r in range(self.trunc_len // 2 + 1)]

    def B(self) -> list[CoeffElement]:
        return [self.coeffs.get((r, 1), CoeffElement()) for r in range((self.trunc_len - 1) // 2 + 1)]

    def get(self, r: int, e: int) -> CoeffElement:
        if 2 * r + e > self.trunc_len:
            raise TruncationExceeded(f"p^{r} u^{e} beyond length {self.trunc_len}")
        return self.coeffs.get((r, e), CoeffElement())

    def expand(self) -> USeries:
        """Re-expand in powers of u (modulo u^(trunc_len + 1))."""
        L = self.trunc_len
        p = phat_series(L)
        out = USeries([CoeffElement()], L)
        power = USeries([CoeffElement.scalar(1)], L)
        for r in range(L // 2 + 1):
            a = self.coeffs.get((r, 0))
            b = self.coeffs.get((r, 1))
            if a:
                out = out + power * a
            if b:
                out = out + power.shift(1).truncate(L) * b
            power = power * p
        return out

    def render(self) -> str:
        parts = []
        for (r, e), c in sorted(self.coeffs.items()):
            mono = " ".join(x for x in (("ph" if r == 1 else f"ph^{r}") if r else "", "uh" if e else "") if x)
            body = c.render()
            if not mono:
                parts.append(body)
            elif body == "1":
                parts.append(mono)
            elif body == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({body}) {mono}" if len(c.terms) > 1 else f"{body} {mono}")
        return (" + ".join(parts) or "0").replace("+ -", "- ")


@lru_cache(maxsize=None)
def _h_inverse(trunc_len: int) -> USeries:
    # h = c(u)/u, a unit with constant term -1; u^2 = p * h^-1
    if trunc_len < 0:
        return USeries([], -1)
    return conjugate_u(trunc_len + 1).unshift(1).inverse()


def canonicalize(series: USeries) -> CanonicalForm:
    """Rewrite a u-series as A(p) + B(p) u, using u^2 = p h(u)^-1.

    Each pass peels two powers of u into one power of p, so it terminates
    after trunc_len // 2 passes.
    """
    L = series.trunc_len
    out = {}
    cur = series
    r = 0
    while cur.trunc_len >= 0:
        if cur.coeffs[0]:
            out[(r, 0)] = cur.coeffs[0]
        if cur.trunc_len >= 1 and cur.coeffs[1]:
            out[(r, 1)] = cur.coeffs[1]
        if cur.trunc_len < 2:
            break
        rest = USeries(cur.coeffs[2:], cur.trunc_len - 2)
        cur = rest * _h_inverse(rest.trunc_len)
        r += 1
    return CanonicalForm(L, out)


@lru_cache(maxsize=None)
def u_power_canonical(k: int, trunc_len: int) -> CanonicalForm:
    """Canonical form of u^k (a single p-u expansion)."""
    coeffs = [CoeffElement()] * k + [CoeffElement.scalar(1)]
    return canonicalize(USeries(coeffs, max(trunc_len, k)).truncate(trunc_len)) if k <= trunc_len \
        else CanonicalForm(trunc_len, {})


@lru_cache(maxsize=None)
def conj_u_canonical(trunc_len: int) -> CanonicalForm:
    """c(u) in canonical form; the u-coefficient comes out as exactly -1."""
    return canonicalize(conjugate_u(trunc_len))
