"""Command line entry point: ``erjw <subcommand> [flags]``.

Exit codes: 0 success or verification pass, 1 a nonempty diff, 2 an engine
or usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass

from . import bss_engine as bss
from .coefficients import CoeffElement, point_bss
from .formal_group import conjugate_u, conj_u_canonical, fgl_hat
from .projective_modules import MonomialKey, SmashElement, d1_exact, smash_keys
from .theorem_oracles import OracleWindow, compare, expected_sets

SUBCOMMANDS = ("fgl", "d1", "pages", "gr", "verify", "point")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    space: str = "smash"
    n: int = 1
    max_len: int = bss.DEFAULT_MAX_LEN
    v1_cap: int = bss.DEFAULT_V1_CAP
    margin: int = bss.DEFAULT_MARGIN
    page: int | None = None
    degree: int | None = None
    format: str = "text"
    seed: int = 0
    order: int = 5
    element: str | None = None
    model: str = "parity"
    exact: bool = False

    def window(self) -> bss.Window:
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.margin < 3:
            raise UsageError("--margin must be >= 3")
        if self.max_len < 2 * self.n:
            raise UsageError("--max-len must be >= 2n")
        return bss.Window(self.space, self.n, self.max_len, self.v1_cap, self.margin)

    def header(self) -> str:
        return (f"# erjw {self.subcommand} space={self.space} n={self.n} max_len={self.max_len} "
                f"v1_cap={self.v1_cap} margin={self.margin} seed={self.seed}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", choices=("smash", "mu"), default="smash")
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--max-len", type=int, default=bss.DEFAULT_MAX_LEN)
    common.add_argument("--v1-cap", type=int, default=bss.DEFAULT_V1_CAP)
    common.add_argument("--margin", type=int, default=bss.DEFAULT_MARGIN)
    common.add_argument("--page", type=int, choices=(2, 3, 4, 5, 6, 7, 8))
    common.add_argument("--degree", type=int, help="only this degree mod 48")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--model", choices=("parity", "full"), default="parity")

    p = argparse.ArgumentParser(prog="erjw", description="ER(2) Bockstein spectral sequence calculator")
    sub = p.add_subparsers(dest="subcommand", required=True)
    f = sub.add_parser("fgl", parents=[common], help="hatted formal group law and c(u)")
    f.add_argument("--order", type=int, default=5)
    d = sub.add_parser("d1", parents=[common], help="exact d1 of a monomial such as 'v1h p1^2 u2'")
    d.add_argument("--element", help="monomial; a random key of the window when omitted")
    sub.add_parser("pages", parents=[common], help="E2, E4 and E8 with torsion generators")
    g = sub.add_parser("gr", parents=[common], help="graded d1 stages, optionally exact SNF dimensions")
    g.add_argument("--exact", action="store_true")
    sub.add_parser("verify", parents=[common], help="diff the engine against the closed forms")
    sub.add_parser("point", parents=[common], help="the BSS of a point")
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**kw)


_TOKEN = re.compile(r"^(v1h|v2|p|u)(\d*)(?:\^(\d+))?$")


def parse_monomial(text: str, n: int, trunc_len: int) -> SmashElement:
    I, eps, a, b = [0] * n, [0] * n, 0, 0
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise UsageError(f"cannot read {tok!r}")
        name, idx, exp = m.group(1), m.group(2), int(m.group(3) or 1)
        if name == "v1h":
            a += exp
        elif name == "v2":
            b += exp
        else:
            k = int(idx or 0)
            if not 1 <= k <= n:
                raise UsageError(f"index out of range in {tok!r}")
            if name == "p":
                I[k - 1] += exp
            elif exp != 1 or eps[k - 1]:
                raise UsageError(f"u{k} squares to a p term; write it with p")
            else:
                eps[k - 1] = 1
    key = MonomialKey(tuple(I), tuple(eps))
    return SmashElement.monomial(key, trunc_len, CoeffElement.monomial(a, b))


def _emit(cfg: RunConfig, text: str, payload: dict, out) -> None:
    if cfg.format == "json":
        payload = {"schema": bss.SCHEMA, "config": cfg.header()[2:], **payload}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(cfg.header() + "\n" + text + "\n")


def _filter(report: bss.PageReport, degree):
    if degree is None:
        return report
    gens = [g for g in report.gens if g.degree == degree % 48]
    keep = lambda ts: [t for t in ts if t.target.degree == degree % 48]
    tors = {r: keep(ts) for r, ts in report.torsion.items()}
    return bss.PageReport(report.window, report.page, gens, tors, report.notes)


def cmd_fgl(cfg, out):
    F = fgl_hat(cfg.order)
    rows = []
    for (i, j), c in sorted(F.coeffs.items()):
        if c.terms:
            rows.append((i, j, c.render()))
    cu = conjugate_u(cfg.order)
    can = conj_u_canonical(cfg.order) if cfg.order >= 2 else None
    lines = [f"F(x,y) coefficient x^{i} y^{j}: {r}" for i, j, r in rows]
    lines.append("c(uh) = " + cu.render())
    if can is not None:
        lines.append("c(uh) canonical = " + can.render())
    _emit(cfg, "\n".join(lines), {"fgl": [{"i": i, "j": j, "coeff": r} for i, j, r in rows],
                                  "conjugate": cu.render()}, out)
    return 0


def cmd_d1(cfg, out):
    L = cfg.max_len
    if cfg.element:
        z = parse_monomial(cfg.element, cfg.n, L)
    else:
        keys = smash_keys(cfg.n, max(L - 3, 2 * cfg.n))
        key = random.Random(cfg.seed).choice(keys)
        z = SmashElement.monomial(key, L)
    dz = d1_exact(z)
    _emit(cfg, f"d1({z.render()}) = {dz.render()}", {"element": z.to_json(), "d1": dz.to_json()}, out)
    return 0


def _pages(cfg):
    pages = bss.run_pages(cfg.window(), cfg.model)
    if cfg.page is None:
        wanted = (2, 4, 8)
    else:
        wanted = (2 if cfg.page <= 3 else 4 if cfg.page <= 7 else 8,)
    return pages, wanted


def cmd_pages(cfg, out):
    pages, wanted = _pages(cfg)
    reps = [_filter(pages[p], cfg.degree) for p in wanted]
    _emit(cfg, "\n".join(r.render() for r in reps), {"pages": [r.to_json() for r in reps]}, out)
    return 0


def cmd_gr(cfg, out):
    w = cfg.window()
    states = bss.graded_states(w, cfg.model)
    lines, stages = [], []
    for j, st in enumerate(states):
        lines.append(f"after stage {j}: {len(st.remaining)} basis positions alive, "
                     f"{len(st.torsion_log)} x^1 pairs so far")
        stages.append({"stage": j, "alive": len(st.remaining), "pairs": len(st.torsion_log)})
    payload = {"stages": stages}
    if cfg.exact:
        gr = bss.graded_dimensions(w, cfg.model)
        degs = range(48) if cfg.degree is None else [cfg.degree % 48]
        ex = {d: bss.run_exact(w, d) for d in degs}
        for d, h in ex.items():
            tor = ", ".join(f"{h.torsion.count(v)} x Z/{2 ** v}" for v in sorted(set(h.torsion))) or "none"
            lines.append(f"deg {d}: exact {h.f2_dim} (free {h.free}, torsion {tor}) graded {gr.get(d, 0)}")
        payload["exact"] = {str(d): {"dim": h.f2_dim, "free": h.free, "torsion": h.torsion} for d, h in ex.items()}
    _emit(cfg, "\n".join(lines), payload, out)
    return 0


def _page_of(check: str) -> int:
    if check in ("E4", "x3"):
        return 4
    return 8 if check == "x7" else 2


def cmd_verify(cfg, out):
    w = cfg.window()
    pages = bss.run_pages(w, cfg.model)
    got = bss.engine_sets(pages, bss.graded_states(w, cfg.model))
    want = expected_sets(cfg.space, cfg.n, OracleWindow(cfg.n, w.trusted_len, w.trusted_v1))
    if cfg.page is not None:
        page = 2 if cfg.page <= 3 else 4 if cfg.page <= 7 else 8
        want = {k: v for k, v in want.items() if _page_of(k) == page}
    diffs = compare(got, want)
    bad = [k for k, d in diffs.items() if not d.empty]
    if got["E8"]:
        bad.append("E8")
    lines = [f"{k}: {'ok' if d.empty else 'DIFF'} ({len(want[k])} expected, "
             f"{len(d.missing)} missing, {len(d.extra)} extra)" for k, d in diffs.items()]
    lines.append(f"E8: {'ok' if not got['E8'] else 'NONZERO'}")
    _emit(cfg, "\n".join(lines), {"diffs": {k: d.to_json() for k, d in diffs.items()},
                                  "e8": len(got["E8"]), "pass": not bad}, out)
    return 1 if bad else 0


def cmd_point(cfg, out):
    lines, payload = [], []
    for pg in point_bss():
        basis = ", ".join(b for b, _ in pg.basis)
        line = f"E{pg.page}: {pg.ring}{{{basis}}}" if basis else f"E{pg.page}: 0"
        if pg.torsion:
            line += f"  x^{pg.torsion_order}-torsion: {', '.join(t for t, _ in pg.torsion)}"
        lines.append(line)
        payload.append({"page": pg.page, "ring": pg.ring, "basis": [b for b, _ in pg.basis],
                        "torsion": [t for t, _ in pg.torsion], "order": pg.torsion_order})
    _emit(cfg, "\n".join(lines), {"point": payload}, out)
    return 0


COMMANDS = {"fgl": cmd_fgl, "d1": cmd_d1, "pages": cmd_pages, "gr": cmd_gr,
            "verify": cmd_verify, "point": cmd_point}


def dispatch(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        return COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"erjw: {exc}\n")
        return 2
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        sys.stderr.write(f"erjw: {type(exc).__name__}: {exc}\n")
        return 2


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
