"""Command-line entry points: ``khtorus homology | stabilize | ladder | limit | paper-check``.

Exit codes: 0 success, 1 verification failure, 2 invalid input or resource guard.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from .braid_cube import BraidSpec, InputError, torus_braid
from .cache import HomologyCache, canonical_json, default_cache_dir, homology_to_groups
from .integral_homology import ChainComplexError, GradedHomology, homology
from .khovanov_chain import DEFAULT_MAX_CROSSINGS, ResourceGuardError, complex
from .limits import VerificationError, limit_homology
from .stabilization import ladder, onset_bound, verify_stabilization

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    m: Optional[int] = None
    q: Optional[int] = None
    a: Optional[int] = None
    j: Optional[int] = None
    k_max: int = 1
    format: str = "table"
    cache_dir: Optional[str] = None
    max_crossings: int = DEFAULT_MAX_CROSSINGS
    workers: int = 1
    sign: str = "before"

    def validate(self):
        need = {"homology": ("n", "m"), "stabilize": ("n", "a"), "ladder": ("n", "m", "a"),
                "limit": ("n", "j"), "paper-check": ()}[self.command]
        for name in need:
            if getattr(self, name) is None:
                raise InputError(f"--{name} is required for {self.command}")
        if self.n is not None and self.n < 2:
            raise InputError("--n must be >= 2")
        if self.m is not None and self.m < 0:
            raise InputError("--m must be >= 0")
        if self.k_max < 1:
            raise InputError("--k-max must be >= 1")
        if self.workers < 1:
            raise InputError("--workers must be >= 1")


def compute_homology(cfg: RunConfig, n: int, m: int, q: Optional[int] = None) -> GradedHomology:
    directory = cfg.cache_dir or default_cache_dir()
    cache = HomologyCache(directory, cfg.sign) if directory else None
    H = cache.read(n, m) if cache else None
    if H is None:
        diagram = torus_braid(BraidSpec(n, m))
        cx = complex(diagram, q=q, sign=cfg.sign, max_crossings=cfg.max_crossings)
        H = homology(cx, workers=cfg.workers)
        if cache and q is None:
            cache.write(n, m, H)
    if q is not None:
        H = GradedHomology({hq: g for hq, g in H.groups.items() if hq[1] == q})
    return H


def homology_json(n: int, m: int, H: GradedHomology) -> str:
    doc = {"schema_version": 1, "n": n, "m": m,
           "normalization": {"n_plus": m * (n - 1), "n_minus": 0},
           "groups": homology_to_groups(H)}
    return canonical_json(doc)


def render_table(H: GradedHomology) -> str:
    if H.is_trivial():
        return "(trivial)"
    qs = sorted({q for _, q in H.groups})
    hs = sorted({h for h, _ in H.groups})
    cells = [[str(H[(h, q)]) if not H[(h, q)].is_trivial else "." for q in qs] for h in hs]
    width = max([len(c) for row in cells for c in row] + [len(str(q)) for q in qs] + [3])
    head = "h\\q".rjust(4) + " " + " ".join(str(q).rjust(width) for q in qs)
    lines = [head]
    for h, row in zip(hs, cells):
        lines.append(str(h).rjust(4) + " " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)


def cmd_homology(cfg: RunConfig) -> int:
    H = compute_homology(cfg, cfg.n, cfg.m, cfg.q)
    if cfg.format == "json":
        print(homology_json(cfg.n, cfg.m, H))
    else:
        print(f"Kh(T({cfg.n},{cfg.m}))" + (f" at q={cfg.q}" if cfg.q is not None else ""))
        print(render_table(H))
    return EXIT_OK


def _steps_json(steps) -> list:
    return [{"i": s.i, "a_i": s.a_i, "alpha_i": s.alpha_i, "c_i": s.c_i, "x_i": s.x_i,
             "min_q_bound": s.min_q_bound, "acyclic": s.acyclic} for s in steps]


def _column_json(H: GradedHomology) -> list:
    return [{"h": h, "q": q, "free_rank": g.free_rank, "torsion": list(g.invariant_factors)}
            for (h, q), g in H.items()]


def _report_passes(r) -> bool:
    # with the bound met the ladder must collapse and the columns agree
    return not r.bound_satisfied or (r.all_acyclic and r.verdict == "equal")


def cmd_stabilize(cfg: RunConfig) -> int:
    m = onset_bound(cfg.n, cfg.a) if cfg.m is None else cfg.m
    reports = verify_stabilization(cfg.n, m, cfg.a, cfg.k_max, sign=cfg.sign,
                                   max_crossings=cfg.max_crossings)
    ok = all(_report_passes(r) for r in reports)
    if cfg.format == "json":
        print(canonical_json({
            "n": cfg.n, "a": cfg.a, "m": m, "ok": ok,
            "reports": [{"m": r.m, "a": r.a, "verdict": r.verdict,
                         "bound_satisfied": r.bound_satisfied, "steps": _steps_json(r.steps),
                         "lhs": _column_json(r.lhs), "rhs": _column_json(r.rhs)}
                        for r in reports]}))
    else:
        print(f"n={cfg.n} a={cfg.a} m={m} (onset bound {onset_bound(cfg.n, cfg.a)})")
        for r in reports:
            q_hi = r.a + r.n - 1
            print(f"  Kh^{q_hi}(T({r.n},{r.m + 1})) vs Kh^{r.a}(T({r.n},{r.m})): {r.verdict}"
                  + ("" if r.bound_satisfied else "  [bound_unsatisfied]"))
            for s in r.steps:
                flag = "acyclic" if s.acyclic else "NOT acyclic"
                print(f"    step {s.i}: a_i={s.a_i} alpha_i={s.alpha_i} c_i={s.c_i} {flag}")
            print("    lhs: " + _render_column(r.lhs) + "   rhs: " + _render_column(r.rhs))
    return EXIT_OK if ok else EXIT_FAIL


def _render_column(H: GradedHomology) -> str:
    if H.is_trivial():
        return "0"
    return ", ".join(f"h={h}:{g}" for (h, _), g in H.items())


def cmd_ladder(cfg: RunConfig) -> int:
    steps = ladder(cfg.n, cfg.m, cfg.a, sign=cfg.sign, max_crossings=cfg.max_crossings)
    if cfg.format == "json":
        print(canonical_json({"n": cfg.n, "m": cfg.m, "a": cfg.a, "a_0": cfg.a + cfg.n - 1,
                              "steps": _steps_json(steps)}))
    else:
        print(f"T({cfg.n},{cfg.m + 1}) in q-degree a_0={cfg.a + cfg.n - 1}")
        for s in steps:
            print(f"  i={s.i} a_i={s.a_i} alpha_i={s.alpha_i} c_i={s.c_i} x_i={s.x_i} "
                  f"min_q_bound={s.min_q_bound} acyclic={s.acyclic}")
    return EXIT_OK


def cmd_limit(cfg: RunConfig) -> int:
    res = limit_homology(cfg.n, cfg.j, sign=cfg.sign, max_crossings=cfg.max_crossings)
    groups = [{"h": h, "free_rank": g.free_rank, "torsion": list(g.invariant_factors)}
              for h, g in sorted(res.homology.items())]
    closed = None if res.closed_form is None else str(res.closed_form)
    if cfg.format == "json":
        print(canonical_json({"n": res.n, "j": res.j, "a_hat": res.a_hat, "m_hat": res.m_hat,
                              "groups": groups, "closed_form": closed,
                              "stable_checked": res.stable_checked}))
    else:
        print(f"stable degree j={res.j}: Kh^{res.a_hat}(T({res.n},{res.m_hat}))")
        body = ", ".join(f"h={h}:{g}" for h, g in sorted(res.homology.items()))
        print("  homology: " + (body or "0 (point)"))
        if closed is not None:
            print(f"  closed form: {closed}")
        print(f"  next column checked: {res.stable_checked}")
    return EXIT_OK


def cmd_paper_check(cfg: RunConfig) -> int:
    from .golden import run_golden_suite

    results = run_golden_suite(sign=cfg.sign)
    failed = [r for r in results if not r.ok]
    if cfg.format == "json":
        print(canonical_json({"passed": len(results) - len(failed), "failed": len(failed),
                              "checks": [{"name": r.name, "ok": r.ok, "detail": r.detail}
                                         for r in results]}))
    else:
        for r in results:
            print(f"[{'PASS' if r.ok else 'FAIL'}] {r.name}" + (f": {r.detail}" if r.detail else ""))
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"homology": cmd_homology, "stabilize": cmd_stabilize, "ladder": cmd_ladder,
            "limit": cmd_limit, "paper-check": cmd_paper_check}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khtorus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--a", type=int)
        p.add_argument("--j", type=int)
        p.add_argument("--k-max", type=int, default=1)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--cache-dir")
        p.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--sign", choices=("before", "after"), default="before")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(args).items()})
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (InputError, ResourceGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ChainComplexError, VerificationError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
