"""Golden suite behind ``khtorus paper-check``.

Every check recomputes its values from scratch and compares against the
published numbers for torus links (worked n=3 example, n=3 ladder table,
two-strand homology facts, limiting types).
"""

from __future__ import annotations

from dataclasses import dataclass

from .braid_cube import BraidSpec, ladder_crossings, ladder_diagram, smooth, torus_braid
from .integral_homology import AbelianGroup, GradedHomology, homology, torus_homology
from .khovanov_chain import (
    Generator,
    V_MINUS,
    ambient_normalization,
    complex,
    own_normalization,
    split_at,
)
from .limits import limit_homology, n2_closed_form, verify_t2_facts, verify_t3_parity
from .stabilization import a_step, c_closed_form, ladder, onset_bound, verify_collapse

Z = AbelianGroup(1)
KH_UNKNOT = GradedHomology({(0, -1): Z, (0, 1): Z})
KH_UNLINK2 = GradedHomology({(0, -2): Z, (0, 0): AbelianGroup(2), (0, 2): Z})


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _expect(pairs) -> str:
    bad = [f"{k}: got {got!r}, want {want!r}" for k, got, want in pairs if got != want]
    return "; ".join(bad)


def example_gradings(sign="before") -> str:
    """n=3, m=1, a=3: the generator readings and ladder constants."""
    spec = BraidSpec(3, 2)
    steps = ladder(3, 1, 3, check=False)
    d0 = torus_braid(spec)
    d1 = ladder_diagram(spec, 1, "D")
    e1 = ladder_diagram(spec, 1, "E")
    x = Generator((1, 1, 0, 0), (V_MINUS,))
    y = Generator((1, 1, 0), (V_MINUS, V_MINUS))  # free bits of E_1 = crossings 1..3
    x_d1 = Generator((1, 1, 0), (V_MINUS,))
    return _expect([
        ("a_0", a_step(3, 3, 0), 5),
        ("a_1", steps[0].a_i, 4), ("a_2", steps[1].a_i, 3),
        ("alpha_1", steps[0].alpha_i, -3), ("alpha_2", steps[1].alpha_i, -1),
        ("c_1", steps[0].c_i, 2), ("c_2", steps[1].c_i, 1),
        ("x ambient", ambient_normalization(d0).grading(x), (2, 5)),
        ("x in D_1", own_normalization(d1).grading(x_d1), (2, 4)),
        ("y ambient", ambient_normalization(e1).grading(y), (3, 5)),
        ("y in E_1", own_normalization(e1, 2).grading(y), (0, -3)),
    ])


def example_smoothing(sign="before") -> str:
    """1100 is one circle; the top crossing splits it and sends v- to v- (x) v-."""
    from .khovanov_chain import differential

    d0 = torus_braid(BraidSpec(3, 2))
    img = differential(d0, Generator((1, 1, 0, 0), (V_MINUS,)), sign=sign)
    top = {g: v for g, v in img.items() if g.res == (1, 1, 0, 1)}
    return _expect([
        ("circles of 1100", smooth(d0, "1100").circle_count, 1),
        ("circles of 1101", smooth(d0, "1101").circle_count, 2),
        ("image at 1101", sorted((g.labels, abs(v)) for g, v in top.items()),
         [((V_MINUS, V_MINUS), 1)]),
    ])


def example_collapse(sign="before") -> str:
    """E_1 half collapses at a=3; the E_2 half does not."""
    spec = BraidSpec(3, 2)
    cx = complex(torus_braid(spec), q=5, sign=sign)
    first, second = ladder_crossings(spec)
    v1 = verify_collapse(cx, first)
    steps = ladder(3, 1, 3, sign=sign)
    _, d1 = split_at(cx, first)
    v2 = verify_collapse(d1, second)
    return _expect([
        ("E_1 collapse", v1.status, "collapsed"),
        ("E_2 collapse", v2.status, "not_applicable"),
        ("step acyclicity", [s.acyclic for s in steps], [True, False]),
    ])


def c_table(sign="before") -> str:
    return _expect([
        ("n=3 m=4 i=1", c_closed_form(3, 4, 1), 6), ("n=3 m=4 i=2", c_closed_form(3, 4, 2), 5),
        ("n=2 m=5", c_closed_form(2, 5, 1), 5),
        ("n=3 m=1 i=1", c_closed_form(3, 1, 1), 2), ("n=3 m=1 i=2", c_closed_form(3, 1, 2), 1),
    ])


N3_LINKS = {0: (KH_UNKNOT, KH_UNLINK2), 1: (KH_UNKNOT, KH_UNKNOT), 2: (KH_UNLINK2, KH_UNKNOT)}


def n3_ladder_links(sign="before", ms=(3, 4, 5)) -> str:
    """Standalone E_i homology is that of U or U+U, per m mod 3."""
    pairs = []
    for m in ms:
        spec = BraidSpec(3, m + 1)
        for i in (1, 2):
            e = ladder_diagram(spec, i, "E")
            c = c_closed_form(3, m, i)
            H = homology(complex(e, normalization=own_normalization(e, c), sign=sign))
            pairs.append((f"E_{i} for m={m}", H, N3_LINKS[m % 3][i - 1]))
    return _expect(pairs)


def t22_column(sign="before") -> str:
    col = torus_homology(2, 2, 4, sign=sign)
    return _expect([("Kh^{*,4}(T(2,2))", col.column(4), {2: Z})])


def t2_facts(sign="before") -> str:
    rep = verify_t2_facts(8, sign=sign)
    return "" if rep.ok else str(rep.failures[:5])


def t3_parity(sign="before") -> str:
    rep = verify_t3_parity(5)
    return "" if rep.ok else str(rep.failures[:5])


def n2_limits(sign="before") -> str:
    pairs = []
    for j in range(-3, 11):
        res = limit_homology(2, j, sign=sign)
        pairs.append((f"j={j}", res.homology, n2_closed_form(j).reduced_cohomology()))
    return _expect(pairs)


def n3_sq2_chain(sign="before") -> str:
    lim = limit_homology(3, 3, sign=sign)
    c11 = torus_homology(3, 4, 11, sign=sign).column(11)
    c13 = torus_homology(3, 5, 13, sign=sign).column(13)
    return _expect([
        ("onset", (lim.a_hat, lim.m_hat), (9, 3)),
        ("Kh^11(T(3,4))", c11, lim.homology),
        ("Kh^13(T(3,5))", c13, lim.homology),
        ("n=3 even j", limit_homology(3, 2, sign=sign).homology, {}),
    ])


def onset_examples(sign="before") -> str:
    return _expect([("n=3 a=3", onset_bound(3, 3), 2), ("n=4 a=3", onset_bound(4, 3), 4),
                    ("n=2 a=3", onset_bound(2, 3), 2)])


def last_rung_is_smaller_torus(sign="before") -> str:
    spec = BraidSpec(3, 2)
    d = ladder_diagram(spec, 2, "D")
    return _expect([("residual word", d.residual_word(),
                     torus_braid(BraidSpec(3, 1)).residual_word())])


GOLDEN_CHECKS = [
    ("worked example: gradings and ladder constants", example_gradings),
    ("worked example: smoothing and split image", example_smoothing),
    ("worked example: collapse of E_1, not of E_2", example_collapse),
    ("negative crossing counts c_i", c_table),
    ("n=3 ladder: E_i are U or U+U", n3_ladder_links),
    ("D_{n-1} is the shorter torus braid", last_rung_is_smaller_torus),
    ("onset bounds", onset_examples),
    ("T(2,2) column q=4 is Z at h=2", t22_column),
    ("T(2,m) parity, thinness, top degree (m <= 8)", t2_facts),
    ("T(3,m) has no even q-degree (m <= 5)", t3_parity),
    ("n=2 limits match the closed forms", n2_limits),
    ("n=3, j=3 stable chain 9/11/13", n3_sq2_chain),
]


def run_golden_suite(sign: str = "before") -> list:
    out = []
    for name, fn in GOLDEN_CHECKS:
        try:
            detail = fn(sign=sign)
            out.append(CheckResult(name, not detail, detail))
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            out.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return out
