"""Khovanov generators, gradings and the cube differential over the integers.

A generator is a resolution of the free crossings together with a ``v+``/``v-``
label on each circle.  Labels are stored as tuples with ``0`` for ``v+`` and
``1`` for ``v-``, indexed by canonical circle id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .braid_cube import (
    BraidDiagram,
    EdgeKind,
    InputError,
    cube_table,
    parse_resolution,
)

DEFAULT_MAX_CROSSINGS = 24
SIGN_CONVENTIONS = ("before", "after")

V_PLUS, V_MINUS = 0, 1


class ResourceGuardError(RuntimeError):
    """Too many free crossings for the configured limit."""


@dataclass(frozen=True, order=True)
class Generator:
    res: tuple
    labels: tuple

    @property
    def ones(self) -> int:
        return sum(self.res)

    @property
    def label_balance(self) -> int:
        """#v+ - #v-."""
        return len(self.labels) - 2 * sum(self.labels)


@dataclass(frozen=True)
class Normalization:
    """Grading context: ``h = #1s + fixed_ones - n_minus``,
    ``q = h + n_plus - n_minus + #v+ - #v-``."""

    n_plus: int
    n_minus: int = 0
    fixed_ones: int = 0

    def h(self, ones: int) -> int:
        return ones + self.fixed_ones - self.n_minus

    def q(self, ones: int, balance: int) -> int:
        return self.h(ones) + self.n_plus - self.n_minus + balance

    def grading(self, gen: Generator) -> tuple:
        return self.h(gen.ones), self.q(gen.ones, gen.label_balance)


def ambient_normalization(diagram: BraidDiagram) -> Normalization:
    """Gradings read in the unresolved all-positive torus diagram."""
    return Normalization(diagram.crossing_count, 0, diagram.fixed_ones)


def own_normalization(diagram: BraidDiagram, n_minus: int = 0) -> Normalization:
    """Gradings read in the diagram itself, with ``n_minus`` of its free
    crossings negative under the chosen orientation."""
    return Normalization(diagram.free_count - n_minus, n_minus, 0)


@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}

    def add(self, i: int, j: int, v: int):
        w = self.entries.get((i, j), 0) + v
        if w:
            self.entries[(i, j)] = w
        else:
            self.entries.pop((i, j), None)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @classmethod
    def from_dense(cls, rows) -> "SparseIntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols,
                   {(i, j): int(v) for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        by_row: dict = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = SparseIntMatrix(self.rows, other.cols)
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                out.add(i, j, u * v)
        return out

    def is_zero(self) -> bool:
        return not self.entries


@dataclass
class GradedChainComplex:
    """Per-(h, q) bases and boundary matrices ``d: C^{h,q} -> C^{h+1,q}``.

    Matrix rows index the target basis, columns the source basis.
    """

    diagram: BraidDiagram
    normalization: Normalization
    bases: dict
    boundary: dict
    sign: str = "before"

    def degrees(self) -> list:
        return sorted(self.bases, key=lambda hq: (hq[1], hq[0]))

    def q_degrees(self) -> list:
        return sorted({q for _, q in self.bases})

    def size(self) -> int:
        return sum(len(b) for b in self.bases.values())

    def index(self, hq) -> dict:
        return {g: i for i, g in enumerate(self.bases.get(hq, ()))}

    def restrict_q(self, q: int) -> "GradedChainComplex":
        return GradedChainComplex(
            self.diagram, self.normalization,
            {hq: b for hq, b in self.bases.items() if hq[1] == q},
            {hq: d for hq, d in self.boundary.items() if hq[1] == q},
            self.sign)

    def apply(self, gen: Generator) -> dict:
        """Image of a basis generator, read off the stored matrices."""
        hq = self.normalization.grading(gen)
        col = self.index(hq)[gen]
        d = self.boundary.get(hq)
        if d is None:
            return {}
        target = self.bases[(hq[0] + 1, hq[1])]
        return {target[i]: v for (i, j), v in sorted(d.entries.items()) if j == col}

    def check_d_squared(self) -> list:
        """Bidegrees where ``d o d`` is nonzero (empty when the complex is valid)."""
        bad = []
        for (h, q), d in self.boundary.items():
            nxt = self.boundary.get((h + 1, q))
            if nxt is not None and not nxt.matmul(d).is_zero():
                bad.append((h, q))
        return sorted(bad)

    def with_normalization(self, norm: Normalization) -> "GradedChainComplex":
        """The same generators and maps, re-graded in another context."""
        old = self.normalization
        dh = norm.h(0) - old.h(0)
        dq = norm.q(0, 0) - old.q(0, 0)
        return GradedChainComplex(
            self.diagram, norm,
            {(h + dh, q + dq): b for (h, q), b in self.bases.items()},
            {(h + dh, q + dq): d for (h, q), d in self.boundary.items()},
            self.sign)


def _check_guard(diagram: BraidDiagram, max_crossings: Optional[int]):
    limit = DEFAULT_MAX_CROSSINGS if max_crossings is None else max_crossings
    if diagram.free_count > limit:
        raise ResourceGuardError(
            f"{diagram.free_count} free crossings exceeds the limit of {limit}")


def _bits(r: int, N: int) -> tuple:
    return tuple((r >> (N - 1 - j)) & 1 for j in range(N))


def _label_sets(c: int, k: Optional[int]) -> Iterable[tuple]:
    """Labelings of ``c`` circles (lexicographic, v+ < v-), optionally with
    exactly ``k`` v- labels."""
    ks = range(c + 1) if k is None else (k,)
    out = []
    for kk in ks:
        for minus in combinations(range(c), kk):
            lab = [V_PLUS] * c
            for i in minus:
                lab[i] = V_MINUS
            out.append(tuple(lab))
    out.sort()
    return out


def generators(diagram: BraidDiagram, normalization: Optional[Normalization] = None,
               q: Optional[int] = None, max_crossings: Optional[int] = None) -> dict:
    """All generators grouped by ``(h, q)``, each list in canonical order."""
    _check_guard(diagram, max_crossings)
    norm = normalization or ambient_normalization(diagram)
    tab = cube_table(diagram)
    N = diagram.free_count
    out: dict = {}
    for r in range(len(tab)):
        res = _bits(r, N)
        ones = sum(res)
        c = int(tab.counts[r])
        k = None
        if q is not None:
            # q = h + n_plus - n_minus + c - 2k
            twice_k = norm.q(ones, c) - q
            if twice_k % 2 or not 0 <= twice_k // 2 <= c:
                continue
            k = twice_k // 2
        h = norm.h(ones)
        for lab in _label_sets(c, k):
            gq = norm.q(ones, c - 2 * sum(lab))
            out.setdefault((h, gq), []).append(Generator(res, lab))
    return out


def _edge_sign(res: tuple, j: int, fixed_before: int, fixed_after: int, sign: str) -> int:
    if sign == "before":
        count = sum(res[:j]) + fixed_before
    else:
        count = sum(res[j + 1:]) + fixed_after
    return -1 if count % 2 else 1


def _transport(edge, labels: tuple, tgt_count: int) -> list:
    """Frobenius merge/split on labels; returns list of (coefficient, labels)."""
    base = [V_PLUS] * tgt_count
    for s, t in edge.correspondence:
        base[t] = labels[s]
    if edge.kind is EdgeKind.MERGE:
        a, b = (labels[s] for s in edge.source)
        if a == V_MINUS and b == V_MINUS:
            return []
        base[edge.target[0]] = V_MINUS if V_MINUS in (a, b) else V_PLUS
        return [(1, tuple(base))]
    (a,) = (labels[s] for s in edge.source)
    t1, t2 = edge.target
    if a == V_MINUS:
        base[t1] = base[t2] = V_MINUS
        return [(1, tuple(base))]
    out = []
    for l1, l2 in ((V_PLUS, V_MINUS), (V_MINUS, V_PLUS)):
        lab = list(base)
        lab[t1], lab[t2] = l1, l2
        out.append((1, tuple(lab)))
    return out


def _fixed_counts(diagram: BraidDiagram) -> tuple:
    fixed = diagram.fixed
    before, after = [], []
    for c in diagram.free:
        before.append(sum(1 for d in range(c) if fixed[d] == 1))
        after.append(sum(1 for d in range(c + 1, len(fixed)) if fixed[d] == 1))
    return before, after


class _DifferentialBuilder:
    def __init__(self, diagram: BraidDiagram, sign: str):
        if sign not in SIGN_CONVENTIONS:
            raise InputError(f"sign convention must be one of {SIGN_CONVENTIONS}")
        self.diagram = diagram
        self.sign = sign
        self.tab = cube_table(diagram)
        self.N = diagram.free_count
        self.before, self.after = _fixed_counts(diagram)
        self._edges: dict = {}

    def edge(self, r: int, j: int):
        key = (r, j)
        e = self._edges.get(key)
        if e is None:
            e = self._edges[key] = self.tab.edge(r, j)
        return e

    def image(self, gen: Generator) -> dict:
        N = self.N
        r = 0
        for b in gen.res:
            r = (r << 1) | b
        out: dict = {}
        for j in range(N):
            if gen.res[j]:
                continue
            sgn = _edge_sign(gen.res, j, self.before[j], self.after[j], self.sign)
            r2 = r | (1 << (N - 1 - j))
            res2 = gen.res[:j] + (1,) + gen.res[j + 1:]
            for coef, lab in _transport(self.edge(r, j), gen.labels, int(self.tab.counts[r2])):
                g2 = Generator(res2, lab)
                v = out.get(g2, 0) + sgn * coef
                if v:
                    out[g2] = v
                else:
                    out.pop(g2, None)
        return out


def differential(diagram: BraidDiagram, gen: Generator, sign: str = "before") -> dict:
    """Image of one generator as ``{Generator: coefficient}``."""
    gen = Generator(parse_resolution(gen.res), tuple(gen.labels))
    if len(gen.res) != diagram.free_count:
        raise InputError("resolution length does not match the diagram")
    count = int(cube_table(diagram).counts[int("".join(map(str, gen.res)) or "0", 2)])
    if len(gen.labels) != count:
        raise InputError(f"generator needs {count} labels, got {len(gen.labels)}")
    return _DifferentialBuilder(diagram, sign).image(gen)


def complex(diagram: BraidDiagram, q: Optional[int] = None,
            normalization: Optional[Normalization] = None, sign: str = "before",
            max_crossings: Optional[int] = None) -> GradedChainComplex:
    """Assemble the Khovanov complex, optionally restricted to one q-degree."""
    norm = normalization or ambient_normalization(diagram)
    bases = generators(diagram, norm, q, max_crossings)
    builder = _DifferentialBuilder(diagram, sign)
    index = {hq: {g: i for i, g in enumerate(b)} for hq, b in bases.items()}
    boundary = {}
    for (h, gq), basis in bases.items():
        tgt_index = index.get((h + 1, gq))
        if tgt_index is None:
            continue
        mat = SparseIntMatrix(len(tgt_index), len(basis))
        for col, g in enumerate(basis):
            for g2, v in builder.image(g).items():
                mat.entries[(tgt_index[g2], col)] = v
        boundary[(h, gq)] = mat
    return GradedChainComplex(diagram, norm, bases, boundary, sign)


def split_at(cx: GradedChainComplex, crossing: int) -> tuple:
    """Split along a free crossing into (sub, quotient).

    ``sub`` holds the generators with that crossing 1-smoothed (closed under
    the differential), ``quotient`` those with it 0-smoothed.  Both keep the
    ambient gradings of ``cx`` and live on the diagram with the crossing
    pinned, with the bit dropped from their resolutions.
    """
    diagram = cx.diagram
    if crossing not in diagram.free:
        raise InputError(f"crossing {crossing} is not free in this diagram")
    j = diagram.free.index(crossing)
    parts = []
    for bit in (1, 0):
        sub_diagram = BraidDiagram(diagram.spec, diagram.ladder + ((crossing, bit),))
        norm = Normalization(cx.normalization.n_plus, cx.normalization.n_minus,
                             cx.normalization.fixed_ones + bit)
        keep = {}
        bases = {}
        for hq, basis in cx.bases.items():
            h, gq = hq
            sel = [(i, g) for i, g in enumerate(basis) if g.res[j] == bit]
            if not sel:
                continue
            keep[hq] = {i: new for new, (i, _) in enumerate(sel)}
            bases[hq] = [Generator(g.res[:j] + g.res[j + 1:], g.labels) for _, g in sel]
        # bases keep their ambient (h, q); h already counts the pinned 1
        boundary = {}
        for hq, d in cx.boundary.items():
            src = keep.get(hq)
            tgt = keep.get((hq[0] + 1, hq[1]))
            if src is None or tgt is None:
                continue
            mat = SparseIntMatrix(len(tgt), len(src))
            for (i, k), v in d.entries.items():
                if i in tgt and k in src:
                    mat.entries[(tgt[i], src[k])] = v
            boundary[hq] = mat
        parts.append(GradedChainComplex(sub_diagram, norm, bases, boundary, cx.sign))
    return parts[0], parts[1]
