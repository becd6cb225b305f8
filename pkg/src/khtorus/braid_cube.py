"""Torus braid diagrams, their smoothings, and cube-edge classification.

Crossings of ``T(n, m)`` are enumerated block by block from the bottom of the
braid, and left to right inside a block, so crossing ``c`` (0-based) is the
generator ``sigma_{k+1}`` with ``k = c % (n - 1)``.  Smoothing 0 of a
positive braid crossing is the identity tangle, smoothing 1 the turnback.

The closed braid is cut at the level just below every crossing; the point of
strand position ``p`` at level ``c`` is node ``c * n + p`` (the arc segment
entering crossing ``c`` from below).  Level ``C`` is glued to level 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels

Resolution = tuple  # tuple of 0/1 bits over the free crossings, in crossing order


class InputError(ValueError):
    """Invalid parameters for a diagram, resolution or grading request."""


@dataclass(frozen=True)
class BraidSpec:
    n: int
    m: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise InputError(f"strand count must be >= 2, got {self.n!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise InputError(f"twist count must be >= 0, got {self.m!r}")

    @property
    def crossing_count(self) -> int:
        return self.m * (self.n - 1)


@dataclass(frozen=True)
class BraidDiagram:
    """A torus braid closure with some crossings pinned to a smoothing.

    ``ladder`` lists ``(crossing, smoothing)`` pairs in the order they were
    resolved.  The remaining crossings are free and index the resolution
    bit vectors, in crossing order.
    """

    spec: BraidSpec
    ladder: tuple = ()

    def __post_init__(self):
        seen = set()
        for c, s in self.ladder:
            if not 0 <= c < self.crossing_count:
                raise InputError(f"ladder crossing {c} out of range")
            if s not in (0, 1):
                raise InputError(f"smoothing must be 0 or 1, got {s!r}")
            if c in seen:
                raise InputError(f"crossing {c} pinned twice")
            seen.add(c)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def crossing_count(self) -> int:
        return self.spec.crossing_count

    @cached_property
    def generators(self) -> tuple:
        """0-based left strand position of each crossing."""
        n = self.spec.n
        return tuple(c % (n - 1) for c in range(self.crossing_count))

    @cached_property
    def fixed(self) -> tuple:
        out = [-1] * self.crossing_count
        for c, s in self.ladder:
            out[c] = s
        return tuple(out)

    @cached_property
    def free(self) -> tuple:
        return tuple(c for c in range(self.crossing_count) if self.fixed[c] < 0)

    @property
    def free_count(self) -> int:
        return len(self.free)

    @property
    def fixed_ones(self) -> int:
        return sum(1 for _, s in self.ladder if s == 1)

    @property
    def num_nodes(self) -> int:
        return max(self.crossing_count, 1) * self.spec.n

    def full_bits(self, res: Sequence[int]) -> tuple:
        """Smoothing of every crossing, free bits merged with pinned ones."""
        if len(res) != self.free_count:
            raise InputError(
                f"resolution has {len(res)} bits, diagram has {self.free_count} free crossings")
        out = list(self.fixed)
        for c, b in zip(self.free, res):
            if b not in (0, 1):
                raise InputError(f"resolution bits must be 0/1, got {b!r}")
            out[c] = int(b)
        return tuple(out)

    def residual_word(self) -> tuple:
        """Generator positions of the free crossings, bottom to top."""
        return tuple(self.generators[c] for c in self.free)


@dataclass(frozen=True)
class SmoothedState:
    circle_count: int
    arc_to_circle: tuple = field(repr=False)

    def members(self, circle: int) -> tuple:
        return tuple(a for a, k in enumerate(self.arc_to_circle) if k == circle)


class EdgeKind(Enum):
    MERGE = "merge"
    SPLIT = "split"


@dataclass(frozen=True)
class EdgeInfo:
    """One cube edge: which circles the flipped crossing touches.

    For a merge, ``source`` holds the two source circles and ``target`` the
    single target circle; for a split it is the other way round.
    ``correspondence`` maps every untouched source circle to its target.
    """

    kind: EdgeKind
    source: tuple
    target: tuple
    correspondence: tuple


def torus_braid(spec: BraidSpec) -> BraidDiagram:
    if not isinstance(spec, BraidSpec):
        spec = BraidSpec(*spec)
    return BraidDiagram(spec)


def ladder_crossings(spec: BraidSpec) -> tuple:
    """The topmost block's crossings in the order the ladder resolves them.

    The first crossing resolved is the topmost one of the block, then the
    ladder walks down the block, so the i-th ladder crossing carries the
    generator ``sigma_{n-i}``.
    """
    if spec.m == 0:
        raise InputError("T(n, 0) has no crossings to resolve")
    top = (spec.m - 1) * (spec.n - 1)
    return tuple(range(top + spec.n - 2, top - 1, -1))


def ladder_diagram(spec: BraidSpec, i: int, kind: str) -> BraidDiagram:
    """``D_i`` (first ``i`` ladder crossings at 0) or ``E_i`` (first ``i-1``
    at 0, the ``i``-th at 1) cut from the torus braid ``spec``."""
    kind = kind.upper()
    n = spec.n
    if kind == "D":
        if not 0 <= i <= n - 1:
            raise InputError(f"D_i needs 0 <= i <= {n - 1}, got {i}")
        if i == 0:
            return BraidDiagram(spec)
        order = ladder_crossings(spec)
        return BraidDiagram(spec, tuple((c, 0) for c in order[:i]))
    if kind == "E":
        if not 1 <= i <= n - 1:
            raise InputError(f"E_i needs 1 <= i <= {n - 1}, got {i}")
        order = ladder_crossings(spec)
        return BraidDiagram(spec, tuple((c, 0) for c in order[:i - 1]) + ((order[i - 1], 1),))
    raise InputError(f"kind must be 'D' or 'E', got {kind!r}")


def parse_resolution(res) -> tuple:
    if isinstance(res, str):
        return tuple(int(ch) for ch in res)
    return tuple(int(b) for b in res)


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def smooth(diagram: BraidDiagram, res) -> SmoothedState:
    """Smooth every crossing and return the circles of the closed result."""
    bits = diagram.full_bits(parse_resolution(res))
    n = diagram.n
    C = diagram.crossing_count
    parent = list(range(diagram.num_nodes))
    for c, (k, s) in enumerate(zip(diagram.generators, bits)):
        lo, hi = c * n, ((c + 1) % C) * n
        pairs = [(lo + p, hi + p) for p in range(n) if s == 0 or p not in (k, k + 1)]
        if s == 1:
            pairs += [(lo + k, lo + k + 1), (hi + k, hi + k + 1)]
        for a, b in pairs:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    ids = {}
    arc_to_circle = []
    for v in range(diagram.num_nodes):
        root = _find(parent, v)
        arc_to_circle.append(ids.setdefault(root, len(ids)))
    return SmoothedState(len(ids), tuple(arc_to_circle))


def crossing_arcs(diagram: BraidDiagram, crossing: int) -> tuple:
    """The four nodes at a crossing: (below-left, below-right, above-left, above-right)."""
    n = diagram.n
    k = diagram.generators[crossing]
    lo = crossing * n
    hi = ((crossing + 1) % diagram.crossing_count) * n
    return lo + k, lo + k + 1, hi + k, hi + k + 1


def classify_edge(diagram, src_labels, src_count, tgt_labels, tgt_count, crossing) -> EdgeInfo:
    """Classify the edge given node->circle arrays for both endpoints."""
    bl, br, al, _ = crossing_arcs(diagram, crossing)
    a, b = int(src_labels[bl]), int(src_labels[br])
    if a != b:
        kind = EdgeKind.MERGE
        source = (min(a, b), max(a, b))
        target = (int(tgt_labels[bl]),)
    else:
        kind = EdgeKind.SPLIT
        source = (a,)
        t1, t2 = int(tgt_labels[bl]), int(tgt_labels[al])
        target = (min(t1, t2), max(t1, t2))
    # smallest node of each circle is its representative
    reps = np.full(src_count, -1, dtype=np.int64)
    for v in range(len(src_labels) - 1, -1, -1):
        reps[src_labels[v]] = v
    corr = tuple(
        (s, int(tgt_labels[reps[s]])) for s in range(src_count) if s not in source)
    return EdgeInfo(kind, source, target, corr)


def edge_type(diagram: BraidDiagram, res, crossing_index: int) -> EdgeInfo:
    """Classify the cube edge flipping free bit ``crossing_index`` from 0 to 1."""
    res = parse_resolution(res)
    if not 0 <= crossing_index < diagram.free_count:
        raise InputError(f"free crossing index {crossing_index} out of range")
    if res[crossing_index] != 0:
        raise InputError(f"bit {crossing_index} of {res} is already 1")
    target = list(res)
    target[crossing_index] = 1
    s, t = smooth(diagram, res), smooth(diagram, target)
    if abs(s.circle_count - t.circle_count) != 1:  # pragma: no cover - topology guarantees it
        raise AssertionError("cube edge must change the circle count by one")
    return classify_edge(diagram, s.arc_to_circle, s.circle_count,
                         t.arc_to_circle, t.circle_count, diagram.free[crossing_index])


class CubeTable:
    """Circle labels for all ``2**N`` resolutions of a diagram, computed in bulk."""

    def __init__(self, diagram: BraidDiagram):
        self.diagram = diagram
        self.labels, self.counts = _kernels.label_cube(
            diagram.n, diagram.generators, diagram.fixed, diagram.free)
        self._reps = None

    def __len__(self):
        return len(self.counts)

    @property
    def reps(self):
        """Smallest node of every circle, per resolution (padded with -1)."""
        if self._reps is None:
            R, V = self.labels.shape
            width = int(self.counts.max()) if R else 0
            reps = np.full((R, width), V, dtype=np.int64)
            rows = np.repeat(np.arange(R), V)
            nodes = np.tile(np.arange(V), R)
            np.minimum.at(reps, (rows, self.labels.ravel().astype(np.int64)), nodes)
            reps[reps == V] = -1
            self._reps = reps
        return self._reps

    def edge(self, r: int, j: int) -> EdgeInfo:
        """Edge from resolution index ``r`` flipping free bit ``j``."""
        d = self.diagram
        N = d.free_count
        r2 = r | (1 << (N - 1 - j))
        bl, br, al, _ = crossing_arcs(d, d.free[j])
        src, tgt = self.labels[r], self.labels[r2]
        a, b = int(src[bl]), int(src[br])
        if a != b:
            kind, source, target = EdgeKind.MERGE, (min(a, b), max(a, b)), (int(tgt[bl]),)
        else:
            t1, t2 = int(tgt[bl]), int(tgt[al])
            kind, source, target = EdgeKind.SPLIT, (a,), (min(t1, t2), max(t1, t2))
        reps = self.reps[r]
        corr = tuple((s, int(tgt[reps[s]]))
                     for s in range(int(self.counts[r])) if s not in source)
        return EdgeInfo(kind, source, target, corr)


_TABLES: dict = {}


def cube_table(diagram: BraidDiagram) -> CubeTable:
    tab = _TABLES.get(diagram)
    if tab is None:
        if len(_TABLES) > 16:
            _TABLES.clear()
        tab = _TABLES[diagram] = CubeTable(diagram)
    return tab
