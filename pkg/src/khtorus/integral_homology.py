"""Exact homology of bigraded integer chain complexes.

Ranks and invariant factors come from a Smith normal form computed in two
phases: sparse elimination on unit pivots (Markowitz-style choice), then a
dense Euclidean reduction of whatever non-unit core is left.  Python integers
throughout, so entry growth cannot overflow.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from . import _kernels
from .braid_cube import InputError
from .khovanov_chain import GradedChainComplex, SparseIntMatrix

# matrices at most this many entries go to the dense mod-p kernel
DENSE_MOD_P_LIMIT = 40_000


class ChainComplexError(RuntimeError):
    """The boundary maps do not compose to zero."""


@dataclass(frozen=True, order=True)
class AbelianGroup:
    free_rank: int = 0
    invariant_factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {d}")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {a} !| {b}")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return "⊕".join(parts) if parts else "0"


TRIVIAL = AbelianGroup()


@dataclass
class GradedHomology:
    """Nonzero groups keyed by ``(h, q)``; absent keys are trivial."""

    groups: dict = field(default_factory=dict)

    def __post_init__(self):
        self.groups = {k: g for k, g in self.groups.items() if not g.is_trivial}

    def __getitem__(self, hq) -> AbelianGroup:
        return self.groups.get(hq, TRIVIAL)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedHomology) and self.groups == other.groups

    def __iter__(self):
        return iter(sorted(self.groups, key=lambda hq: (hq[1], hq[0])))

    def items(self):
        return [(hq, self.groups[hq]) for hq in self]

    def column(self, q: int) -> dict:
        """``{h: group}`` at one q-degree."""
        return {h: g for (h, qq), g in self.groups.items() if qq == q}

    def shifted(self, dh: int = 0, dq: int = 0) -> "GradedHomology":
        return GradedHomology({(h + dh, q + dq): g for (h, q), g in self.groups.items()})

    def is_trivial(self) -> bool:
        return not self.groups

    def poincare(self) -> dict:
        """Graded Euler characteristic ``{q: sum (-1)^h rank}``."""
        out: dict = {}
        for (h, q), g in self.groups.items():
            out[q] = out.get(q, 0) + (-1) ** h * g.free_rank
        return {q: v for q, v in out.items() if v}


def _normalize_factors(diag) -> tuple:
    """Turn any nonzero diagonal into a divisibility chain."""
    ds = sorted(abs(d) for d in diag if d)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a // g * b
                    changed = True
        ds.sort()
    return tuple(ds)


def _dense_snf(A, certificates=False):
    """Euclidean SNF of a dense list-of-lists matrix.

    Returns the diagonal, and ``(U, V)`` with ``U A V`` diagonal when
    ``certificates`` is set.
    """
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if certificates else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if certificates else None

    def row_op(dst, src, f):  # row dst -= f * row src
        A[dst] = [x - f * y for x, y in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [x - f * y for x, y in zip(U[dst], U[src])]

    def col_op(dst, src, f):  # col dst -= f * col src
        for row in A:
            row[dst] -= f * row[src]
        if V is not None:
            for row in V:
                row[dst] -= f * row[src]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest leftover in row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            piv = A[t][t]
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            # row t += row bad, then keep reducing
            row_op(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
    if certificates:
        return diag, U, V
    return diag


def _sparse_unit_elimination(mat: SparseIntMatrix, p: Optional[int] = None):
    """Pivot away every unit entry reachable; returns (units_eliminated, residual rows).

    With a prime ``p`` the arithmetic is mod ``p``, every nonzero entry is a
    unit and the residual comes back empty, so the count is the rank over F_p.
    """
    rows: dict = {}
    cols: dict = {}
    for (i, j), v in mat.entries.items():
        if p is not None:
            v %= p
            if not v:
                continue
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    units = 0
    while heap:
        length, i = heapq.heappop(heap)
        row = rows.get(i)
        if row is None or len(row) != length:
            continue
        best = None
        for j, v in row.items():
            if p is not None or v == 1 or v == -1:
                cost = len(cols[j])
                if best is None or cost < best[0]:
                    best = (cost, j)
                    if cost == 1:
                        break
        if best is None:
            continue
        j = best[1]
        inv = row[j] if p is None else pow(row[j], p - 2, p)  # +-1 is its own inverse
        del rows[i]
        for jj in row:
            cols[jj].discard(i)
        for k in list(cols.pop(j)):
            other = rows[k]
            f = other[j] * inv
            for jj, v in row.items():
                w = other.get(jj, 0) - f * v
                if p is not None:
                    w %= p
                if w:
                    if jj not in other:
                        cols[jj].add(k)
                    other[jj] = w
                else:
                    del other[jj]
                    if jj != j:
                        cols[jj].discard(k)
            if other:
                heapq.heappush(heap, (len(other), k))
            else:
                del rows[k]
        units += 1
    return units, rows


def smith_normal_form(M, certificates: bool = False):
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of an integer matrix.

    ``M`` may be a :class:`SparseIntMatrix` or a dense list of rows.  With
    ``certificates=True`` returns ``(factors, U, V)`` where ``U`` and ``V``
    are unimodular and ``U M V`` is the Smith form (dense path).
    """
    if certificates:
        dense = M.to_dense() if isinstance(M, SparseIntMatrix) else [list(r) for r in M]
        diag, U, V = _dense_snf(dense, certificates=True)
        # the dense routine already enforces divisibility along the diagonal
        return tuple(diag), U, V
    if not isinstance(M, SparseIntMatrix):
        M = SparseIntMatrix.from_dense(M)
    units, rest = _sparse_unit_elimination(M)
    if rest:
        col_ids = sorted({j for r in rest.values() for j in r})
        where = {j: k for k, j in enumerate(col_ids)}
        dense = []
        for r in rest.values():
            row = [0] * len(col_ids)
            for j, v in r.items():
                row[where[j]] = v
            dense.append(row)
        tail = _normalize_factors(_dense_snf(dense))
    else:
        tail = ()
    return (1,) * units + tail


@dataclass(frozen=True)
class _MatrixSummary:
    rank: int
    torsion: tuple


def _summarize(mat: SparseIntMatrix) -> _MatrixSummary:
    factors = smith_normal_form(mat)
    return _MatrixSummary(len(factors), tuple(d for d in factors if d > 1))


def _summaries(cx: GradedChainComplex, workers: int) -> dict:
    keys = sorted(cx.boundary, key=lambda hq: (hq[1], hq[0]))
    mats = [cx.boundary[k] for k in keys]
    if workers > 1 and len(mats) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_summarize, mats))
    else:
        results = [_summarize(m) for m in mats]
    return dict(zip(keys, results))


def homology(cx: GradedChainComplex, workers: int = 1, check: bool = True) -> GradedHomology:
    """Integral homology with the differential raising ``h``.

    At ``(h, q)``: free rank ``dim C - rank d_h - rank d_{h-1}``, torsion the
    nontrivial invariant factors of the incoming map ``d_{h-1}``.
    """
    if check:
        bad = cx.check_d_squared()
        if bad:
            raise ChainComplexError(f"d o d != 0 at bidegrees {bad}")
    summ = _summaries(cx, workers)
    groups = {}
    for (h, q), basis in cx.bases.items():
        out_ = summ.get((h, q))
        in_ = summ.get((h - 1, q))
        rank_out = out_.rank if out_ else 0
        rank_in = in_.rank if in_ else 0
        free = len(basis) - rank_out - rank_in
        torsion = in_.torsion if in_ else ()
        groups[(h, q)] = AbelianGroup(free, torsion)
    return GradedHomology(groups)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _sparse_rank_mod_p(mat: SparseIntMatrix, p: int) -> int:
    return _sparse_unit_elimination(mat, p)[0]


def matrix_rank_mod_p(mat: SparseIntMatrix, p: int) -> int:
    if mat.rows * mat.cols <= DENSE_MOD_P_LIMIT:
        return _kernels.rank_mod_p(mat.to_dense() if mat.rows and mat.cols
                                   else [[0]], p)
    return _sparse_rank_mod_p(mat, p)


def homology_mod(cx: GradedChainComplex, p: int) -> dict:
    """Graded dimensions ``{(h, q): dim}`` of homology with F_p coefficients."""
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    ranks = {hq: matrix_rank_mod_p(d, p) for hq, d in cx.boundary.items()}
    out = {}
    for (h, q), basis in cx.bases.items():
        dim = len(basis) - ranks.get((h, q), 0) - ranks.get((h - 1, q), 0)
        if dim:
            out[(h, q)] = dim
    return out


_COLUMN_CACHE: dict = {}


def torus_homology(n: int, m: int, q: Optional[int] = None, sign: str = "before",
                   max_crossings: Optional[int] = None, workers: int = 1) -> GradedHomology:
    """``Kh(T(n, m))``, whole or restricted to one q-degree (memoized)."""
    from .braid_cube import BraidSpec, torus_braid
    from .khovanov_chain import complex

    key = (n, m, q, sign)
    hit = _COLUMN_CACHE.get(key)
    if hit is None and q is not None:
        whole = _COLUMN_CACHE.get((n, m, None, sign))
        if whole is not None:
            hit = GradedHomology({hq: g for hq, g in whole.groups.items() if hq[1] == q})
    if hit is None:
        cx = complex(torus_braid(BraidSpec(n, m)), q=q, sign=sign, max_crossings=max_crossings)
        hit = homology(cx, workers=workers)
        _COLUMN_CACHE[key] = hit
    return hit
