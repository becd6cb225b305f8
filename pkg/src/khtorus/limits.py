"""Limiting Khovanov homology of ``T(n, infinity)`` per stable q-degree.

Stable q-degree ``j`` indexes the column ``Kh^{j + k(n-1)}(T(n, k))``; the
limit is read off the first column past the onset bound, at ``(a_hat, m_hat)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .braid_cube import InputError
from .integral_homology import AbelianGroup, GradedHomology, torus_homology
from .khovanov_chain import DEFAULT_MAX_CROSSINGS


class VerificationError(RuntimeError):
    """A computed column disagrees with a claimed identity."""


@dataclass(frozen=True)
class Sphere:
    d: int

    def __str__(self):
        return f"S^{self.d}"


@dataclass(frozen=True)
class MooreZ2:
    """Two-cell spectrum with reduced cohomology ``Z/2`` in degree ``d``."""

    d: int

    def __str__(self):
        return f"Moore(Z/2, {self.d})"


@dataclass(frozen=True)
class Point:
    def __str__(self):
        return "*"


@dataclass(frozen=True)
class SpectrumDescription:
    summands: tuple = ()

    def reduced_cohomology(self) -> dict:
        """``{h: AbelianGroup}`` of the wedge."""
        free: dict = {}
        tors: dict = {}
        for s in self.summands:
            if isinstance(s, Sphere):
                free[s.d] = free.get(s.d, 0) + 1
            elif isinstance(s, MooreZ2):
                tors.setdefault(s.d, []).append(2)
        return {h: AbelianGroup(free.get(h, 0), tuple(sorted(tors.get(h, ()))))
                for h in sorted(set(free) | set(tors))}

    def __str__(self):
        real = [s for s in self.summands if not isinstance(s, Point)]
        return " ∨ ".join(map(str, real)) if real else "*"


POINT = SpectrumDescription((Point(),))


def limit_onset(n: int, j: int) -> tuple:
    """``(a_hat, m_hat)``: the first column from which stable degree ``j`` is constant."""
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    if n == 2:
        m_hat = math.ceil(Fraction(j + 1, 2))
        if m_hat < 0:
            return j, 0
        return m_hat + j, m_hat
    if n == 3:
        if j % 2 == 0 and j >= -2:
            return 2 * j + 2, (j + 2) // 2
        if j % 2 and j >= -3:
            return 2 * j + 3, (j + 3) // 2
        return j, 0
    if j >= 1:
        return n * j + (n - 1) ** 2, j + n - 1
    return j + n * (n - 1), n


@dataclass
class LimitResult:
    n: int
    j: int
    a_hat: int
    m_hat: int
    homology: dict = field(default_factory=dict)  # h -> AbelianGroup
    closed_form: Optional[SpectrumDescription] = None
    stable_checked: bool = False

    @property
    def is_trivial(self) -> bool:
        return not self.homology


def _column(n: int, m: int, q: int, sign: str, max_crossings) -> dict:
    H = torus_homology(n, m, q, sign=sign, max_crossings=max_crossings)
    return {h: g for (h, qq), g in H.groups.items() if qq == q}


def limit_homology(n: int, j: int, verify: bool = True, sign: str = "before",
                   max_crossings: Optional[int] = None) -> LimitResult:
    """Homology of the stable type in degree ``j``, by computing its onset column.

    With ``verify`` the next column along the stable line is computed too
    (when it fits under the crossing limit) and must agree.
    """
    a_hat, m_hat = limit_onset(n, j)
    closed = n2_closed_form(j) if n == 2 else None
    if j < -n:
        # below the unlink's lowest q-degree
        return LimitResult(n, j, a_hat, m_hat, {}, closed, False)
    col = _column(n, m_hat, a_hat, sign, max_crossings)
    checked = False
    limit = DEFAULT_MAX_CROSSINGS if max_crossings is None else max_crossings
    if verify and (m_hat + 1) * (n - 1) <= limit:
        nxt = _column(n, m_hat + 1, a_hat + n - 1, sign, max_crossings)
        if nxt != col:
            raise VerificationError(
                f"stable degree {j}: Kh^{a_hat}(T({n},{m_hat})) != "
                f"Kh^{a_hat + n - 1}(T({n},{m_hat + 1}))")
        checked = True
    return LimitResult(n, j, a_hat, m_hat, col, closed, checked)


def n2_closed_form(j: int) -> SpectrumDescription:
    """The wedge of spheres and Moore spectra giving the two-strand limit."""
    if j in (-2, 0):
        return SpectrumDescription((Sphere(0),))
    if j == 2:
        return SpectrumDescription((Sphere(2),))
    if j >= 4 and j % 4 == 0:
        # suspension of RP^2: cohomology Z/2 one above the bottom cell
        return SpectrumDescription((MooreZ2(j // 2 + 1),))
    if j >= 6 and j % 4 == 2:
        return SpectrumDescription((Sphere(j // 2), Sphere(j // 2 + 1)))
    return POINT


@dataclass
class FactReport:
    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    scanned: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_t2_facts(m_max: int, sign: str = "before") -> FactReport:
    """Parity vanishing, thinness and the top-degree groups of ``Kh(T(2, m))``."""
    rep = FactReport()
    for m in range(m_max + 1):
        H = torus_homology(2, m, sign=sign)
        for (h, q), g in H.groups.items():
            if (q - m) % 2:
                rep.failures.append((m, h, q, "parity"))
            # the split unlink T(2,0) sits on three diagonals; thinness is for m >= 1
            if m >= 1 and q - 2 * h not in (m - 2, m):
                rep.failures.append((m, h, q, "thinness"))
        top = 3 * m - 2
        col = H.column(top)
        if m >= 3 and m % 2:
            expect = {m: AbelianGroup(0, (2,))}
        elif m >= 4 and m % 2 == 0:
            expect = {m - 1: AbelianGroup(1), m: AbelianGroup(1)}
        else:
            expect = None
        if expect is not None and col != expect:
            bad = sorted(set(col) | set(expect))
            rep.failures += [(m, h, top, "top degree") for h in bad
                             if col.get(h) != expect.get(h)]
        rep.checked.append(m)
    return rep


def verify_t3_parity(m_max: int) -> FactReport:
    """No generator of ``KC(T(3, m))`` has even q-degree."""
    from .braid_cube import BraidSpec, cube_table, torus_braid

    rep = FactReport()
    for m in range(m_max + 1):
        d = torus_braid(BraidSpec(3, m))
        tab = cube_table(d)
        N = d.free_count
        n_plus = d.crossing_count
        for r in range(len(tab)):
            ones = bin(r).count("1")
            c = int(tab.counts[r])
            rep.scanned += 1 << c
            # q = ones + n_plus + c - 2k; parity independent of the labels
            if (ones + n_plus + c) % 2 == 0:
                res = tuple((r >> (N - 1 - i)) & 1 for i in range(N))
                rep.failures.append((m, res, ones + n_plus + c))
        rep.checked.append(m)
    return rep
