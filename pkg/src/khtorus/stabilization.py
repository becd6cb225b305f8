"""The D_i / E_i ladder, stabilization bounds, and homology-level verification.

Passing from ``T(n, m)`` to ``T(n, m+1)`` adds one block of ``n-1`` positive
crossings.  Resolving that block one crossing at a time splits the complex of
``T(n, m+1)`` in q-degree ``a + n - 1`` into a ``D_i`` quotient and an
``E_i`` subcomplex; when every ``E_i`` piece is acyclic the quotient
``D_{n-1} = T(n, m)`` carries all of the homology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .braid_cube import BraidSpec, InputError, ladder_crossings, torus_braid
from .integral_homology import GradedHomology, homology, torus_homology
from .khovanov_chain import GradedChainComplex, complex, split_at


def f_bound(a: int, n: int) -> Fraction:
    """``max((a + n - 1) / n, n)``, the onset threshold for ``n >= 4``."""
    return max(Fraction(a + n - 1, n), Fraction(n))


def onset_bound(n: int, a: int) -> int:
    """Smallest integer ``m`` from which stabilization in q-degree ``a`` is guaranteed."""
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    if n == 2:
        # strict: m > a/3
        return max(math.floor(Fraction(a, 3)) + 1, 0)
    if n == 3:
        return max(math.ceil(Fraction(a + 2, 4)), 0)
    return math.ceil(f_bound(a, n))


def bound_satisfied(n: int, m: int, a: int) -> bool:
    return m >= onset_bound(n, a)


def bound_monotone(n: int, a: int, m: int) -> bool:
    """Whether ``m >= f(a, n)`` implies ``m + 1 >= f(a + n - 1, n)``."""
    return not (m >= f_bound(a, n)) or (m + 1 >= f_bound(a + n - 1, n))


def c_closed_form(n: int, m: int, i: int) -> int:
    """Negative crossing count of ``E_i`` cut from ``T(n, m+1)``, for n = 2, 3."""
    if n == 2 and i == 1:
        return m
    if n == 3 and i in (1, 2):
        k, r = divmod(m, 3)
        table = {0: (4 * k, 4 * k), 1: (4 * k + 2, 4 * k + 1), 2: (4 * k + 3, 4 * k + 3)}
        return table[r][i - 1]
    raise InputError(f"no closed form for c_i with n={n}, i={i}")


def a_step(n: int, a: int, i: int) -> int:
    return a + n - 1 - i


def alpha_step(n: int, a: int, i: int, c: int) -> int:
    return a + n - 2 - i - 3 * c


def min_q_bound(n: int, m: int, c: int) -> int:
    """Lower bound on the minimal q-degree of ``Kh(E_i)``."""
    return -n + 1 + m * (n - 1) - 2 * c


def grading_shift(n: int, i: int, c: int) -> tuple:
    """Ambient-minus-standalone ``(h, q)`` shift of every generator in ``E_i``.

    Equals ``(1 + c, a_0 - alpha_i) = (1 + c, 1 + i + 3c)``.
    """
    return 1 + c, 1 + i + 3 * c


@dataclass(frozen=True)
class LadderStep:
    i: int
    a_i: int
    alpha_i: Optional[int]
    c_i: Optional[int]
    x_i: Optional[int]
    min_q_bound: Optional[int]
    acyclic: Optional[bool]
    c_lower_bound_ok: Optional[bool] = None


@dataclass
class StabilizationReport:
    n: int
    m: int
    a: int
    steps: list
    lhs: GradedHomology
    rhs: GradedHomology
    verdict: str
    bound_satisfied: bool

    @property
    def all_acyclic(self) -> bool:
        return all(s.acyclic for s in self.steps)

    @property
    def consistent(self) -> bool:
        """Bound and acyclicity together must force equal columns."""
        return not (self.bound_satisfied and self.all_acyclic) or self.verdict == "equal"


def ladder_pieces(n: int, m: int, a: int, sign: str = "before",
                  max_crossings: Optional[int] = None) -> tuple:
    """Split ``KC^{a+n-1}(T(n, m+1))`` along the ladder.

    Returns ``(ambient, pieces, last)``: the ambient complex, the list of
    ``E_i`` subcomplexes (ambient gradings) and the final ``D_{n-1}`` quotient.
    """
    spec = BraidSpec(n, m + 1)
    ambient = complex(torus_braid(spec), q=a + n - 1, sign=sign, max_crossings=max_crossings)
    pieces = []
    rest = ambient
    for c in ladder_crossings(spec):
        sub, rest = split_at(rest, c)
        pieces.append(sub)
    return ambient, pieces, rest


def ladder(n: int, m: int, a: int, c_values: Optional[dict] = None, check: bool = True,
           sign: str = "before", max_crossings: Optional[int] = None) -> list:
    """Ladder bookkeeping for ``T(n, m+1)`` in q-degree ``a + n - 1``.

    ``c_values`` maps ``i`` to ``c_i``; filled in from the closed form when
    ``n <= 3``.  With ``check`` each ``E_i`` piece's homology is computed.
    """
    if n < 2 or m < 0:
        raise InputError(f"need n >= 2 and m >= 0, got n={n}, m={m}")
    cs = dict(c_values or {})
    if n <= 3:
        for i in range(1, n):
            cs.setdefault(i, c_closed_form(n, m, i))
    acyclic = {}
    if check:
        _, pieces, _ = ladder_pieces(n, m, a, sign, max_crossings)
        for i, piece in enumerate(pieces, start=1):
            acyclic[i] = homology(piece).is_trivial()
    steps = []
    for i in range(1, n):
        c = cs.get(i)
        steps.append(LadderStep(
            i=i,
            a_i=a_step(n, a, i),
            alpha_i=None if c is None else alpha_step(n, a, i, c),
            c_i=c,
            x_i=0 if n <= 3 else None,
            min_q_bound=None if c is None else min_q_bound(n, m, c),
            acyclic=acyclic.get(i),
            c_lower_bound_ok=(c >= m + n - 2) if (c is not None and m >= n >= 3) else None,
        ))
    return steps


@dataclass
class CollapseVerdict:
    status: str  # "collapsed", "not_applicable" or "failed"
    sub_acyclic: bool
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def verify_collapse(cx: GradedChainComplex, crossing: int, q: Optional[int] = None) -> CollapseVerdict:
    """If the 1-smoothed part at ``crossing`` is acyclic, check that the
    0-smoothed quotient has the same homology as the whole complex."""
    if q is not None:
        cx = cx.restrict_q(q)
    sub, quotient = split_at(cx, crossing)
    if not homology(sub).is_trivial():
        return CollapseVerdict("not_applicable", False)
    total, rest = homology(cx), homology(quotient)
    bad = sorted(set(total.groups) ^ set(rest.groups)
                 | {hq for hq in total.groups if total[hq] != rest[hq]},
                 key=lambda hq: (hq[1], hq[0]))
    if bad:
        return CollapseVerdict("failed", True, bad)
    return CollapseVerdict("collapsed", True)


def _column(H: GradedHomology, q: int) -> GradedHomology:
    return GradedHomology({hq: g for hq, g in H.groups.items() if hq[1] == q})


def _same_by_h(lhs: GradedHomology, rhs: GradedHomology) -> bool:
    return {h: g for (h, _), g in lhs.groups.items()} == {h: g for (h, _), g in rhs.groups.items()}


def compare_step(n: int, m: int, a: int, sign: str = "before",
                 max_crossings: Optional[int] = None) -> StabilizationReport:
    """Compare ``Kh^{a+n-1}(T(n, m+1))`` with ``Kh^a(T(n, m))`` and record ladder evidence."""
    steps = ladder(n, m, a, check=True, sign=sign, max_crossings=max_crossings)
    lhs = _column(torus_homology(n, m + 1, a + n - 1, sign, max_crossings), a + n - 1)
    rhs = _column(torus_homology(n, m, a, sign, max_crossings), a)
    verdict = "equal" if _same_by_h(lhs, rhs) else "unequal"
    return StabilizationReport(n, m, a, steps, lhs, rhs, verdict, bound_satisfied(n, m, a))


def verify_stabilization(n: int, m: int, a: int, k_max: int, sign: str = "before",
                         max_crossings: Optional[int] = None) -> list:
    """Reports for ``k = 1..k_max``: ``Kh^{a+k(n-1)}(T(n, m+k))`` against
    ``Kh^{a+(k-1)(n-1)}(T(n, m+k-1))``."""
    if k_max < 1:
        raise InputError("k_max must be >= 1")
    if m < 0:
        # degenerate input: both columns are empty
        return []
    reports = []
    for k in range(1, k_max + 1):
        reports.append(compare_step(n, m + k - 1, a + (k - 1) * (n - 1), sign, max_crossings))
    return reports
