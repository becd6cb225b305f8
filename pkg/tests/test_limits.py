import pytest

from khtorus.braid_cube import InputError
from khtorus.integral_homology import AbelianGroup, torus_homology
from khtorus.limits import (
    POINT,
    MooreZ2,
    Sphere,
    SpectrumDescription,
    limit_homology,
    limit_onset,
    n2_closed_form,
    verify_t2_facts,
    verify_t3_parity,
)
from khtorus.stabilization import onset_bound

Z = AbelianGroup(1)
Z2 = AbelianGroup(0, (2,))


def test_onset_examples():
    assert limit_onset(3, 3) == (9, 3)
    assert limit_onset(3, 2) == (6, 2)
    assert limit_onset(3, -5) == (-5, 0)
    assert limit_onset(2, 4) == (7, 3)
    assert limit_onset(2, -4) == (-4, 0)
    assert limit_onset(4, 2) == (17, 5)
    assert limit_onset(4, -1) == (11, 4)
    with pytest.raises(InputError):
        limit_onset(1, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_onset_lies_on_the_stable_line_and_past_the_bound(n):
    for j in range(-8, 15):
        a, m = limit_onset(n, j)
        assert a - m * (n - 1) == j
        if m > 0 or n >= 4:
            assert m >= onset_bound(n, a)


def test_closed_forms():
    assert n2_closed_form(0).reduced_cohomology() == {0: Z}
    assert n2_closed_form(2).reduced_cohomology() == {2: Z}
    assert n2_closed_form(4).reduced_cohomology() == {3: Z2}
    assert n2_closed_form(6).reduced_cohomology() == {3: Z, 4: Z}
    assert n2_closed_form(3) == POINT and n2_closed_form(-3) == POINT
    assert str(n2_closed_form(8)) == "Moore(Z/2, 5)"
    assert str(POINT) == "*"
    wedge = SpectrumDescription((Sphere(1), Sphere(1), MooreZ2(1)))
    assert wedge.reduced_cohomology() == {1: AbelianGroup(2, (2,))}


@pytest.mark.parametrize("j", range(-3, 11))
def test_two_strand_limits(j):
    res = limit_homology(2, j)
    assert res.homology == n2_closed_form(j).reduced_cohomology()
    assert res.stable_checked or j < -2


def test_three_strand_torsion_class():
    res = limit_homology(3, 3)
    assert (res.a_hat, res.m_hat) == (9, 3)
    assert res.homology == {3: Z2, 4: Z}
    assert torus_homology(3, 4, 11).column(11) == res.homology


def test_below_the_unlink_is_trivial():
    res = limit_homology(4, -5)
    assert res.is_trivial and not res.stable_checked


def test_verification_skipped_past_guard():
    res = limit_homology(2, 6, max_crossings=4)
    assert res.m_hat == 4 and not res.stable_checked


def test_t2_facts():
    rep = verify_t2_facts(8)
    assert rep.ok and rep.checked == list(range(9))


def test_t3_parity():
    rep = verify_t3_parity(4)
    assert rep.ok and rep.scanned > 0


def test_mismatched_next_column_raises(monkeypatch):
    import khtorus.limits as lim

    monkeypatch.setattr(lim, "_column", lambda n, m, q, sign, mc: {m: Z})
    with pytest.raises(lim.VerificationError):
        limit_homology(2, 4)
