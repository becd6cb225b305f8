import pytest
from hypothesis import given, settings, strategies as st

import oracle
from khtorus.braid_cube import BraidSpec, InputError, ladder_crossings, ladder_diagram, torus_braid
from khtorus.khovanov_chain import (
    V_MINUS,
    V_PLUS,
    Generator,
    Normalization,
    ResourceGuardError,
    SparseIntMatrix,
    ambient_normalization,
    complex,
    differential,
    generators,
    own_normalization,
    split_at,
)
from khtorus.stabilization import c_closed_form


def test_generator_counts():
    # T(2,1): two circles at 0, one at 1
    gens = generators(torus_braid(BraidSpec(2, 1)))
    assert sum(len(v) for v in gens.values()) == 6
    for n in (2, 3, 4):
        gens = generators(torus_braid(BraidSpec(n, 0)))
        assert sum(len(v) for v in gens.values()) == 2 ** n


def test_generator_counts_match_oracle():
    for n, m in [(2, 3), (3, 2), (3, 3)]:
        ours = generators(torus_braid(BraidSpec(n, m)))
        ref = oracle.chain_groups(n, oracle.braid_word(n, m))
        assert {k: len(v) for k, v in ours.items()} == {k: len(v) for k, v in ref.items()}


def test_q_sliced_generators_are_the_slice():
    d = torus_braid(BraidSpec(3, 3))
    full = generators(d)
    for q in range(-5, 15):
        sliced = generators(d, q=q)
        assert sliced == {hq: b for hq, b in full.items() if hq[1] == q}


def test_worked_generator_gradings():
    d = torus_braid(BraidSpec(3, 2))
    x = Generator((1, 1, 0, 0), (V_MINUS,))
    assert ambient_normalization(d).grading(x) == (2, 5)


def test_split_image_of_worked_generator():
    d = torus_braid(BraidSpec(3, 2))
    img = differential(d, Generator((1, 1, 0, 0), (V_MINUS,)))
    top = {g: v for g, v in img.items() if g.res == (1, 1, 0, 1)}
    assert [(g.labels, abs(v)) for g, v in top.items()] == [((V_MINUS, V_MINUS), 1)]


def test_differential_input_checks():
    d = torus_braid(BraidSpec(2, 2))
    with pytest.raises(InputError):
        differential(d, Generator((0,), (V_PLUS,)))
    with pytest.raises(InputError):
        differential(d, Generator((0, 0), (V_PLUS,)))
    with pytest.raises(InputError):
        complex(d, sign="sideways")


def test_merge_of_two_minus_vanishes():
    d = torus_braid(BraidSpec(2, 1))
    # 0-resolution of the one-crossing closure: two circles merged by the crossing
    assert differential(d, Generator((0,), (V_MINUS, V_MINUS))) == {}
    img = differential(d, Generator((0,), (V_PLUS, V_MINUS)))
    assert list(img) == [Generator((1,), (V_MINUS,))]


@pytest.mark.parametrize("sign", ["before", "after"])
@pytest.mark.parametrize("n,m", [(2, 4), (3, 3), (4, 2), (3, 0)])
def test_d_squared_is_zero(n, m, sign):
    cx = complex(torus_braid(BraidSpec(n, m)), sign=sign)
    assert cx.check_d_squared() == []


def test_d_squared_on_ladder_pieces():
    spec = BraidSpec(4, 3)
    for i in (1, 2, 3):
        for kind in "DE":
            cx = complex(ladder_diagram(spec, i, kind))
            assert cx.check_d_squared() == []


def test_oracle_agrees_d_squared_zero():
    assert oracle.d_squared_zero(3, oracle.braid_word(3, 2))


def test_q_parity_matches_component_count():
    # q is congruent to the number of components mod 2
    for n, m, comps in [(2, 3, 1), (2, 4, 2), (3, 3, 3), (3, 2, 1)]:
        for h, q in generators(torus_braid(BraidSpec(n, m))):
            assert (q - comps) % 2 == 0


def test_guard_refuses_large_diagrams():
    with pytest.raises(ResourceGuardError):
        complex(torus_braid(BraidSpec(2, 30)))
    with pytest.raises(ResourceGuardError):
        complex(torus_braid(BraidSpec(2, 5)), max_crossings=4)


def test_normalization_formulas():
    norm = Normalization(4, 1, 2)
    assert norm.h(3) == 4
    assert norm.q(3, -1) == 4 + 3 - 1
    d = ladder_diagram(BraidSpec(3, 2), 1, "E")
    assert own_normalization(d, 2) == Normalization(1, 2, 0)
    assert ambient_normalization(d) == Normalization(4, 0, 1)


def test_split_partitions_the_complex():
    spec = BraidSpec(3, 3)
    cx = complex(torus_braid(spec), q=7)
    crossing = ladder_crossings(spec)[0]
    sub, quo = split_at(cx, crossing)
    assert sub.size() + quo.size() == cx.size()
    assert sub.check_d_squared() == [] and quo.check_d_squared() == []
    # pieces are the complexes of the pinned diagrams, in ambient grading
    for piece, kind in [(sub, "E"), (quo, "D")]:
        d = ladder_diagram(spec, 1, kind)
        direct = complex(d, q=7, normalization=piece.normalization)
        assert direct.bases == piece.bases
        assert {k: v.entries for k, v in direct.boundary.items()} == \
            {k: v.entries for k, v in piece.boundary.items()}


def test_split_rejects_pinned_crossing():
    d = ladder_diagram(BraidSpec(3, 2), 1, "E")
    with pytest.raises(InputError):
        split_at(complex(d), 3)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("i", [1, 2])
def test_shift_between_ambient_and_standalone(m, i):
    spec = BraidSpec(3, m + 1)
    e = ladder_diagram(spec, i, "E")
    c = c_closed_form(3, m, i)
    amb, own = ambient_normalization(e), own_normalization(e, c)
    for gen_list in generators(e, own).values():
        for g in gen_list:
            ha, qa = amb.grading(g)
            ho, qo = own.grading(g)
            assert (ha - ho, qa - qo) == (1 + c, 1 + i + 3 * c)


def test_with_normalization_regrades():
    cx = complex(torus_braid(BraidSpec(2, 2)))
    moved = cx.with_normalization(Normalization(2, 1))
    assert {(h + 1, q + 2) for h, q in moved.bases} == set(cx.bases)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=2, max_size=4),
       st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=3, max_size=3))
def test_sparse_matmul_matches_dense(a, b):
    A, B = SparseIntMatrix.from_dense(a), SparseIntMatrix.from_dense(b)
    want = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(2)] for i in range(len(a))]
    assert A.matmul(B).to_dense() == want
