import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from khtorus import _kernels
from khtorus.braid_cube import (
    BraidDiagram,
    BraidSpec,
    EdgeKind,
    InputError,
    cube_table,
    edge_type,
    ladder_crossings,
    ladder_diagram,
    parse_resolution,
    smooth,
    torus_braid,
)


def test_spec_validation():
    assert BraidSpec(3, 2).crossing_count == 4
    for bad in [(1, 2), (0, 0), (3, -1), (2.5, 1)]:
        with pytest.raises(InputError):
            BraidSpec(*bad)


def test_generator_positions_cycle():
    assert torus_braid(BraidSpec(4, 2)).generators == (0, 1, 2, 0, 1, 2)


def test_trefoil_braid_smoothings():
    d = torus_braid(BraidSpec(2, 3))
    # all-zero closes into two parallel circles, all-one into three
    assert smooth(d, "000").circle_count == 2
    assert smooth(d, "111").circle_count == 3
    assert smooth(d, "100").circle_count == 1


def test_unlink_closure():
    d = torus_braid(BraidSpec(3, 0))
    assert smooth(d, "").circle_count == 3


def test_resolution_length_checked():
    d = torus_braid(BraidSpec(2, 3))
    with pytest.raises(InputError):
        smooth(d, "01")
    with pytest.raises(InputError):
        smooth(d, "012")


def test_parse_resolution_accepts_strings_and_sequences():
    assert parse_resolution("0110") == (0, 1, 1, 0)
    assert parse_resolution([1, 0]) == (1, 0)


def test_edge_type_on_worked_example():
    d = torus_braid(BraidSpec(3, 2))
    e = edge_type(d, "1100", 3)
    assert e.kind is EdgeKind.SPLIT
    assert len(e.source) == 1 and len(e.target) == 2
    e = edge_type(d, "0000", 0)
    assert e.kind is EdgeKind.MERGE
    with pytest.raises(InputError):
        edge_type(d, "1100", 0)


def test_ladder_order_is_top_down():
    spec = BraidSpec(4, 3)
    assert ladder_crossings(spec) == (8, 7, 6)
    gens = torus_braid(spec).generators
    assert [gens[c] for c in ladder_crossings(spec)] == [2, 1, 0]


def test_ladder_diagrams_pin_expected_bits():
    spec = BraidSpec(3, 2)
    assert ladder_diagram(spec, 1, "E").fixed == (-1, -1, -1, 1)
    assert ladder_diagram(spec, 2, "E").fixed == (-1, -1, 1, 0)
    assert ladder_diagram(spec, 2, "D").fixed == (-1, -1, 0, 0)
    assert ladder_diagram(spec, 0, "D") == torus_braid(spec)
    for i, kind in [(0, "E"), (3, "E"), (3, "D"), (1, "X")]:
        with pytest.raises(InputError):
            ladder_diagram(spec, i, kind)


def test_last_rung_leaves_the_shorter_torus_word():
    for n in (2, 3, 4):
        for m in (1, 2, 3):
            d = ladder_diagram(BraidSpec(n, m + 1), n - 1, "D")
            assert d.residual_word() == torus_braid(BraidSpec(n, m)).residual_word()


def test_duplicate_pin_rejected():
    with pytest.raises(InputError):
        BraidDiagram(BraidSpec(3, 2), ((1, 0), (1, 1)))


diagrams = st.builds(
    lambda n, m: torus_braid(BraidSpec(n, m)),
    st.integers(2, 4), st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(diagrams, st.data())
def test_circle_count_matches_graph_components(d, data):
    bits = tuple(data.draw(st.lists(st.integers(0, 1), min_size=d.free_count,
                                    max_size=d.free_count)))
    ref = oracle.circles(d.n, list(d.generators), bits)
    assert smooth(d, bits).circle_count == len(ref)


@settings(max_examples=60, deadline=None)
@given(diagrams, st.data())
def test_every_cube_edge_changes_circle_count_by_one(d, data):
    if d.free_count == 0:
        return
    bits = list(data.draw(st.lists(st.integers(0, 1), min_size=d.free_count,
                                   max_size=d.free_count)))
    j = data.draw(st.integers(0, d.free_count - 1))
    bits[j] = 0
    before = smooth(d, bits).circle_count
    e = edge_type(d, bits, j)
    bits[j] = 1
    after = smooth(d, bits).circle_count
    assert abs(after - before) == 1
    assert (e.kind is EdgeKind.MERGE) == (after < before)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_bulk_labels_agree_with_pointwise_smoothing(n, m):
    d = torus_braid(BraidSpec(n, m))
    tab = cube_table(d)
    N = d.free_count
    for r in range(len(tab)):
        bits = tuple((r >> (N - 1 - j)) & 1 for j in range(N))
        s = smooth(d, bits)
        assert int(tab.counts[r]) == s.circle_count
        assert tuple(tab.labels[r]) == s.arc_to_circle


def test_bulk_labels_on_pinned_diagram():
    d = ladder_diagram(BraidSpec(3, 3), 2, "E")
    tab = cube_table(d)
    N = d.free_count
    for r in range(len(tab)):
        bits = tuple((r >> (N - 1 - j)) & 1 for j in range(N))
        assert tuple(tab.labels[r]) == smooth(d, bits).arc_to_circle


def test_cube_table_edges_match_edge_type():
    d = torus_braid(BraidSpec(3, 3))
    tab = cube_table(d)
    N = d.free_count
    for r in range(0, len(tab), 5):
        bits = tuple((r >> (N - 1 - j)) & 1 for j in range(N))
        for j in range(N):
            if not bits[j]:
                assert tab.edge(r, j) == edge_type(d, bits, j)


@pytest.mark.parametrize("n,m", [(2, 5), (3, 3), (4, 2)])
def test_numba_and_numpy_labelings_agree(n, m):
    d = ladder_diagram(BraidSpec(n, m), 1, "E")
    edges0, edges1 = _kernels.cube_edges(n, np.array(d.generators), np.array(d.fixed))
    args = (d.num_nodes, edges0, edges1, np.array(d.free, dtype=np.int64),
            np.array(d.fixed, dtype=np.int64))
    l1, c1 = _kernels._label_cube_numba(*args)
    l2, c2 = _kernels._label_cube_numpy(*args)
    assert np.array_equal(l1, l2) and np.array_equal(c1, c2)


def test_disable_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("KHTORUS_DISABLE_NUMBA", "1")
    assert not _kernels.numba_enabled()
    monkeypatch.setenv("KHTORUS_DISABLE_NUMBA", "0")
    assert _kernels.numba_enabled() == _kernels._HAVE_NUMBA
