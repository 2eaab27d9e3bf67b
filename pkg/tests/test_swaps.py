from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from masterlist.domain.errors import (
    NotAdmissibleError,
    SwapsUndefinedError,
    UnknownEdgeError,
    UnknownVertexError,
)
from masterlist.domain.preferences import DistanceValue, PreferenceSystem, Swap, WeakOrder
from masterlist.services.distances import delta_swap, in_master_list_family
from masterlist.services.generators import gen_jkn, gen_random
from masterlist.services.swaps import (
    apply_swap,
    apply_swaps,
    delete_edges,
    delete_vertices,
    instance_swap_distance,
    isolate,
    swap_distance_orders,
)


def _star(order):
    """Centre v ranks its leaves as given, best first; leaves only see v."""
    leaves = sorted({x for group in order for x in group})
    orders = {"v": order, **{x: [["v"]] for x in leaves}}
    return PreferenceSystem.from_named(["v", *leaves], orders)


def _weak_orders(size: int):
    return st.lists(st.integers(0, size - 1), min_size=size, max_size=size).map(
        lambda ranks: WeakOrder.from_groups(
            [[x for x in range(size) if ranks[x] == r] for r in sorted(set(ranks))]
        )
    )


def test_swap_distance_identical_orders_is_zero():
    order = WeakOrder.strict([0, 1, 2])
    assert swap_distance_orders(order, order) == DistanceValue.finite(0)


def test_swap_distance_full_reversal_flips_every_pair():
    reversal = swap_distance_orders(WeakOrder.strict([0, 1, 2]), WeakOrder.strict([2, 1, 0]))
    assert reversal.value == 3


def test_swap_distance_counts_pairs_that_become_tied():
    tied = WeakOrder.from_groups([[0, 1, 2]])
    assert swap_distance_orders(WeakOrder.strict([0, 1, 2]), tied).value == 3
    assert swap_distance_orders(tied, WeakOrder.strict([0, 1, 2])).value == 3


def test_swap_distance_is_infinite_across_ground_sets():
    d = swap_distance_orders(WeakOrder.strict([0, 1]), WeakOrder.strict([0, 2]))
    assert d.infinite
    assert d.to_json() == "inf"
    with pytest.raises(OverflowError):
        int(d)


@given(data=st.data(), size=st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_swap_distance_is_a_metric(data, size):
    x = data.draw(_weak_orders(size))
    y = data.draw(_weak_orders(size))
    z = data.draw(_weak_orders(size))
    dxy = swap_distance_orders(x, y).value
    assert (dxy == 0) == (x == y)
    assert dxy == swap_distance_orders(y, x).value
    assert dxy <= swap_distance_orders(x, z).value + swap_distance_orders(z, y).value


def test_instance_distance_to_itself_is_zero(i1):
    assert instance_swap_distance(i1, i1) == DistanceValue.finite(0)


def test_instance_distance_across_vertex_sets_is_infinite():
    left = PreferenceSystem.from_named(["a"], {})
    right = PreferenceSystem.from_named(["b"], {})
    assert instance_swap_distance(left, right).infinite


def test_instance_distance_to_swap_witness(i1):
    witness = delta_swap(i1, 2)
    assert witness is not None
    assert instance_swap_distance(i1, witness.witness_instance).value == 2


def test_instance_distance_matches_by_name_not_id():
    left = PreferenceSystem.from_named(["a", "b"], {"a": [["b"]], "b": [["a"]]})
    right = PreferenceSystem.from_named(["b", "a"], {"a": [["b"]], "b": [["a"]]})
    assert instance_swap_distance(left, right).value == 0


def test_apply_swap_exchanges_adjacent_pair():
    i = _star([["b"], ["a"]])
    a, b, v = i.index_of("a"), i.index_of("b"), i.index_of("v")
    out = apply_swap(i, Swap(a, b, v))
    assert out.order(v) == WeakOrder.strict([a, b])


def test_apply_swap_rejects_non_consecutive_pair():
    i = _star([["c"], ["b"], ["a"]])
    with pytest.raises(NotAdmissibleError):
        apply_swap(i, Swap(i.index_of("a"), i.index_of("c"), i.index_of("v")))


def test_apply_swap_moves_distance_by_one():
    i = _star([["c"], ["b"], ["a"]])
    a, b, c, v = (i.index_of(x) for x in "abcv")
    out = apply_swap(i, Swap(a, b, v))
    assert out.order(v) == WeakOrder.strict([c, a, b])
    assert instance_swap_distance(i, out).value == 1


def test_apply_swap_rejects_weak_orders():
    i = _star([["a", "b"]])
    with pytest.raises(NotAdmissibleError):
        apply_swap(i, Swap(i.index_of("a"), i.index_of("b"), i.index_of("v")))


def test_apply_swap_unknown_vertex():
    i = _star([["b"], ["a"]])
    with pytest.raises(UnknownVertexError):
        apply_swap(i, Swap(1, 9, 0))


def test_apply_swaps_empty_list_is_identity(i1):
    assert apply_swaps(i1, []) == i1


@pytest.mark.parametrize("reverse", [False, True])
def test_apply_swaps_finds_the_admissible_order(reverse):
    i = _star([["c"], ["b"], ["a"]])
    a, b, c, v = (i.index_of(x) for x in "abcv")
    swaps = [Swap(a, b, v), Swap(a, c, v)]
    if reverse:
        swaps.reverse()
    assert apply_swaps(i, swaps).order(v) == WeakOrder.strict([a, c, b])


def test_apply_swaps_opposite_swaps_cancel():
    i = _star([["b"], ["a"]])
    a, b, v = (i.index_of(x) for x in "abv")
    assert apply_swaps(i, [Swap(a, b, v), Swap(a, b, v)]) == i


def test_apply_swaps_reports_stuck_remainder():
    i = _star([["c"], ["b"], ["a"]])
    a, c, v = (i.index_of(x) for x in "acv")
    with pytest.raises(SwapsUndefinedError) as exc:
        apply_swaps(i, [Swap(a, c, v)])
    assert exc.value.remainder == [("a", "c", "v")]
    assert exc.value.to_dict()["remainder"] == [["a", "c", "v"]]


def test_delete_no_edges_is_identity(i1):
    assert delete_edges(i1, []) == i1


def test_delete_only_edge_leaves_isolated_vertices(single_edge):
    out = delete_edges(single_edge, [(0, 1)])
    assert out.edges == ()
    assert len(out.order(0)) == 0 and len(out.order(1)) == 0


def test_deleting_one_cycle_edge_reaches_master_list(i1):
    assert not in_master_list_family(i1)
    assert in_master_list_family(delete_edges(i1, [i1.edges[0]]))


def test_delete_unknown_edge(i1):
    with pytest.raises(UnknownEdgeError):
        delete_edges(i1, [(0, 2)])


def test_delete_no_vertices_is_identity(i1):
    assert delete_vertices(i1, []) == i1


def test_delete_vertex_of_triangle(ml_triangle):
    out = delete_vertices(ml_triangle, [ml_triangle.index_of("c")])
    assert out.names == ("a", "b")
    assert out.edges == ((0, 1),)


def test_deleting_s_vertices_of_jkn_reaches_master_list():
    j = gen_jkn(3, 5)
    out = delete_vertices(j, [j.index_of(f"s{r}") for r in (1, 2, 3)])
    assert in_master_list_family(out)


def test_delete_unknown_vertex(i1):
    with pytest.raises(UnknownVertexError):
        delete_vertices(i1, [17])


@given(seed=st.integers(0, 10_000), data=st.data())
@settings(max_examples=40, deadline=None)
def test_deletions_commute(seed, data):
    i = gen_random(6, 0.6, 0.3, seed)
    if not i.edges:
        return
    edges = data.draw(st.sets(st.sampled_from(i.edges), max_size=4))
    vertices = data.draw(st.sets(st.sampled_from(list(i.vertices)), max_size=2))
    first, second = sorted(edges)[::2], sorted(edges)[1::2]

    assert delete_edges(delete_edges(i, first), second) == delete_edges(i, edges)
    away = [e for e in edges if not set(e) & vertices]
    assert isolate(delete_edges(i, away), vertices) == delete_edges(isolate(i, vertices), away)
