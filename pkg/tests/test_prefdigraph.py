from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from masterlist.domain.digraph import ArcKind, MasterList
from masterlist.domain.preferences import PreferenceSystem
from masterlist.domain.results import RawDigraph
from masterlist.services.fas import is_acyclic
from masterlist.services.generators import gen_random, reduce_fas_to_ml
from masterlist.services.prefdigraph import (
    admits_master_list,
    build_digraph,
    derive_instance,
    find_strict_cycle,
    is_consistent,
    strict_path_master_list,
)


def _named_arcs(i, d):
    return {(i.names[a.tail], i.names[a.head], i.names[a.label], a.kind) for a in d.arcs}


def _tie_star():
    return PreferenceSystem.from_named(
        ["v", "a", "b"], {"v": [["a", "b"]], "a": [["v"]], "b": [["v"]]}
    )


def _random_master_list(rng: random.Random, n: int) -> MasterList:
    order = list(range(n))
    rng.shuffle(order)
    groups = []
    for x in order:
        if groups and rng.random() < 0.3:
            groups[-1].append(x)
        else:
            groups.append([x])
    return MasterList(tuple(frozenset(g) for g in groups))


def test_single_edge_has_no_arcs(single_edge):
    assert build_digraph(single_edge).arcs == ()


def test_four_cycle_arcs(i1):
    d = build_digraph(i1)
    assert _named_arcs(i1, d) == {
        ("4", "2", "1", ArcKind.STRICT),
        ("1", "3", "2", ArcKind.STRICT),
        ("2", "4", "3", ArcKind.STRICT),
        ("3", "1", "4", ArcKind.STRICT),
    }


def test_tie_gives_arc_pair():
    i = _tie_star()
    assert _named_arcs(i, build_digraph(i)) == {
        ("a", "b", "v", ArcKind.TIED),
        ("b", "a", "v", ArcKind.TIED),
    }


@given(seed=st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_arc_count_matches_preferences(seed):
    i = gen_random(6, 0.6, 0.4, seed)
    expected = sum(
        len(list(i.order(v).strict_pairs())) + 2 * len(list(i.order(v).tied_pairs()))
        for v in i.vertices
    )
    d = build_digraph(i)
    assert len(d.arcs) == expected
    for arc in d.arcs:
        assert arc.label not in (arc.tail, arc.head) and arc.tail != arc.head


def test_no_strict_cycle_in_acyclic_digraph(ml_triangle):
    assert find_strict_cycle(build_digraph(ml_triangle)) is None


def test_four_cycle_has_strict_two_cycle(i1):
    d = build_digraph(i1)
    cycle = find_strict_cycle(d)
    assert cycle is not None and len(cycle) == 2
    first, second = (d.arcs[e] for e in cycle)
    assert first.head == second.tail and second.head == first.tail
    assert {i1.names[first.tail], i1.names[first.head]} in ({"1", "3"}, {"2", "4"})


def test_strict_cycle_tie_goes_to_smallest_arc(i1):
    d = build_digraph(i1)
    # arc 0 is 4 -> 2 (label 1); the 2-cycle it closes wins over 1 -> 3 -> 1
    assert find_strict_cycle(d) == [0, 2]
    assert [(i1.names[d.arcs[e].tail], i1.names[d.arcs[e].head]) for e in [0, 2]] == [
        ("4", "2"),
        ("2", "4"),
    ]


def test_only_tied_arcs_give_no_strict_cycle():
    assert find_strict_cycle(build_digraph(_tie_star())) is None


def test_four_cycle_has_no_master_list(i1):
    assert admits_master_list(i1) is None


def test_triangle_master_list(ml_triangle):
    ml = admits_master_list(ml_triangle)
    assert ml == MasterList.strict([0, 1, 2])
    assert is_consistent(ml_triangle, ml)


def test_ties_collapse_into_one_group():
    i = _tie_star()
    ml = admits_master_list(i)
    assert ml is not None
    assert ml.groups == (frozenset({0}), frozenset({1, 2}))
    assert is_consistent(i, ml)


def test_acyclic_digraph_reduction_has_master_list():
    d = RawDigraph(("a", "b", "c"), ((0, 1), (1, 2), (0, 2)))
    i = reduce_fas_to_ml(d)
    ml = admits_master_list(i)
    assert ml is not None and is_consistent(i, ml)


def test_edgeless_instance_is_consistent_with_any_list():
    i = PreferenceSystem.from_named(["a", "b", "c"], {})
    assert is_consistent(i, MasterList.strict([2, 0, 1]))
    assert is_consistent(i, MasterList((frozenset({0, 1, 2}),)))


def test_four_cycle_consistent_with_no_list(i1):
    for ml in (MasterList.strict([0, 1, 2, 3]), MasterList.strict([3, 2, 1, 0])):
        assert not is_consistent(i1, ml)


def test_list_must_cover_every_vertex(ml_triangle):
    assert not is_consistent(ml_triangle, MasterList.strict([0, 1]))


@given(seed=st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_derived_instances_round_trip(seed):
    rng = random.Random(seed)
    n = rng.randint(0, 7)
    ml = _random_master_list(rng, n)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
    i = derive_instance([f"v{x}" for x in range(n)], edges, ml)
    assert is_consistent(i, ml)
    found = admits_master_list(i)
    assert found is not None and is_consistent(i, found)
    assert is_consistent(i, strict_path_master_list(i))


@given(seed=st.integers(0, 10_000), tie_prob=st.sampled_from([0.0, 0.3]))
@settings(max_examples=80, deadline=None)
def test_strict_cycle_iff_no_master_list(seed, tie_prob):
    i = gen_random(6, 0.5, tie_prob, seed)
    d = build_digraph(i)
    ml = admits_master_list(i)
    assert (find_strict_cycle(d) is None) == (ml is not None)
    if ml is not None:
        assert is_consistent(i, ml)
    if i.is_strict:
        assert (ml is not None) == is_acyclic(d)
