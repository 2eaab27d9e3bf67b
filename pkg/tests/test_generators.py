from __future__ import annotations

from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from masterlist.domain.errors import InvalidParamsError
from masterlist.domain.results import HittingSetInstance, RawDigraph
from masterlist.services.distances import delta_edge_exact, delta_vert_exact, in_master_list_family
from masterlist.services.generators import (
    fas_from_edge_solution,
    gen_four_cycles,
    gen_jkn,
    gen_random,
    gen_random_digraph,
    gen_random_hitting_set,
    hitting_set_from_vertex_solution,
    raw_digraph_from_names,
    reduce_fas_to_ml,
    reduce_hitting_set_to_mlvd,
)
from masterlist.services.oracles import brute_force_fas, brute_force_hitting_set
from masterlist.services.stable import brute_force_stable, enum_stable


def _acyclic_after(d: RawDigraph, removed) -> bool:
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(len(d.names)))
    graph.add_edges_from(arc for k, arc in enumerate(d.arcs) if k not in set(removed))
    return nx.is_directed_acyclic_graph(graph)


def test_zero_four_cycles_is_empty():
    i = gen_four_cycles(0)
    assert i.n == 0 and i.edges == ()


def test_four_cycles_shape():
    i = gen_four_cycles(2)
    assert i.n == 8 and len(i.edges) == 8 and i.is_strict
    assert i.order(i.index_of("1")).as_list() == [i.index_of("2"), i.index_of("4")]


@pytest.mark.parametrize("call", [lambda: gen_four_cycles(-1), lambda: gen_jkn(3, 2)])
def test_generators_reject_bad_sizes(call):
    with pytest.raises(InvalidParamsError):
        call()


def test_jkn_needs_positive_k():
    with pytest.raises(InvalidParamsError):
        gen_jkn(0, 3)


def test_jkn_layout():
    j = gen_jkn(3, 5)
    assert j.names == ("a1", "a2", "a3", "a4", "a5", "s1", "s2", "s3", "b1", "b2")
    a3 = j.index_of("a3")
    assert [j.name_of(x) for x in j.order(a3).as_list()] == ["s1", "b2", "s2", "b1", "s3"]
    b1 = j.index_of("b1")
    assert [j.name_of(x) for x in j.order(b1).as_list()] == ["a4", "a3", "a2", "a1"]


@pytest.mark.parametrize("k, n", [(1, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5)])
def test_jkn_stable_count(k, n):
    j = gen_jkn(k, n)
    found = enum_stable(j)
    assert len(found) == comb(n, k)
    assert found == brute_force_stable(j)


def test_fas_reduction_of_two_cycle():
    d = raw_digraph_from_names(["a", "b"], [("a", "b"), ("b", "a")])
    i = reduce_fas_to_ml(d)
    assert i.names == ("a", "b", "z_a_b", "z_b_a")
    assert not in_master_list_family(i)
    witness = delta_edge_exact(i, 1)
    assert witness.value == 1
    assert len(fas_from_edge_solution(d, witness.edges)) == 1


def test_fas_reduction_names_parallel_arcs():
    d = raw_digraph_from_names(["a", "b"], [("a", "b"), ("a", "b")])
    assert reduce_fas_to_ml(d).names[2:] == ("z_a_b", "z_a_b_2")


def test_fas_reduction_rejects_loops():
    with pytest.raises(InvalidParamsError):
        reduce_fas_to_ml(RawDigraph(("a",), ((0, 0),)))


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_fas_reduction_preserves_value(seed):
    d = gen_random_digraph(4, 5, seed)
    expected = len(brute_force_fas(d))
    witness = delta_edge_exact(reduce_fas_to_ml(d), len(d.arcs))
    assert witness.value == expected
    fas = fas_from_edge_solution(d, witness.edges)
    assert len(fas) <= expected and _acyclic_after(d, fas)


def test_hitting_set_single_element():
    h = HittingSetInstance(("u",), ((0,),))
    i = reduce_hitting_set_to_mlvd(h)
    assert i.names == ("x_1_1", "x_1_2", "u", "d_1")
    witness = delta_vert_exact(i, i.n)
    assert witness.value == 1
    assert hitting_set_from_vertex_solution(h, witness.vertices) == frozenset({0})


def test_hitting_set_empty_family():
    h = HittingSetInstance(("u1", "u2"), ())
    i = reduce_hitting_set_to_mlvd(h)
    assert i.edges == ()
    assert delta_vert_exact(i, 0).value == 0


def test_hitting_set_shared_element():
    h = HittingSetInstance(("u1", "u2", "u3"), ((0, 1), (1, 2)))
    i = reduce_hitting_set_to_mlvd(h)
    witness = delta_vert_exact(i, i.n)
    assert witness.value == 1
    assert hitting_set_from_vertex_solution(h, witness.vertices) == frozenset({1})


def test_hitting_set_rejects_empty_member():
    with pytest.raises(InvalidParamsError):
        reduce_hitting_set_to_mlvd(HittingSetInstance(("u",), ((),)))


@given(seed=st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_hitting_set_reduction_preserves_value(seed):
    h = gen_random_hitting_set(3, 2, seed, max_set_size=2)
    i = reduce_hitting_set_to_mlvd(h)
    witness = delta_vert_exact(i, i.n)
    assert witness.value == len(brute_force_hitting_set(h))
    hit = hitting_set_from_vertex_solution(h, witness.vertices)
    assert all(hit & set(members) for members in h.sets)


def test_gen_random_is_deterministic():
    assert gen_random(7, 0.5, 0.3, 11) == gen_random(7, 0.5, 0.3, 11)


def test_gen_random_extremes():
    assert gen_random(5, 0.0, 0.5, 1).edges == ()
    full = gen_random(5, 1.0, 0.0, 1)
    assert len(full.edges) == 10 and full.is_strict


def test_gen_random_rejects_bad_probability():
    with pytest.raises(InvalidParamsError):
        gen_random(4, 1.5, 0.0, 0)
    with pytest.raises(InvalidParamsError):
        gen_random(4, 0.5, -0.1, 0)


def test_random_digraph_has_no_loops():
    d = gen_random_digraph(5, 20, 3)
    assert len(d.arcs) == 20 and all(tail != head for tail, head in d.arcs)
    assert d == gen_random_digraph(5, 20, 3)


def test_random_digraph_needs_two_vertices():
    with pytest.raises(InvalidParamsError):
        gen_random_digraph(1, 1, 0)


def test_random_hitting_set_shape():
    h = gen_random_hitting_set(5, 6, 2, max_set_size=3)
    assert len(h.sets) == 6
    assert all(1 <= len(s) <= 3 and list(s) == sorted(s) for s in h.sets)
