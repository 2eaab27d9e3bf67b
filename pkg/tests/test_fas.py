from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from masterlist.domain.digraph import ArcKind, LabeledArc, PreferenceDigraph
from masterlist.services.fas import is_acyclic, min_fas, min_strict_hitting
from masterlist.services.oracles import brute_force_digraph_fas, brute_force_strict_hitting
from masterlist.services.prefdigraph import build_digraph, find_strict_cycle

STRICT, TIED = ArcKind.STRICT, ArcKind.TIED


def _digraph(n, arcs):
    out = []
    for tail, head, kind in arcs:
        label = next(x for x in range(n + 2) if x not in (tail, head))
        out.append(LabeledArc(tail, head, label, kind))
    return PreferenceDigraph(n + 2, tuple(out))


def _random_digraph(seed: int, n: int = 4, max_arcs: int = 8, tie_prob: float = 0.0):
    rng = random.Random(seed)
    arcs = []
    for _ in range(rng.randint(0, max_arcs)):
        tail, head = rng.sample(range(n), 2)
        arcs.append((tail, head, TIED if rng.random() < tie_prob else STRICT))
    return _digraph(n, arcs)


def test_acyclic_needs_nothing():
    d = _digraph(3, [(0, 1, STRICT), (1, 2, STRICT), (0, 2, STRICT)])
    assert min_fas(d, 0) == ()


def test_two_cycle_takes_first_arc():
    d = _digraph(2, [(0, 1, STRICT), (1, 0, STRICT)])
    assert min_fas(d, 1) == (0,)
    assert min_fas(d, 0) is None


def test_bidirected_triangle_needs_three():
    pairs = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]
    d = _digraph(3, [(a, b, STRICT) for a, b in pairs])
    assert min_fas(d, 2) is None
    found = min_fas(d, 3)
    assert found is not None and len(found) == 3
    assert is_acyclic(d, found)


def test_allowed_restricts_deletions():
    d = _digraph(2, [(0, 1, STRICT), (1, 0, STRICT)])
    assert min_fas(d, 1, allowed=[1]) == (1,)
    assert min_fas(d, 5, allowed=[]) is None


def test_negative_budget():
    d = _digraph(2, [])
    assert min_fas(d, -1) is None
    assert min_strict_hitting(d, -1) is None


def test_no_strict_cycle_needs_nothing():
    d = _digraph(2, [(0, 1, TIED), (1, 0, TIED)])
    assert min_strict_hitting(d, 0) == ()


def test_all_strict_hitting_equals_fas():
    pairs = [(0, 1), (1, 2), (2, 0), (2, 1)]
    d = _digraph(3, [(a, b, STRICT) for a, b in pairs])
    assert len(min_strict_hitting(d, 4)) == len(min_fas(d, 4)) == 1


def test_mixed_two_cycle_needs_one_arc():
    d = _digraph(2, [(0, 1, STRICT), (1, 0, TIED)])
    found = min_strict_hitting(d, 1)
    assert found is not None and len(found) == 1
    assert find_strict_cycle(d.without(found)) is None


def test_is_acyclic_basics(i1):
    assert is_acyclic(_digraph(3, []))
    assert not is_acyclic(_digraph(2, [(0, 1, STRICT), (1, 0, STRICT)]))
    assert not is_acyclic(build_digraph(i1))


def test_parallel_arcs_count_separately():
    d = _digraph(2, [(0, 1, STRICT), (0, 1, STRICT), (1, 0, STRICT)])
    assert min_fas(d, 3) == (2,)


@given(seed=st.integers(0, 100_000))
@settings(max_examples=120, deadline=None)
def test_min_fas_matches_brute_force(seed):
    d = _random_digraph(seed)
    found = min_fas(d, len(d.arcs))
    assert found == brute_force_digraph_fas(d)
    assert is_acyclic(d, found)


@given(seed=st.integers(0, 100_000))
@settings(max_examples=120, deadline=None)
def test_min_strict_hitting_matches_brute_force(seed):
    d = _random_digraph(seed, tie_prob=0.4)
    found = min_strict_hitting(d, len(d.arcs))
    assert found is not None
    assert len(found) == len(brute_force_strict_hitting(d))
    assert find_strict_cycle(d.without(found)) is None
    assert len(found) <= len(min_fas(d, len(d.arcs)))
