from __future__ import annotations

import logging
from collections import deque
from itertools import combinations
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from masterlist.domain.digraph import MasterList, PreferenceDigraph
from masterlist.domain.errors import TooLargeError
from masterlist.domain.matching import Matching
from masterlist.domain.preferences import Edge, PreferenceSystem, Swap, VertexId
from masterlist.domain.results import HittingSetInstance, MupmicInstance, MupmicResult, RawDigraph
from masterlist.services.popular import is_popular, validate_mupmic
from masterlist.services.prefdigraph import build_digraph, find_strict_cycle, is_consistent
from masterlist.services.stable import all_matchings, blocking_edges, require_strict
from masterlist.services.swaps import apply_swap, delete_edges, isolate
from masterlist.settings import Settings, load_settings

logger = logging.getLogger(__name__)


def _ordered_partitions(items: Sequence[VertexId]) -> Iterator[List[FrozenSet[VertexId]]]:
    """Every weak order over items, as a list of groups, best first."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for tail in _ordered_partitions(rest):
        for pos in range(len(tail)):
            yield tail[:pos] + [tail[pos] | {first}] + tail[pos + 1 :]
        for pos in range(len(tail) + 1):
            yield tail[:pos] + [frozenset([first])] + tail[pos:]


def brute_force_master_list(
    i: PreferenceSystem, settings: Optional[Settings] = None
) -> Optional[MasterList]:
    settings = settings or load_settings()
    if i.n > settings.weak_order_oracle_vertex_cap:
        raise TooLargeError(
            title="Instance too large",
            detail="Слишком много вершин для перебора всех слабых порядков.",
            size=i.n,
            cap=settings.weak_order_oracle_vertex_cap,
        )
    for groups in _ordered_partitions(list(i.vertices)):
        ml = MasterList(tuple(groups))
        if is_consistent(i, ml):
            return ml
    return None


def _acyclic_without(graph: nx.MultiDiGraph, arcs: Sequence[Tuple[int, int, int]]) -> bool:
    trimmed = graph.copy()
    trimmed.remove_edges_from(arcs)
    return nx.is_directed_acyclic_graph(trimmed)


def brute_force_fas(d: RawDigraph) -> Tuple[int, ...]:
    """Lexicographically first minimum feedback arc set over all arc subsets."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(len(d.names)))
    keyed = [(tail, head, k) for k, (tail, head) in enumerate(d.arcs)]
    for tail, head, k in keyed:
        graph.add_edge(tail, head, key=k)
    for size in range(len(keyed) + 1):
        for subset in combinations(keyed, size):
            if _acyclic_without(graph, subset):
                return tuple(k for _, _, k in subset)
    raise AssertionError("removing every arc always leaves an acyclic graph")


def brute_force_strict_hitting(d: PreferenceDigraph) -> Tuple[int, ...]:
    for size in range(len(d.arcs) + 1):
        for subset in combinations(d.arc_ids, size):
            if find_strict_cycle(d.without(subset)) is None:
                return subset
    raise AssertionError("removing every arc leaves no strict cycle")


def brute_force_digraph_fas(d: PreferenceDigraph) -> Tuple[int, ...]:
    raw = RawDigraph(tuple(str(v) for v in range(d.n)), tuple((a.tail, a.head) for a in d.arcs))
    return brute_force_fas(raw)


def brute_force_hitting_set(h: HittingSetInstance) -> FrozenSet[int]:
    universe = range(len(h.universe))
    for size in range(len(h.universe) + 1):
        for pick in combinations(universe, size):
            chosen = set(pick)
            if all(chosen & set(members) for members in h.sets):
                return frozenset(pick)
    raise AssertionError("the whole universe hits every non-empty set")


def in_family_by_search(i: PreferenceSystem, settings: Optional[Settings] = None) -> bool:
    return brute_force_master_list(i, settings) is not None


def brute_force_edge_distance(
    i: PreferenceSystem, settings: Optional[Settings] = None
) -> FrozenSet[Edge]:
    for size in range(len(i.edges) + 1):
        for subset in combinations(i.edges, size):
            if in_family_by_search(delete_edges(i, subset), settings):
                return frozenset(subset)
    raise AssertionError("the edgeless instance always has a master list")


def brute_force_vertex_distance(
    i: PreferenceSystem, settings: Optional[Settings] = None
) -> FrozenSet[VertexId]:
    for size in range(i.n + 1):
        for subset in combinations(i.vertices, size):
            if in_family_by_search(isolate(i, subset), settings):
                return frozenset(subset)
    raise AssertionError("the edgeless instance always has a master list")


def _admissible_swaps(i: PreferenceSystem) -> Iterator[Swap]:
    for v in i.vertices:
        items = i.order(v).as_list()
        for a, b in zip(items, items[1:]):
            yield Swap(b, a, v)


def brute_force_swap_distance(
    i: PreferenceSystem, settings: Optional[Settings] = None
) -> Optional[int]:
    """
    Fewest admissible swaps reaching a master-list instance, by breadth-first
    search up to the configured depth; None if deeper.
    """
    settings = settings or load_settings()
    require_strict(i)
    seen = {i}
    frontier = deque([(i, 0)])
    while frontier:
        current, depth = frontier.popleft()
        if find_strict_cycle(build_digraph(current)) is None:
            return depth
        if depth == settings.swap_oracle_depth:
            continue
        for s in _admissible_swaps(current):
            nxt = apply_swap(current, s)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, depth + 1))
    logger.debug("no master-list instance within %d swaps", settings.swap_oracle_depth)
    return None


def brute_force_mupmic(
    inst: MupmicInstance, settings: Optional[Settings] = None
) -> Optional[MupmicResult]:
    """Best answer over every matching of the instance, popularity checked exhaustively."""
    settings = settings or load_settings()
    validate_mupmic(inst)
    i = inst.system
    best: Optional[MupmicResult] = None
    for m in all_matchings(i, settings):
        utility = sum(inst.utility[e] for e in m.edges)
        if utility < inst.target:
            continue
        blocking = blocking_edges(i, m)
        cost = sum(inst.cost[e] for e in blocking)
        if cost > inst.budget or not is_popular(i, m, settings, mode="exhaustive"):
            continue
        found = MupmicResult(m, utility, cost, blocking)
        if best is None or _key(found) < _key(best):
            best = found
    return best


def _key(result: MupmicResult) -> Tuple[int, int, Tuple[Edge, ...]]:
    return -result.utility, result.cost, result.matching.key


def popular_matchings(i: PreferenceSystem, settings: Optional[Settings] = None) -> List[Matching]:
    return [m for m in all_matchings(i, settings) if is_popular(i, m, settings, mode="exhaustive")]
