from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from masterlist.domain.digraph import ArcKind, LabeledArc, MasterList, PreferenceDigraph
from masterlist.domain.preferences import Edge, PreferenceSystem, VertexId, WeakOrder

logger = logging.getLogger(__name__)


def build_digraph(i: PreferenceSystem) -> PreferenceDigraph:
    """
    Arc (a, b) with label v whenever v prefers b to a; a tied pair in both
    directions whenever v is indifferent between a and b. Arc ids follow
    label order, strict arcs of a label before its tied ones.
    """
    arcs: List[LabeledArc] = []
    for v in i.vertices:
        order = i.order(v)
        for worse, better in order.strict_pairs():
            arcs.append(LabeledArc(worse, better, v, ArcKind.STRICT))
        for a, b in order.tied_pairs():
            arcs.append(LabeledArc(a, b, v, ArcKind.TIED))
            arcs.append(LabeledArc(b, a, v, ArcKind.TIED))
    return PreferenceDigraph(i.n, tuple(arcs))


def shortest_cycle_through(
    d: PreferenceDigraph,
    relevant: Iterable[int],
    removed: Iterable[int] = (),
) -> Optional[Tuple[List[int], List[VertexId]]]:
    """
    Shortest cycle of d - removed that uses at least one arc from `relevant`.
    For every relevant arc (a, b) the shortest b -> a path closes a candidate;
    ties go to the smallest arc id. Returns (arc ids, nodes) starting at the
    relevant arc, or None.
    """
    skip = frozenset(removed)
    graph = d.to_networkx(skip)
    component: Dict[VertexId, int] = {}
    for idx, comp in enumerate(nx.strongly_connected_components(graph)):
        for x in comp:
            component[x] = idx

    by_head: Dict[VertexId, List[int]] = {}
    for e in sorted(set(relevant) - skip):
        arc = d.arcs[e]
        if component[arc.tail] == component[arc.head]:
            by_head.setdefault(arc.head, []).append(e)
    if not by_head:
        return None

    best: Optional[Tuple[int, int, List[VertexId]]] = None
    for head in sorted(by_head, key=lambda h: by_head[h][0]):
        if best is not None and best[0] == 2 and by_head[head][0] > best[1]:
            break
        paths = nx.single_source_shortest_path(graph, head)
        for e in by_head[head]:
            path = paths.get(d.arcs[e].tail)
            if path is None:
                continue
            if best is None or (len(path), e) < (best[0], best[1]):
                best = (len(path), e, path)
    if best is None:
        return None

    _, first, path = best
    nodes = [d.arcs[first].tail] + path
    arc_ids = [first]
    for x, y in zip(path, path[1:]):
        arc_ids.append(min(graph[x][y]))
    return arc_ids, nodes[:-1]


def find_strict_cycle(d: PreferenceDigraph) -> Optional[List[int]]:
    """Arc ids of a shortest cycle containing a strict arc, in traversal order."""
    found = shortest_cycle_through(d, d.strict_ids)
    return None if found is None else found[0]


def _tied_groups(d: PreferenceDigraph) -> List[FrozenSet[VertexId]]:
    tied = nx.DiGraph()
    tied.add_nodes_from(range(d.n))
    tied.add_edges_from((a.tail, a.head) for a in d.arcs if not a.is_strict)
    return [frozenset(c) for c in nx.strongly_connected_components(tied)]


def admits_master_list(i: PreferenceSystem) -> Optional[MasterList]:
    d = build_digraph(i)
    if find_strict_cycle(d) is not None:
        return None

    groups = _tied_groups(d)
    group_of = {x: g for g, members in enumerate(groups) for x in members}
    # contracted digraph runs from the better group to the worse one
    contracted = nx.DiGraph()
    contracted.add_nodes_from(range(len(groups)))
    for arc in d.arcs:
        if arc.is_strict:
            contracted.add_edge(group_of[arc.head], group_of[arc.tail])

    order = nx.lexicographical_topological_sort(contracted, key=lambda g: min(groups[g]))
    ml = MasterList(tuple(groups[g] for g in order))
    logger.debug("master list with %d groups for %d vertices", len(ml.groups), i.n)
    return ml


def restrict_master_list(ml: MasterList, neighbours: Iterable[VertexId]) -> WeakOrder:
    keep = frozenset(neighbours)
    return WeakOrder.from_groups(g & keep for g in ml.groups)


def is_consistent(i: PreferenceSystem, ml: MasterList) -> bool:
    if not ml.covers(i.n):
        return False
    return all(restrict_master_list(ml, i.neighbors(v)) == i.order(v) for v in i.vertices)


def derive_instance(
    names: Sequence[str], edges: Iterable[Edge], ml: MasterList
) -> PreferenceSystem:
    """Instance on the given graph whose every order is the restriction of ml."""
    neighbours: Dict[VertexId, Set[VertexId]] = {v: set() for v in range(len(names))}
    for u, v in edges:
        neighbours[u].add(v)
        neighbours[v].add(u)
    prefs = tuple(restrict_master_list(ml, neighbours[v]) for v in range(len(names)))
    return PreferenceSystem(tuple(names), prefs)


def _strict_reach(graph: nx.MultiDiGraph) -> Dict[VertexId, Set[VertexId]]:
    """For every vertex, the vertices it reaches by a path using a strict arc."""
    reach: Dict[VertexId, Set[VertexId]] = {}
    closure = {x: {x} | nx.descendants(graph, x) for x in graph.nodes}
    strict = [(x, y) for x, y, data in graph.edges(data=True) if data["strict"]]
    for a in graph.nodes:
        out: Set[VertexId] = set()
        for x, y in strict:
            if x in closure[a]:
                out |= closure[y]
        reach[a] = out
    return reach


def strict_path_master_list(i: PreferenceSystem, removed: Iterable[int] = ()) -> MasterList:
    """
    Master list read off D_I - removed, which must contain no strict cycle.
    Pairs with no strict path either way are tied one at a time (id order)
    until every pair is comparable; then a is below b iff a strict path
    runs from a to b.
    """
    d = build_digraph(i)
    graph = d.to_networkx(removed)

    linked: Set[Tuple[VertexId, VertexId]] = set()
    for a, b in graph.edges():
        if graph.has_edge(b, a):
            kinds_ab = {data["strict"] for data in graph[a][b].values()}
            kinds_ba = {data["strict"] for data in graph[b][a].values()}
            if False in kinds_ab and False in kinds_ba:
                linked.add((min(a, b), max(a, b)))

    reach = _strict_reach(graph)
    changed = True
    while changed:
        changed = False
        for a, b in combinations(range(i.n), 2):
            if (a, b) in linked or b in reach[a] or a in reach[b]:
                continue
            graph.add_edge(a, b, strict=False)
            graph.add_edge(b, a, strict=False)
            linked.add((a, b))
            reach = _strict_reach(graph)
            changed = True

    below_count = {v: sum(1 for x in i.vertices if v in reach[x]) for v in i.vertices}
    levels = sorted(set(below_count.values()), reverse=True)
    return MasterList(
        tuple(frozenset(v for v in i.vertices if below_count[v] == lvl) for lvl in levels)
    )
