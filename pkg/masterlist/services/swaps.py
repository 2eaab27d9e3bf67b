from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, Iterable, List, Sequence

from masterlist.domain.errors import (
    NotAdmissibleError,
    SwapsUndefinedError,
    UnknownEdgeError,
    UnknownVertexError,
)
from masterlist.domain.preferences import (
    DistanceValue,
    Edge,
    PreferenceSystem,
    Swap,
    VertexId,
    WeakOrder,
    make_edge,
)

logger = logging.getLogger(__name__)


def swap_distance_orders(u_order: WeakOrder, v_order: WeakOrder) -> DistanceValue:
    """
    Number of pairs ordered one way by u_order but not by v_order, plus pairs tied
    in u_order only. Infinity when the orders rank different ground sets.
    """
    if u_order.members != v_order.members:
        return DistanceValue.infinity()

    ru, rv = u_order.rank, v_order.rank
    count = 0
    for a, b in combinations(sorted(u_order.members), 2):
        if ru[a] == ru[b]:
            if rv[a] != rv[b]:
                count += 1
        elif (ru[a] < ru[b]) != (rv[a] < rv[b]) or rv[a] == rv[b]:
            count += 1
    return DistanceValue.finite(count)


def instance_swap_distance(i1: PreferenceSystem, i2: PreferenceSystem) -> DistanceValue:
    if set(i1.names) != set(i2.names):
        return DistanceValue.infinity()

    total = DistanceValue.finite(0)
    for v, name in enumerate(i1.names):
        w = i2.index_of(name)
        # compare by names, the two systems may number vertices differently
        left = _named_order(i1, i1.order(v))
        right = _named_order(i2, i2.order(w))
        total = total + _named_distance(left, right)
        if total.infinite:
            break
    return total


def _named_order(i: PreferenceSystem, order: WeakOrder) -> List[frozenset]:
    return [frozenset(i.names[x] for x in g) for g in order.groups]


def _named_distance(left: List[frozenset], right: List[frozenset]) -> DistanceValue:
    universe = sorted({x for g in left for x in g} | {x for g in right for x in g})
    ids = {name: k for k, name in enumerate(universe)}
    return swap_distance_orders(
        WeakOrder.from_groups([ids[x] for x in g] for g in left),
        WeakOrder.from_groups([ids[x] for x in g] for g in right),
    )


def _check_vertex(i: PreferenceSystem, v: VertexId) -> None:
    if not 0 <= v < i.n:
        raise UnknownVertexError(
            title="Unknown vertex",
            detail=f"Вершина с id {v} отсутствует в экземпляре.",
            vertex=str(v),
        )


def is_admissible(i: PreferenceSystem, s: Swap) -> bool:
    order = i.order(s.v)
    if not order.is_strict or s.a == s.b:
        return False
    if s.a not in order or s.b not in order:
        return False
    return abs(order.rank[s.a] - order.rank[s.b]) == 1


def apply_swap(i: PreferenceSystem, s: Swap) -> PreferenceSystem:
    for x in (s.a, s.b, s.v):
        _check_vertex(i, x)
    if not is_admissible(i, s):
        raise NotAdmissibleError(
            title="Swap not admissible",
            detail=(
                f"Обмен ({i.name_of(s.a)}, {i.name_of(s.b)}; {i.name_of(s.v)}) недопустим: "
                "элементы должны стоять рядом в строгом порядке."
            ),
        )

    items = i.order(s.v).as_list()
    pa, pb = items.index(s.a), items.index(s.b)
    items[pa], items[pb] = items[pb], items[pa]
    prefs = list(i.prefs)
    prefs[s.v] = WeakOrder.strict(items)
    return i.with_orders(prefs)


def apply_swaps(i: PreferenceSystem, swaps: Sequence[Swap]) -> PreferenceSystem:
    """
    Greedy scan: apply the first remaining swap that is admissible right now, and
    restart. Fails once a full pass over the remainder makes no progress.
    """
    current = i
    remaining = list(swaps)
    for s in remaining:
        for x in (s.a, s.b, s.v):
            _check_vertex(i, x)

    while remaining:
        for idx, s in enumerate(remaining):
            if is_admissible(current, s):
                current = apply_swap(current, s)
                del remaining[idx]
                break
        else:
            stuck = [(i.name_of(s.a), i.name_of(s.b), i.name_of(s.v)) for s in remaining]
            raise SwapsUndefinedError(
                title="Swaps undefined",
                detail=f"Не удалось применить {len(stuck)} обмен(ов) ни в каком порядке.",
                remainder=stuck,
            )
    return current


def _restrict_all(i: PreferenceSystem, dropped: Dict[VertexId, set]) -> List[WeakOrder]:
    prefs = list(i.prefs)
    for v, gone in dropped.items():
        prefs[v] = prefs[v].restrict(prefs[v].members - gone)
    return prefs


def delete_edges(i: PreferenceSystem, edges: Iterable[Edge]) -> PreferenceSystem:
    dropped: Dict[VertexId, set] = {}
    for u, v in edges:
        if not (0 <= u < i.n and 0 <= v < i.n) or not i.has_edge(u, v):
            names = tuple(i.names[x] if 0 <= x < i.n else str(x) for x in (u, v))
            raise UnknownEdgeError(
                title="Unknown edge",
                detail=f"Ребро {names[0]} -- {names[1]} отсутствует в экземпляре.",
                edge=(names[0], names[1]),
            )
        dropped.setdefault(u, set()).add(v)
        dropped.setdefault(v, set()).add(u)
    if not dropped:
        return i
    return i.with_orders(_restrict_all(i, dropped))


def isolate(i: PreferenceSystem, vertices: Iterable[VertexId]) -> PreferenceSystem:
    """Deletes every edge at the given vertices; ids stay as they are."""
    gone = set(vertices)
    for v in gone:
        _check_vertex(i, v)
    incident = [make_edge(v, u) for v in sorted(gone) for u in i.neighbors(v)]
    return delete_edges(i, set(incident))


def delete_vertices(i: PreferenceSystem, vertices: Iterable[VertexId]) -> PreferenceSystem:
    gone = set(vertices)
    for v in gone:
        _check_vertex(i, v)
    if not gone:
        return i

    kept = [v for v in i.vertices if v not in gone]
    renumber = {old: new for new, old in enumerate(kept)}
    prefs = []
    for v in kept:
        order = i.order(v)
        prefs.append(
            WeakOrder.from_groups([renumber[x] for x in g if x in renumber] for g in order.groups)
        )
    return PreferenceSystem(tuple(i.names[v] for v in kept), tuple(prefs))
