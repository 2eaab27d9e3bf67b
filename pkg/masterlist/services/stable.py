from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from masterlist.domain.digraph import MasterList
from masterlist.domain.errors import (
    ModulatorInvalidError,
    NotConsistentError,
    NotStrictError,
    TooLargeError,
    UnknownEdgeError,
)
from masterlist.domain.matching import BlockingSet, Matching
from masterlist.domain.preferences import Edge, PreferenceSystem, VertexId, make_edge
from masterlist.domain.results import EdgeWitness, VertexWitness
from masterlist.services.distances import delta_edge_2approx, delta_vert_exact
from masterlist.services.parallel import ordered_map
from masterlist.services.prefdigraph import admits_master_list, is_consistent
from masterlist.services.swaps import delete_edges, isolate
from masterlist.settings import Settings, load_settings

logger = logging.getLogger(__name__)

Objective = Callable[[Matching], int]


def require_strict(i: PreferenceSystem) -> None:
    if not i.is_strict:
        raise NotStrictError(
            title="Strict preferences required",
            detail="Операция определена только для строгих предпочтений (без равенств).",
        )


def validate_matching(i: PreferenceSystem, m: Matching) -> None:
    for e in m.edges:
        if e not in i.edge_set:
            a, b = (i.names[x] if 0 <= x < i.n else str(x) for x in e)
            raise UnknownEdgeError(
                title="Unknown edge",
                detail=f"Ребро паросочетания {a} -- {b} отсутствует в экземпляре.",
                edge=(a, b),
            )


def _wants(i: PreferenceSystem, m: Matching, x: VertexId, y: VertexId) -> bool:
    partner = m.partner(x)
    return partner is None or i.order(x).prefers(y, partner)


def blocking_edges(i: PreferenceSystem, m: Matching) -> BlockingSet:
    return frozenset(
        (u, v)
        for u, v in i.edges
        if (u, v) not in m.edges and _wants(i, m, u, v) and _wants(i, m, v, u)
    )


def _greedy_by_master_list(i: PreferenceSystem, ml: MasterList) -> Matching:
    taken: Set[VertexId] = set()
    pairs: List[Edge] = []
    for x in ml.as_list():
        if x in taken:
            continue
        for y in i.order(x).as_list():
            if y not in taken:
                taken.update((x, y))
                pairs.append(make_edge(x, y))
                break
    return Matching(frozenset(pairs))


def unique_stable_ml(i: PreferenceSystem, ml: MasterList) -> Matching:
    """
    The only stable matching of a strict master-list instance: walk the list
    from the top, each free vertex takes its favourite free neighbour.
    """
    require_strict(i)
    if not ml.is_strict or not is_consistent(i, ml):
        raise NotConsistentError(
            title="Master list not consistent",
            detail="Предпочтения вершин не являются ограничением данного мастер-списка.",
        )
    return _greedy_by_master_list(i, ml)


def iter_matchings(edges: Sequence[Edge]) -> Iterator[Matching]:
    """Every matching over `edges`, the empty one included."""
    ordered = sorted(edges)

    def extend(start: int, used: Set[VertexId], picked: List[Edge]) -> Iterator[Matching]:
        yield Matching(frozenset(picked))
        for k in range(start, len(ordered)):
            u, v = ordered[k]
            if u in used or v in used:
                continue
            used.update((u, v))
            picked.append((u, v))
            yield from extend(k + 1, used, picked)
            picked.pop()
            used.difference_update((u, v))

    yield from extend(0, set(), [])


def all_matchings(i: PreferenceSystem, settings: Optional[Settings] = None) -> List[Matching]:
    settings = settings or load_settings()
    if len(i.edges) > settings.brute_force_edge_cap:
        raise TooLargeError(
            title="Instance too large",
            detail="Слишком много рёбер для полного перебора паросочетаний.",
            size=len(i.edges),
            cap=settings.brute_force_edge_cap,
        )
    return sorted(iter_matchings(i.edges))


def brute_force_stable(i: PreferenceSystem, settings: Optional[Settings] = None) -> List[Matching]:
    require_strict(i)
    return [m for m in all_matchings(i, settings) if not blocking_edges(i, m)]


def matchings_blocked_by(
    i: PreferenceSystem, b: Iterable[Edge], settings: Optional[Settings] = None
) -> List[Matching]:
    target = frozenset(b)
    return [m for m in all_matchings(i, settings) if blocking_edges(i, m) == target]


def _finish(
    i: PreferenceSystem, b: BlockingSet, found: Iterable[Optional[Matching]]
) -> List[Matching]:
    out = {m for m in found if m is not None and blocking_edges(i, m) == b}
    return sorted(out)


def _master_list_or_fail(sub: PreferenceSystem) -> MasterList:
    ml = admits_master_list(sub)
    if ml is None:
        raise ModulatorInvalidError(
            title="Invalid modulator",
            detail="После удаления модулятора экземпляр всё ещё не допускает мастер-список.",
        )
    return ml


def edge_modulator_guesses(s: Iterable[Edge]) -> List[Matching]:
    """Matchings inside s: at most 2^|s| of them."""
    return list(iter_matchings(sorted(set(s))))


def vertex_modulator_guesses(i: PreferenceSystem, s: Iterable[VertexId]) -> List[Matching]:
    """
    Matchings among the edges touching s. Each vertex of s is either free or
    takes one neighbour, so there are at most |V|^|s| of them.
    """
    modulator = set(s)
    return list(iter_matchings([e for e in i.edges if e[0] in modulator or e[1] in modulator]))


def enum_bp_edge_modulator(
    i: PreferenceSystem,
    b: Iterable[Edge],
    s: Iterable[Edge],
    settings: Optional[Settings] = None,
) -> List[Matching]:
    """
    All matchings whose blocking set is exactly b, given edges s whose removal
    leaves a master-list instance. One guess per matching M_S inside s; the
    rest is the unique stable matching of what is left.
    """
    settings = settings or load_settings()
    require_strict(i)
    blocking = frozenset(b)
    modulator = sorted(set(s))
    ml = _master_list_or_fail(delete_edges(i, modulator))
    base = delete_edges(i, set(modulator) | blocking)

    def guess(m_s: Matching) -> Optional[Matching]:
        if m_s.edges & blocking:
            return None
        rest = isolate(base, m_s.partners)
        return Matching(m_s.edges | _greedy_by_master_list(rest, ml).edges)

    guesses = edge_modulator_guesses(modulator)
    logger.debug("edge modulator of size %d: %d guesses", len(modulator), len(guesses))
    return _finish(i, blocking, ordered_map(guess, guesses, settings.threads))


def enum_bp_vertex_modulator(
    i: PreferenceSystem,
    b: Iterable[Edge],
    s: Iterable[VertexId],
    settings: Optional[Settings] = None,
) -> List[Matching]:
    """Same as the edge version, guessing the matched partners of every vertex in s."""
    settings = settings or load_settings()
    require_strict(i)
    blocking = frozenset(b)
    modulator = set(s)
    ml = _master_list_or_fail(isolate(i, modulator))
    base = delete_edges(i, blocking)

    def guess(m_s: Matching) -> Optional[Matching]:
        if m_s.edges & blocking:
            return None
        rest = isolate(base, modulator | set(m_s.partners))
        return Matching(m_s.edges | _greedy_by_master_list(rest, ml).edges)

    guesses = vertex_modulator_guesses(i, modulator)
    logger.debug("vertex modulator of size %d: %d guesses", len(modulator), len(guesses))
    return _finish(i, blocking, ordered_map(guess, guesses, settings.threads))


def _guess_count(i: PreferenceSystem, modulator: EdgeWitness | VertexWitness) -> float:
    if isinstance(modulator, EdgeWitness):
        return 2.0 ** modulator.value
    return float(max(i.n, 1)) ** modulator.value


def find_modulator(
    i: PreferenceSystem, settings: Optional[Settings] = None
) -> EdgeWitness | VertexWitness:
    """
    Modulator with the fewest guesses to enumerate over. Small instances get an
    exact vertex set first, and the 2-approximate edge set is then only
    searched up to the size where it would still be cheaper.
    """
    settings = settings or load_settings()
    if admits_master_list(i) is not None:
        return EdgeWitness(frozenset())

    vertex: Optional[VertexWitness] = None
    edge_budget = len(i.edges)
    if i.n <= settings.vertex_modulator_vertex_cap:
        vertex = delta_vert_exact(i, i.n, settings)
        if vertex is not None:
            edge_budget = min(edge_budget, int(vertex.value * math.log2(max(i.n, 2)) / 2))

    edge = delta_edge_2approx(i, edge_budget)
    candidates = [w for w in (edge, vertex) if w is not None]
    if not candidates:
        # deleting every edge always works
        return EdgeWitness(frozenset(i.edges))
    return min(candidates, key=lambda w: _guess_count(i, w))


def enum_with_modulator(
    i: PreferenceSystem,
    b: Iterable[Edge],
    modulator: EdgeWitness | VertexWitness,
    settings: Optional[Settings] = None,
) -> List[Matching]:
    if isinstance(modulator, EdgeWitness):
        return enum_bp_edge_modulator(i, b, modulator.edges, settings)
    return enum_bp_vertex_modulator(i, b, modulator.vertices, settings)


def enum_stable(i: PreferenceSystem, settings: Optional[Settings] = None) -> List[Matching]:
    require_strict(i)
    modulator = find_modulator(i, settings)
    logger.info("enumerating stable matchings with %s", type(modulator).__name__)
    return enum_with_modulator(i, (), modulator, settings)


# --- objectives ----------------------------------------------------------


def _partner_rank(i: PreferenceSystem, m: Matching, v: VertexId) -> int:
    """1 for the favourite; unmatched non-isolated vertices rank past the end."""
    order = i.order(v)
    partner = m.partner(v)
    if partner is None:
        return len(order) + 1 if len(order) else 0
    return order.rank[partner] + 1


def egalitarian_cost(i: PreferenceSystem) -> Objective:
    return lambda m: sum(_partner_rank(i, m, v) for v in i.vertices)


def cardinality(i: PreferenceSystem) -> Objective:
    return len


def regret(i: PreferenceSystem) -> Objective:
    return lambda m: max((_partner_rank(i, m, v) for v in m.partners), default=0)


def utility_weight(weights: Mapping[Edge, int]) -> Objective:
    return lambda m: sum(weights.get(e, 0) for e in m.edges)


OBJECTIVES = {
    "egalitarian": egalitarian_cost,
    "cardinality": cardinality,
    "regret": regret,
}


def optimize_over_stable(
    i: PreferenceSystem,
    objective: Objective,
    direction: str = "min",
    settings: Optional[Settings] = None,
) -> Optional[Tuple[Matching, int]]:
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be min or max, got {direction!r}")
    stable = enum_stable(i, settings)
    if not stable:
        return None
    sign = 1 if direction == "min" else -1
    scored = [(sign * objective(m), m) for m in stable]
    value, best = min(scored, key=lambda pair: (pair[0], pair[1].key))
    return best, sign * value
