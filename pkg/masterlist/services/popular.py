from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import networkx as nx

from masterlist.domain.errors import InvalidParamsError, TooLargeError
from masterlist.domain.matching import Matching
from masterlist.domain.preferences import Edge, PreferenceSystem, VertexId
from masterlist.domain.results import (
    EdgeWitness,
    MupmicInstance,
    MupmicResult,
    VertexWitness,
    VoteTally,
)
from masterlist.services.distances import delta_swap, swaps_to_edge_modulator
from masterlist.services.parallel import ordered_map
from masterlist.services.prefdigraph import admits_master_list, build_digraph
from masterlist.services.stable import (
    enum_with_modulator,
    find_modulator,
    iter_matchings,
    require_strict,
    validate_matching,
)
from masterlist.settings import Settings, load_settings

logger = logging.getLogger(__name__)


def _vote(
    i: PreferenceSystem, v: VertexId, mine: Optional[VertexId], theirs: Optional[VertexId]
) -> int:
    """+1 if v likes `mine` better than `theirs`, -1 for the opposite, 0 otherwise."""
    if mine == theirs:
        return 0
    if theirs is None:
        return 1
    if mine is None:
        return -1
    order = i.order(v)
    if order.prefers(mine, theirs):
        return 1
    if order.prefers(theirs, mine):
        return -1
    return 0


def compare(i: PreferenceSystem, m1: Matching, m2: Matching) -> VoteTally:
    first = second = 0
    for v in i.vertices:
        vote = _vote(i, v, m1.partner(v), m2.partner(v))
        if vote > 0:
            first += 1
        elif vote < 0:
            second += 1
    return VoteTally(first, second)


def _popular_exhaustive(i: PreferenceSystem, m: Matching, settings: Settings) -> bool:
    seen = 0
    for other in iter_matchings(i.edges):
        seen += 1
        if seen > settings.popularity_matching_cap:
            raise TooLargeError(
                title="Too many matchings",
                detail="Превышен предел перебора паросочетаний при проверке популярности.",
                size=seen,
                cap=settings.popularity_matching_cap,
            )
        if compare(i, other, m).first_wins:
            return False
    return True


def switching_weights(i: PreferenceSystem, m: Matching) -> Dict[Edge, int]:
    """
    Weight of each edge for the popularity test: the two endpoint votes for
    switching to it, minus the vote each endpoint casts for staying in m when
    left alone. A rival matching beats m by exactly its weight minus 2|m|.
    """
    loss = {v: (-1 if m.covers(v) else 0) for v in i.vertices}
    weights: Dict[Edge, int] = {}
    for u, v in i.edges:
        vote_u = _vote(i, u, v, m.partner(u))
        vote_v = _vote(i, v, u, m.partner(v))
        weights[(u, v)] = vote_u + vote_v - loss[u] - loss[v]
    return weights


def _popular_weighted(i: PreferenceSystem, m: Matching) -> bool:
    weights = switching_weights(i, m)
    graph = nx.Graph()
    graph.add_nodes_from(i.vertices)
    graph.add_weighted_edges_from((u, v, w) for (u, v), w in weights.items() if w > 0)
    best = nx.max_weight_matching(graph, maxcardinality=False)
    total = sum(graph[u][v]["weight"] for u, v in best)
    return total <= 2 * len(m)


def is_popular(
    i: PreferenceSystem,
    m: Matching,
    settings: Optional[Settings] = None,
    *,
    mode: str = "auto",
) -> bool:
    """
    No matching wins a head-to-head vote against m. "exhaustive" checks every
    rival, "weighted" solves one maximum-weight matching; "auto" picks the
    exhaustive check while the edge count stays under the configured cap.
    """
    settings = settings or load_settings()
    require_strict(i)
    validate_matching(i, m)
    if mode == "auto":
        small = len(i.edges) <= settings.popularity_exhaustive_edge_cap
        mode = "exhaustive" if small else "weighted"
    if mode == "exhaustive":
        return _popular_exhaustive(i, m, settings)
    if mode == "weighted":
        return _popular_weighted(i, m)
    raise ValueError(f"unknown popularity mode {mode!r}")


# --- max-utility popular matching with instability costs -----------------


def validate_mupmic(inst: MupmicInstance) -> None:
    require_strict(inst.system)
    edges = inst.system.edge_set
    if set(inst.utility) != edges or set(inst.cost) != edges:
        raise InvalidParamsError(
            title="Weights incomplete",
            detail="Полезность и стоимость должны быть заданы ровно для всех рёбер.",
        )
    if any(c < 1 for c in inst.cost.values()) or any(w < 0 for w in inst.utility.values()):
        raise InvalidParamsError(
            title="Weights out of range",
            detail="Стоимости должны быть не меньше 1, полезности неотрицательны.",
        )
    if inst.target < 0 or inst.budget < 0:
        raise InvalidParamsError(
            title="Negative parameters",
            detail="Целевая полезность и бюджет должны быть неотрицательны.",
        )


def candidate_blocking_sets(inst: MupmicInstance) -> List[Tuple[Edge, ...]]:
    """Edge sets of total cost <= budget, smallest first, then cheapest first."""
    edges = sorted(inst.system.edges)
    out: List[Tuple[int, int, Tuple[Edge, ...]]] = []
    for size in range(0, min(inst.budget, len(edges)) + 1):
        for subset in combinations(edges, size):
            cost = sum(inst.cost[e] for e in subset)
            if cost <= inst.budget:
                out.append((size, cost, subset))
    out.sort()
    return [subset for _, _, subset in out]


def _ranking_key(result: MupmicResult) -> Tuple[int, int, Tuple[Edge, ...]]:
    return -result.utility, result.cost, result.matching.key


def solve_mupmic(
    inst: MupmicInstance,
    modulator: EdgeWitness | VertexWitness,
    settings: Optional[Settings] = None,
) -> Optional[MupmicResult]:
    """
    Best popular matching with utility >= target whose blocking edges cost at
    most the budget. Every affordable blocking set is guessed, and the
    matchings blocked by exactly that set come from the modulator enumerator.
    """
    settings = settings or load_settings()
    validate_mupmic(inst)
    i = inst.system

    def evaluate(b: Tuple[Edge, ...]) -> Optional[MupmicResult]:
        best: Optional[MupmicResult] = None
        for m in enum_with_modulator(i, b, modulator, settings):
            utility = sum(inst.utility[e] for e in m.edges)
            if utility < inst.target or not is_popular(i, m, settings):
                continue
            found = MupmicResult(m, utility, sum(inst.cost[e] for e in b), frozenset(b))
            if best is None or _ranking_key(found) < _ranking_key(best):
                best = found
        return best

    candidates = candidate_blocking_sets(inst)
    logger.debug("%d affordable blocking sets", len(candidates))
    results = [r for r in ordered_map(evaluate, candidates, settings.threads) if r is not None]
    if not results:
        logger.info(
            "no popular matching reaches utility %d within budget %d", inst.target, inst.budget
        )
        return None
    return min(results, key=_ranking_key)


def solve_mupmic_auto(
    inst: MupmicInstance,
    settings: Optional[Settings] = None,
    *,
    use_swap_modulator: bool = False,
) -> Optional[MupmicResult]:
    """
    solve_mupmic with a modulator found on the spot: the cheaper of the
    2-approximate edge set and a small exact vertex set, or, when asked, the
    edge set read off an exact swap witness.
    """
    settings = settings or load_settings()
    validate_mupmic(inst)
    i = inst.system
    modulator: EdgeWitness | VertexWitness
    if admits_master_list(i) is not None:
        modulator = EdgeWitness(frozenset())
    elif use_swap_modulator:
        # the whole arc set is always a feedback arc set, so this cannot miss
        witness = delta_swap(i, len(build_digraph(i).arcs))
        modulator = swaps_to_edge_modulator(i, witness)
    else:
        modulator = find_modulator(i, settings)
    logger.info("mupmic modulator: %s of size %d", type(modulator).__name__, modulator.value)
    return solve_mupmic(inst, modulator, settings)
