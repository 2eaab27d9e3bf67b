from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from masterlist.domain.digraph import PreferenceDigraph
from masterlist.services.prefdigraph import shortest_cycle_through

logger = logging.getLogger(__name__)

# sorted arc ids of the digraph the set was computed on
ArcSet = Tuple[int, ...]

Bundles = Tuple[FrozenSet[int], ...]


class _CycleHittingSearch:
    """
    Exact branch-and-bound for the smallest arc set meeting every cycle that
    uses a relevant arc.

    Each step takes a shortest relevant cycle and branches on its consecutive
    vertex pairs. A branch deletes the whole bundle of parallel arcs between
    the pair (for the first pair, only the relevant ones), since any solution
    must swallow at least one full bundle. A packing of bundle-disjoint cycles
    gives the lower bound used for pruning.
    """

    def __init__(
        self,
        d: PreferenceDigraph,
        relevant: Iterable[int],
        allowed: Optional[Iterable[int]] = None,
    ) -> None:
        self.d = d
        self.relevant = frozenset(relevant)
        self.allowed = frozenset(d.arc_ids if allowed is None else allowed)
        self._bundles: Dict[FrozenSet[int], Optional[Bundles]] = {}
        self._memo: Dict[Tuple[FrozenSet[int], int, int], bool] = {}
        self.nodes = 0

    def bundles(self, removed: FrozenSet[int]) -> Optional[Bundles]:
        if removed in self._bundles:
            return self._bundles[removed]
        found = shortest_cycle_through(self.d, self.relevant, removed)
        result: Optional[Bundles] = None
        if found is not None:
            _, cycle = found
            result = self._cycle_bundles(cycle, removed)
        self._bundles[removed] = result
        return result

    def _cycle_bundles(self, cycle: List[int], removed: FrozenSet[int]) -> Bundles:
        out = []
        steps = list(zip(cycle, cycle[1:] + cycle[:1]))
        for pos, (x, y) in enumerate(steps):
            bundle = frozenset(
                e
                for e, arc in enumerate(self.d.arcs)
                if arc.tail == x
                and arc.head == y
                and e not in removed
                and (pos > 0 or e in self.relevant)
            )
            out.append(bundle)
        return tuple(out)

    def _usable(self, bundle: FrozenSet[int], min_id: int) -> bool:
        return min(bundle) >= min_id and bundle <= self.allowed

    def lower_bound(self, removed: FrozenSet[int], min_id: int) -> Optional[int]:
        """Cost of a bundle-disjoint packing of relevant cycles; None if one is unbreakable."""
        gone = set(removed)
        total = 0
        while True:
            found = shortest_cycle_through(self.d, self.relevant, gone)
            if found is None:
                return total
            bundles = self._cycle_bundles(found[1], frozenset(gone))
            usable = [len(b) for b in bundles if self._usable(b, min_id)]
            if not usable:
                return None
            total += min(usable)
            cycle = found[1]
            pairs = set(zip(cycle, cycle[1:] + cycle[:1]))
            gone |= {e for e, arc in enumerate(self.d.arcs) if (arc.tail, arc.head) in pairs}

    def feasible(self, removed: FrozenSet[int], budget: int, min_id: int) -> bool:
        """True iff at most `budget` usable arcs with id >= min_id finish the job."""
        key = (removed, budget, min_id)
        if key in self._memo:
            return self._memo[key]
        self.nodes += 1

        bundles = self.bundles(removed)
        if bundles is None:
            result = True
        elif budget <= 0:
            result = False
        else:
            bound = self.lower_bound(removed, min_id)
            if bound is None or bound > budget:
                result = False
            else:
                result = False
                for bundle in sorted(set(bundles), key=lambda b: (min(b), len(b))):
                    if len(bundle) > budget or not self._usable(bundle, min_id):
                        continue
                    if self.feasible(removed | bundle, budget - len(bundle), min_id):
                        result = True
                        break
        self._memo[key] = result
        return result

    def _on_relevant_cycle(self, removed: FrozenSet[int]) -> FrozenSet[int]:
        graph = self.d.to_networkx(removed)
        component: Dict[int, int] = {}
        for idx, comp in enumerate(nx.strongly_connected_components(graph)):
            for x in comp:
                component[x] = idx
        return frozenset(
            e
            for e in self.d.arc_ids
            if e not in removed and component[self.d.arcs[e].tail] == component[self.d.arcs[e].head]
        )

    def solve(self, budget: int) -> Optional[ArcSet]:
        budget = min(budget, len(self.d.arcs))
        empty: FrozenSet[int] = frozenset()
        start = self.lower_bound(empty, 0)
        if start is None or start > budget:
            return None

        best = None
        for k in range(start, budget + 1):
            if self.feasible(empty, k, 0):
                best = k
                break
        if best is None:
            return None

        # lexicographically smallest set of that size: fix the smallest usable
        # first arc that still admits a completion from larger ids, and so on
        chosen: List[int] = []
        removed = empty
        min_id = 0
        for left in range(best, 0, -1):
            candidates = sorted(
                e for e in self._on_relevant_cycle(removed) if e >= min_id and e in self.allowed
            )
            for e in candidates:
                if self.feasible(removed | {e}, left - 1, e + 1):
                    chosen.append(e)
                    removed = removed | {e}
                    min_id = e + 1
                    break
            else:
                raise RuntimeError("search lost a solution it had already found")
        logger.debug("hitting set of size %d after %d search nodes", best, self.nodes)
        return tuple(chosen)


def min_strict_hitting(
    d: PreferenceDigraph, budget: int, *, allowed: Optional[Iterable[int]] = None
) -> Optional[ArcSet]:
    """
    Smallest arc set meeting every cycle that contains a strict arc, if one of
    size <= budget exists. Among minimum sets the one with the smallest sorted
    id tuple wins. `allowed` restricts which arcs may be deleted.
    """
    if budget < 0:
        return None
    return _CycleHittingSearch(d, d.strict_ids, allowed).solve(budget)


def min_fas(
    d: PreferenceDigraph, budget: int, *, allowed: Optional[Iterable[int]] = None
) -> Optional[ArcSet]:
    """Minimum feedback arc set within budget, same tie-break as min_strict_hitting."""
    if budget < 0:
        return None
    return _CycleHittingSearch(d, d.arc_ids, allowed).solve(budget)


def is_acyclic(d: PreferenceDigraph, removed: Iterable[int] = ()) -> bool:
    return nx.is_directed_acyclic_graph(d.to_networkx(removed))
