from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from masterlist.domain.digraph import ArcKind, LabeledArc, PreferenceDigraph
from masterlist.domain.errors import NotAdmissibleError
from masterlist.domain.preferences import Edge, PreferenceSystem, Swap, VertexId, make_edge
from masterlist.domain.results import (
    AuxiliaryDigraph,
    EdgeWitness,
    HNode,
    SwapWitness,
    VertexWitness,
)
from masterlist.services.fas import ArcSet, is_acyclic, min_fas, min_strict_hitting
from masterlist.services.parallel import first_match
from masterlist.services.prefdigraph import (
    admits_master_list,
    build_digraph,
    derive_instance,
    strict_path_master_list,
)
from masterlist.services.swaps import (
    apply_swap,
    delete_edges,
    instance_swap_distance,
    is_admissible,
    isolate,
)
from masterlist.settings import Settings, load_settings

logger = logging.getLogger(__name__)


def in_master_list_family(i: PreferenceSystem) -> bool:
    return admits_master_list(i) is not None


# --- swaps ---------------------------------------------------------------


def _minimal_fas(d: PreferenceDigraph, fas: ArcSet) -> ArcSet:
    kept = set(fas)
    for e in sorted(fas):
        if is_acyclic(d, kept - {e}):
            kept.discard(e)
    return tuple(sorted(kept))


def fas_to_swaps(i: PreferenceSystem, fas: ArcSet) -> Tuple[List[Swap], PreferenceSystem]:
    """
    Reverses the arcs of an inclusion-minimal feedback arc set one swap at a
    time. Among the arcs whose endpoints are currently adjacent in their
    label's order, the smallest (label, tail, head) goes first.
    """
    d = build_digraph(i)
    remaining = {d.arcs[e] for e in fas}
    current = i
    swaps: List[Swap] = []
    while remaining:
        ready = sorted(
            (
                arc
                for arc in remaining
                if is_admissible(current, Swap(arc.tail, arc.head, arc.label))
            ),
            key=lambda arc: (arc.label, arc.tail, arc.head),
        )
        if not ready:
            raise NotAdmissibleError(
                title="Swaps not admissible",
                detail="Ни одна дуга из множества не соответствует допустимому обмену.",
            )
        arc = ready[0]
        step = Swap(arc.tail, arc.head, arc.label)
        current = apply_swap(current, step)
        swaps.append(step)
        remaining.discard(arc)
    return swaps, current


def delta_swap(i: PreferenceSystem, budget: int) -> Optional[SwapWitness]:
    """
    Swap distance to the master-list family with a witness. Strict instances go
    through a minimum feedback arc set of D_I, weak ones through a minimum set
    hitting its strict cycles.
    """
    d = build_digraph(i)
    if i.is_strict:
        fas = min_fas(d, budget)
        if fas is None:
            logger.info("swap distance exceeds budget %d", budget)
            return None
        fas = _minimal_fas(d, fas)
        swaps, witness = fas_to_swaps(i, fas)
        return SwapWitness(
            value=len(swaps),
            witness_instance=witness,
            strict_swaps=tuple(swaps),
            hitting_arcs=fas,
            witness_distance=len(swaps),
        )

    hitting = min_strict_hitting(d, budget)
    if hitting is None:
        logger.info("strict-cycle hitting number exceeds budget %d", budget)
        return None
    ml = strict_path_master_list(i, hitting)
    witness = derive_instance(i.names, i.edges, ml)
    distance = instance_swap_distance(i, witness)
    logger.debug("weak witness: hitting=%d distance=%s", len(hitting), distance.to_json())
    return SwapWitness(
        value=len(hitting),
        witness_instance=witness,
        strict_swaps=None,
        hitting_arcs=hitting,
        witness_distance=int(distance),
    )


# --- exact deletions -----------------------------------------------------


def delta_edge_exact(
    i: PreferenceSystem, budget: int, settings: Optional[Settings] = None
) -> Optional[EdgeWitness]:
    settings = settings or load_settings()
    edges = list(i.edges)
    for size in range(0, min(budget, len(edges)) + 1):
        hit = first_match(
            lambda subset: in_master_list_family(delete_edges(i, subset)),
            combinations(edges, size),
            settings.threads,
        )
        if hit is not None:
            logger.info("edge distance %d", size)
            return EdgeWitness(frozenset(hit))
    return None


def delta_vert_exact(
    i: PreferenceSystem, budget: int, settings: Optional[Settings] = None
) -> Optional[VertexWitness]:
    settings = settings or load_settings()
    for size in range(0, min(budget, i.n) + 1):
        hit = first_match(
            lambda subset: in_master_list_family(isolate(i, subset)),
            combinations(i.vertices, size),
            settings.threads,
        )
        if hit is not None:
            logger.info("vertex distance %d", size)
            return VertexWitness(frozenset(hit))
    return None


# --- auxiliary digraph ---------------------------------------------------


class _AuxiliaryBuilder:
    def __init__(self, i: PreferenceSystem) -> None:
        self.i = i
        self.nodes: List[HNode] = [HNode("vertex", v, -1, -1) for v in i.vertices]
        self.index: Dict[HNode, int] = {node: k for k, node in enumerate(self.nodes)}
        self.arcs: List[LabeledArc] = []
        self.roles: List[str] = []

    def node(self, node: HNode) -> int:
        if node not in self.index:
            self.index[node] = len(self.nodes)
            self.nodes.append(node)
        return self.index[node]

    def arc(self, tail: int, head: int, label: VertexId, role: str) -> None:
        kind = ArcKind.STRICT if role == "Z" else ArcKind.TIED
        self.arcs.append(LabeledArc(tail, head, label, kind))
        self.roles.append(role)

    def incidences(self) -> None:
        for v in self.i.vertices:
            for a in sorted(self.i.neighbors(v)):
                minus = self.node(HNode("minus", a, -1, v))
                plus = self.node(HNode("plus", a, -1, v))
                self.arc(minus, a, v, "U")
                self.arc(a, plus, v, "U")

    def minus(self, a: VertexId, v: VertexId) -> int:
        return self.index[HNode("minus", a, -1, v)]

    def plus(self, a: VertexId, v: VertexId) -> int:
        return self.index[HNode("plus", a, -1, v)]

    def build(self, relevant: Iterable[int] = ()) -> AuxiliaryDigraph:
        digraph = PreferenceDigraph(len(self.nodes), tuple(self.arcs))
        return AuxiliaryDigraph(
            nodes=tuple(self.nodes),
            digraph=digraph,
            roles=tuple(self.roles),
            relevant=frozenset(relevant),
        )


def build_auxiliary_digraph(i: PreferenceSystem) -> AuxiliaryDigraph:
    """
    Split graph for the edge-deletion approximation: every incidence (a, v)
    becomes a_v^- -> a -> a_v^+, each strict preference a below b at v routes
    a_v^+ -> z -> b_v^- through its own z vertex, and each tie group at v gets
    a hub t joined both ways to the split copies of its members.
    """
    builder = _AuxiliaryBuilder(i)
    builder.incidences()

    relevant: Set[int] = set()
    for v in i.vertices:
        for worse, better in i.order(v).strict_pairs():
            z = builder.node(HNode("strict", worse, better, v))
            relevant.add(z)
            builder.arc(builder.plus(worse, v), z, v, "Z")
            builder.arc(z, builder.minus(better, v), v, "Z")

    for v in i.vertices:
        for g, group in enumerate(i.order(v).groups):
            if len(group) < 2:
                continue
            t = builder.node(HNode("tie", g, -1, v))
            for a in sorted(group):
                builder.arc(t, builder.minus(a, v), v, "T")
                builder.arc(builder.plus(a, v), t, v, "T")

    return builder.build(relevant)


def build_strict_auxiliary_digraph(i: PreferenceSystem) -> AuxiliaryDigraph:
    """Strict-only variant: a_v^+ -> b_v^- directly for every a below b at v."""
    builder = _AuxiliaryBuilder(i)
    builder.incidences()
    for v in i.vertices:
        for worse, better in i.order(v).strict_pairs():
            builder.arc(builder.plus(worse, v), builder.minus(better, v), v, "Z")
    return builder.build()


def normalize_to_incidence_arcs(h: AuxiliaryDigraph, arcs: Iterable[int]) -> FrozenSet[int]:
    """
    Moves every deleted arc onto an incidence arc: an arc entering a_v^- is
    replaced by a_v^- -> a, an arc leaving a_v^+ by a -> a_v^+.
    """
    by_ends = {(arc.tail, arc.head): e for e, arc in enumerate(h.digraph.arcs)}
    out: Set[int] = set()
    for e in arcs:
        if h.roles[e] == "U":
            out.add(e)
            continue
        arc = h.digraph.arcs[e]
        head, tail = h.nodes[arc.head], h.nodes[arc.tail]
        if head.kind == "minus":
            out.add(by_ends[(arc.head, head.a)])
        elif tail.kind == "plus":
            out.add(by_ends[(tail.a, arc.tail)])
        else:
            raise ValueError(f"arc {e} touches no split vertex")
    return frozenset(out)


def incidence_arcs_to_edges(h: AuxiliaryDigraph, arcs: Iterable[int]) -> FrozenSet[Edge]:
    out: Set[Edge] = set()
    for e in arcs:
        arc = h.digraph.arcs[e]
        split = h.nodes[arc.tail] if h.nodes[arc.tail].kind == "minus" else h.nodes[arc.head]
        out.add(make_edge(split.a, split.v))
    return frozenset(out)


def delta_edge_2approx(
    i: PreferenceSystem, budget: int, *, fast_path: bool = True
) -> Optional[EdgeWitness]:
    """
    Edge deletion set of size at most 2 * budget whenever the true edge distance
    is at most budget. Hits every relevant cycle of the split graph with
    incidence arcs only and maps each to its edge.
    """
    if in_master_list_family(i):
        return EdgeWitness(frozenset())

    if fast_path and i.is_strict:
        h = build_strict_auxiliary_digraph(i)
        allowed = h.arcs_with_role("U")
        found = min_fas(h.digraph, 2 * budget, allowed=allowed)
    else:
        h = build_auxiliary_digraph(i)
        allowed = h.arcs_with_role("U")
        found = min_strict_hitting(h.digraph, 2 * budget, allowed=allowed)
    if found is None:
        logger.info("no relevant-cycle hitting set within %d", 2 * budget)
        return None

    edges = incidence_arcs_to_edges(h, normalize_to_incidence_arcs(h, found))
    logger.info("2-approximate edge modulator of size %d", len(edges))
    return EdgeWitness(edges)


# --- swap witness to edge modulator --------------------------------------


def _disagreeing_pairs(
    i: PreferenceSystem, witness: PreferenceSystem, v: VertexId
) -> List[Tuple[VertexId, VertexId]]:
    mine, theirs = i.order(v).rank, witness.order(witness.index_of(i.name_of(v))).rank
    to_theirs = {x: witness.index_of(i.name_of(x)) for x in mine}
    out = []
    for a, b in combinations(sorted(mine), 2):
        ra, rb = mine[a], mine[b]
        ta, tb = theirs[to_theirs[a]], theirs[to_theirs[b]]
        if (ra < rb, ra == rb) != (ta < tb, ta == tb):
            out.append((a, b))
    return out


def swaps_to_edge_modulator(i: PreferenceSystem, witness: SwapWitness) -> EdgeWitness:
    """
    Edge set of at most witness.value edges whose deletion lands in the
    master-list family: at each vertex, cover the pairs the witness reorders by
    deleting the edge to one endpoint of every such pair.
    """
    chosen: Set[Edge] = set()
    for v in i.vertices:
        pairs = _disagreeing_pairs(i, witness.witness_instance, v)
        while pairs:
            counts: Dict[VertexId, int] = {}
            for a, b in pairs:
                counts[a] = counts.get(a, 0) + 1
                counts[b] = counts.get(b, 0) + 1
            pick = min(counts, key=lambda x: (-counts[x], x))
            chosen.add(make_edge(pick, v))
            pairs = [(a, b) for a, b in pairs if pick not in (a, b)]

    for e in sorted(chosen):
        if in_master_list_family(delete_edges(i, chosen - {e})):
            chosen.discard(e)
    return EdgeWitness(frozenset(chosen))
