from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, NamedTuple, Optional, Tuple

from masterlist.domain.digraph import PreferenceDigraph
from masterlist.domain.matching import Matching
from masterlist.domain.preferences import Edge, PreferenceSystem, Swap, VertexId


@dataclass(frozen=True)
class SwapWitness:
    value: int
    witness_instance: PreferenceSystem
    # None for weakly ordered inputs, where only the distance is defined
    strict_swaps: Optional[Tuple[Swap, ...]] = None
    hitting_arcs: Tuple[int, ...] = ()
    witness_distance: int = 0


@dataclass(frozen=True)
class EdgeWitness:
    edges: FrozenSet[Edge]

    @property
    def value(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class VertexWitness:
    vertices: FrozenSet[VertexId]

    @property
    def value(self) -> int:
        return len(self.vertices)


class HNode(NamedTuple):
    # kind: "vertex" | "minus" | "plus" | "tie" | "strict"
    kind: str
    a: int
    b: int
    v: int


@dataclass(frozen=True)
class AuxiliaryDigraph:
    """
    The split graph used by the edge-deletion approximation. Node i of
    `digraph` is described by `nodes[i]`; arcs of A_Z are the strict ones.
    """

    nodes: Tuple[HNode, ...]
    digraph: PreferenceDigraph
    roles: Tuple[str, ...]
    relevant: FrozenSet[int]

    def count(self, kind: str) -> int:
        return sum(1 for node in self.nodes if node.kind == kind)

    def arcs_with_role(self, role: str) -> Tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == role)


@dataclass(frozen=True)
class VoteTally:
    for_first: int = 0
    for_second: int = 0

    @property
    def first_wins(self) -> bool:
        return self.for_first > self.for_second

    def reversed(self) -> VoteTally:
        return VoteTally(self.for_second, self.for_first)


@dataclass(frozen=True)
class MupmicInstance:
    system: PreferenceSystem
    utility: Dict[Edge, int]
    cost: Dict[Edge, int]
    target: int = 0
    budget: int = 0

    def __hash__(self) -> int:
        return hash((self.system, self.target, self.budget))


@dataclass(frozen=True)
class MupmicResult:
    matching: Matching
    utility: int
    cost: int
    blocking: FrozenSet[Edge] = field(default_factory=frozenset)


@dataclass(frozen=True)
class RawDigraph:
    names: Tuple[str, ...]
    arcs: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class HittingSetInstance:
    universe: Tuple[str, ...]
    # each set is a tuple of universe indices in universe order
    sets: Tuple[Tuple[int, ...], ...] = ()
