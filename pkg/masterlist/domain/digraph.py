from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from masterlist.domain.preferences import VertexId


class ArcKind(str, Enum):
    STRICT = "strict"
    TIED = "tied"


@dataclass(frozen=True)
class LabeledArc:
    # tail is the less preferred neighbour, head the more preferred one
    tail: VertexId
    head: VertexId
    label: VertexId
    kind: ArcKind = ArcKind.STRICT

    @property
    def is_strict(self) -> bool:
        return self.kind is ArcKind.STRICT


@dataclass(frozen=True)
class PreferenceDigraph:
    """
    Labelled multi-digraph. Arc ids are positions in `arcs`; every solver
    reports and tie-breaks on these ids.
    """

    n: int
    arcs: Tuple[LabeledArc, ...] = ()

    @property
    def arc_ids(self) -> range:
        return range(len(self.arcs))

    @cached_property
    def strict_ids(self) -> Tuple[int, ...]:
        return tuple(i for i, arc in enumerate(self.arcs) if arc.is_strict)

    def to_networkx(self, removed: Iterable[int] = ()) -> nx.MultiDiGraph:
        skip = set(removed)
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n))
        for i, arc in enumerate(self.arcs):
            if i not in skip:
                graph.add_edge(arc.tail, arc.head, key=i, strict=arc.is_strict)
        return graph

    def without(self, removed: Iterable[int]) -> PreferenceDigraph:
        skip = set(removed)
        return PreferenceDigraph(self.n, tuple(a for i, a in enumerate(self.arcs) if i not in skip))


@dataclass(frozen=True)
class MasterList:
    groups: Tuple[FrozenSet[VertexId], ...] = ()

    @classmethod
    def strict(cls, items: Sequence[VertexId]) -> MasterList:
        return cls(tuple(frozenset([x]) for x in items))

    @cached_property
    def rank(self) -> Dict[VertexId, int]:
        return {x: i for i, g in enumerate(self.groups) for x in g}

    @property
    def is_strict(self) -> bool:
        return all(len(g) == 1 for g in self.groups)

    def as_list(self) -> List[VertexId]:
        return [x for g in self.groups for x in sorted(g)]

    def covers(self, n: int) -> bool:
        return sorted(self.rank) == list(range(n)) and sum(len(g) for g in self.groups) == n
