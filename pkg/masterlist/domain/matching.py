from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, total_ordering
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from masterlist.domain.preferences import Edge, VertexId, make_edge


@total_ordering
@dataclass(frozen=True)
class Matching:
    edges: FrozenSet[Edge] = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[Tuple[VertexId, VertexId]]) -> Matching:
        edges = frozenset(make_edge(u, v) for u, v in pairs)
        seen = set()
        for u, v in edges:
            if u in seen or v in seen:
                raise ValueError(f"edges of a matching must be disjoint: {sorted(edges)}")
            seen.update((u, v))
        return cls(edges)

    @cached_property
    def partners(self) -> Dict[VertexId, VertexId]:
        out: Dict[VertexId, VertexId] = {}
        for u, v in self.edges:
            out[u] = v
            out[v] = u
        return out

    def partner(self, v: VertexId) -> Optional[VertexId]:
        return self.partners.get(v)

    def covers(self, v: VertexId) -> bool:
        return v in self.partners

    @property
    def key(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __lt__(self, other: Matching) -> bool:
        return self.key < other.key


BlockingSet = FrozenSet[Edge]
