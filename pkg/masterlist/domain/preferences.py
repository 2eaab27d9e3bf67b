from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from masterlist.domain.errors import SymmetryError, UnknownVertexError

# Internal vertex ids are dense ints 0..n-1 in input order.
VertexId = int
Edge = Tuple[VertexId, VertexId]


def make_edge(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeakOrder:
    """
    Preferences of one vertex over its neighbours, most-preferred group first.
    Members of a group are tied.
    """

    groups: Tuple[FrozenSet[VertexId], ...] = ()

    @classmethod
    def strict(cls, items: Sequence[VertexId]) -> WeakOrder:
        return cls(tuple(frozenset([x]) for x in items))

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[VertexId]]) -> WeakOrder:
        return cls(tuple(g for g in (frozenset(g) for g in groups) if g))

    @cached_property
    def rank(self) -> Dict[VertexId, int]:
        return {x: i for i, g in enumerate(self.groups) for x in g}

    @cached_property
    def members(self) -> FrozenSet[VertexId]:
        return frozenset(self.rank)

    @property
    def is_strict(self) -> bool:
        return all(len(g) == 1 for g in self.groups)

    def __len__(self) -> int:
        return len(self.rank)

    def __contains__(self, item: object) -> bool:
        return item in self.rank

    def prefers(self, a: VertexId, b: VertexId) -> bool:
        """True iff a is strictly preferred to b."""
        return self.rank[a] < self.rank[b]

    def as_list(self) -> List[VertexId]:
        return [x for g in self.groups for x in sorted(g)]

    def restrict(self, keep: Iterable[VertexId]) -> WeakOrder:
        keep_set = set(keep)
        return WeakOrder.from_groups(g & keep_set for g in self.groups)

    def strict_pairs(self) -> Iterator[Tuple[VertexId, VertexId]]:
        """Yields (worse, better) for every strictly ordered pair."""
        for i, better_group in enumerate(self.groups):
            for worse_group in self.groups[i + 1 :]:
                for better in sorted(better_group):
                    for worse in sorted(worse_group):
                        yield worse, better

    def tied_pairs(self) -> Iterator[Tuple[VertexId, VertexId]]:
        for g in self.groups:
            ordered = sorted(g)
            for i, a in enumerate(ordered):
                for b in ordered[i + 1 :]:
                    yield a, b


@dataclass(frozen=True)
class DistanceValue:
    value: int = 0
    infinite: bool = False

    @classmethod
    def finite(cls, value: int) -> DistanceValue:
        return cls(value=value)

    @classmethod
    def infinity(cls) -> DistanceValue:
        return cls(value=0, infinite=True)

    def __add__(self, other: DistanceValue) -> DistanceValue:
        if self.infinite or other.infinite:
            return DistanceValue.infinity()
        return DistanceValue.finite(self.value + other.value)

    def __int__(self) -> int:
        if self.infinite:
            raise OverflowError("infinite swap distance has no integer value")
        return self.value

    def to_json(self) -> int | str:
        return "inf" if self.infinite else self.value


@dataclass(frozen=True)
class Swap:
    a: VertexId
    b: VertexId
    v: VertexId


@dataclass(frozen=True)
class PreferenceSystem:
    names: Tuple[str, ...]
    prefs: Tuple[WeakOrder, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.prefs):
            raise ValueError("names and prefs must have the same length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("vertex names must be unique")
        n = len(self.names)
        for v, order in enumerate(self.prefs):
            for u in order.members:
                if not 0 <= u < n:
                    raise UnknownVertexError(
                        title="Unknown vertex",
                        detail=f"Вершина {self.names[v]} ссылается на несуществующий id {u}.",
                        vertex=str(u),
                    )
                if u == v:
                    raise SymmetryError(
                        title="Self preference",
                        detail=f"Вершина {self.names[v]} не может предпочитать саму себя.",
                        pair=(self.names[v], self.names[v]),
                    )
                if v not in self.prefs[u].members:
                    raise SymmetryError(
                        title="Asymmetric adjacency",
                        detail=f"{self.names[v]} ранжирует {self.names[u]}, но не наоборот.",
                        pair=(self.names[v], self.names[u]),
                    )

    @classmethod
    def from_named(
        cls, names: Sequence[str], orders: Mapping[str, Sequence[Sequence[str]]]
    ) -> PreferenceSystem:
        """Builds an instance from name-level groups, most-preferred group first."""
        index = {name: i for i, name in enumerate(names)}
        prefs = []
        for name in names:
            groups = []
            for group in orders.get(name, ()):
                ids = []
                for member in group:
                    if member not in index:
                        raise UnknownVertexError(
                            title="Unknown vertex",
                            detail=f"Вершина {member} не объявлена.",
                            vertex=member,
                        )
                    ids.append(index[member])
                groups.append(ids)
            prefs.append(WeakOrder.from_groups(groups))
        return cls(tuple(names), tuple(prefs))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def vertices(self) -> range:
        return range(len(self.names))

    @cached_property
    def _index(self) -> Dict[str, VertexId]:
        return {name: i for i, name in enumerate(self.names)}

    def index_of(self, name: str) -> VertexId:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVertexError(
                title="Unknown vertex",
                detail=f"Вершина {name} отсутствует в экземпляре.",
                vertex=name,
            ) from None

    def name_of(self, v: VertexId) -> str:
        return self.names[v]

    def order(self, v: VertexId) -> WeakOrder:
        return self.prefs[v]

    def neighbors(self, v: VertexId) -> FrozenSet[VertexId]:
        return self.prefs[v].members

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted({make_edge(u, v) for u in self.vertices for v in self.neighbors(u)}))

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return make_edge(u, v) in self.edge_set

    @property
    def is_strict(self) -> bool:
        return all(order.is_strict for order in self.prefs)

    def with_orders(self, prefs: Sequence[WeakOrder]) -> PreferenceSystem:
        return PreferenceSystem(self.names, tuple(prefs))

    def edge_names(self, edge: Edge) -> Tuple[str, str]:
        return self.names[edge[0]], self.names[edge[1]]

    def edge_of(self, a: str, b: str) -> Optional[Edge]:
        u, v = self.index_of(a), self.index_of(b)
        e = make_edge(u, v)
        return e if e in self.edge_set else None
