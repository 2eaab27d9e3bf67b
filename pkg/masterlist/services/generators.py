from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from masterlist.domain.errors import InvalidParamsError
from masterlist.domain.preferences import Edge, PreferenceSystem, VertexId, WeakOrder
from masterlist.domain.results import HittingSetInstance, RawDigraph

logger = logging.getLogger(__name__)


def _invalid(detail: str) -> InvalidParamsError:
    return InvalidParamsError(title="Invalid generator parameters", detail=detail)


def gen_four_cycles(k: int) -> PreferenceSystem:
    """k disjoint 4-cycles; every vertex prefers its clockwise neighbour."""
    if k < 0:
        raise _invalid("Число циклов k должно быть неотрицательным.")
    names = tuple(str(x + 1) for x in range(4 * k))
    prefs = []
    for c in range(k):
        for j in range(4):
            clockwise = 4 * c + (j + 1) % 4
            counter = 4 * c + (j - 1) % 4
            prefs.append(WeakOrder.strict([clockwise, counter]))
    return PreferenceSystem(names, tuple(prefs))


def gen_jkn(k: int, n: int) -> PreferenceSystem:
    """
    Vertices a1..an, s1..sk, b1..b(n-k) in that id order. a_i sees every s and b_j for
    i-k <= j <= i; b's prefer higher a's, s's prefer lower a's, and a_i ranks
    b_i, s1, b_(i-1), s2, ..., s_k, b_(i-k) with undefined entries skipped.
    """
    if k < 1 or n < k:
        raise _invalid(f"Нужно n >= k >= 1, получено k={k}, n={n}.")
    n_b = n - k
    a = {i: i - 1 for i in range(1, n + 1)}
    s = {r: n + r - 1 for r in range(1, k + 1)}
    b = {j: n + k + j - 1 for j in range(1, n_b + 1)}
    names = [f"a{i}" for i in a] + [f"s{r}" for r in s] + [f"b{j}" for j in b]

    prefs: List[WeakOrder] = []
    for i in a:
        items = []
        for r in range(1, k + 1):
            if i - r + 1 in b:
                items.append(b[i - r + 1])
            items.append(s[r])
        if i - k in b:
            items.append(b[i - k])
        prefs.append(WeakOrder.strict(items))
    for _ in s:
        prefs.append(WeakOrder.strict([a[i] for i in range(1, n + 1)]))
    for j in b:
        prefs.append(WeakOrder.strict([a[i] for i in range(min(j + k, n), j - 1, -1)]))
    return PreferenceSystem(tuple(names), tuple(prefs))


# --- reductions ----------------------------------------------------------


def _arc_vertex_names(d: RawDigraph) -> List[str]:
    taken = set(d.names)
    seen: Dict[Tuple[int, int], int] = {}
    out = []
    for tail, head in d.arcs:
        count = seen.get((tail, head), 0) + 1
        seen[(tail, head)] = count
        name = f"z_{d.names[tail]}_{d.names[head]}"
        if count > 1:
            name = f"{name}_{count}"
        if name in taken:
            raise _invalid(f"Имя вспомогательной вершины {name} уже занято.")
        taken.add(name)
        out.append(name)
    return out


def reduce_fas_to_ml(d: RawDigraph) -> PreferenceSystem:
    """
    One dummy vertex per arc (a, b), adjacent to a and b and preferring b.
    Original vertices rank their dummies by id, lowest first.
    """
    n = len(d.names)
    for tail, head in d.arcs:
        if tail == head or not (0 <= tail < n and 0 <= head < n):
            raise _invalid(f"Дуга ({tail}, {head}) недопустима: петля или неизвестная вершина.")

    dummies: Dict[VertexId, List[VertexId]] = {v: [] for v in range(n)}
    dummy_prefs = []
    for e, (tail, head) in enumerate(d.arcs):
        z = n + e
        dummies[tail].append(z)
        dummies[head].append(z)
        dummy_prefs.append(WeakOrder.strict([head, tail]))

    prefs = [WeakOrder.strict(sorted(dummies[v])) for v in range(n)] + dummy_prefs
    return PreferenceSystem(tuple(d.names) + tuple(_arc_vertex_names(d)), tuple(prefs))


def fas_from_edge_solution(d: RawDigraph, edges: Iterable[Edge]) -> Tuple[int, ...]:
    """Arcs of d whose dummy vertex lost an edge in the reduced instance."""
    n = len(d.names)
    return tuple(sorted({max(u, v) - n for u, v in edges}))


@dataclass(frozen=True)
class _HittingLayout:
    names: Tuple[str, ...]
    # sets over the padded universe, in element order
    sets: Tuple[Tuple[int, ...], ...]
    # padded universe index -> original universe index
    owner: Tuple[int, ...]
    x_ids: Tuple[Tuple[int, ...], ...]

    @property
    def x_count(self) -> int:
        return sum(len(ids) for ids in self.x_ids)


def _hitting_layout(h: HittingSetInstance) -> _HittingLayout:
    universe = list(h.universe)
    owner = list(range(len(universe)))
    sets: List[Tuple[int, ...]] = []
    for idx, members in enumerate(h.sets):
        if not members:
            raise _invalid(f"Множество S{idx + 1} пусто.")
        if len(members) == 1:
            # a lone element would meet its agent twice; pair it with a fresh one
            universe.append(f"d_{idx + 1}")
            owner.append(members[0])
            members = (members[0], len(universe) - 1)
        sets.append(tuple(members))

    x_names: List[str] = []
    x_ids: List[Tuple[int, ...]] = []
    for idx, members in enumerate(sets):
        x_ids.append(tuple(range(len(x_names), len(x_names) + len(members))))
        x_names.extend(f"x_{idx + 1}_{j + 1}" for j in range(len(members)))

    names = tuple(x_names) + tuple(universe)
    if len(set(names)) != len(names):
        raise _invalid("Имена элементов пересекаются с именами агентов.")
    return _HittingLayout(names, tuple(sets), tuple(owner), tuple(x_ids))


def reduce_hitting_set_to_mlvd(h: HittingSetInstance) -> PreferenceSystem:
    """
    One agent x_i_j per element slot of set S_i. The j-th element of S_i sees
    x_i_j and x_i_(j+1) (cyclically) and prefers the latter; across sets a
    higher set index is preferred. Agents rank elements by id, lowest first.
    """
    layout = _hitting_layout(h)
    offset = layout.x_count
    element_lists: Dict[int, List[Tuple[int, List[VertexId]]]] = {}
    agent_nbrs: Dict[VertexId, List[VertexId]] = {x: [] for ids in layout.x_ids for x in ids}

    for idx, members in enumerate(layout.sets):
        ids = layout.x_ids[idx]
        for j, elem in enumerate(members):
            here, nxt = ids[j], ids[(j + 1) % len(ids)]
            element_lists.setdefault(elem, []).append((idx, [nxt, here]))
            agent_nbrs[here].append(offset + elem)
            agent_nbrs[nxt].append(offset + elem)

    prefs: List[WeakOrder] = [WeakOrder.strict(sorted(agent_nbrs[x])) for x in range(offset)]
    for elem in range(len(layout.owner)):
        blocks = sorted(element_lists.get(elem, []), key=lambda pair: -pair[0])
        prefs.append(WeakOrder.strict([x for _, pair in blocks for x in pair]))
    return PreferenceSystem(layout.names, tuple(prefs))


def hitting_set_from_vertex_solution(
    h: HittingSetInstance, vertices: Iterable[VertexId]
) -> FrozenSet[int]:
    """Universe indices hit by a vertex deletion set of the reduced instance."""
    layout = _hitting_layout(h)
    slot: Dict[VertexId, Tuple[int, int]] = {
        x: (idx, j) for idx, ids in enumerate(layout.x_ids) for j, x in enumerate(ids)
    }
    out = set()
    for v in vertices:
        if v in slot:
            idx, j = slot[v]
            elem = layout.sets[idx][j]
        else:
            elem = v - layout.x_count
        out.add(layout.owner[elem])
    return frozenset(out)


# --- seeded random sources -----------------------------------------------


def _check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise _invalid(f"Вероятность {name}={p} должна лежать в [0, 1].")


def gen_random(n: int, edge_prob: float, tie_prob: float, seed: int) -> PreferenceSystem:
    """
    Random graph with independent edges; each vertex shuffles its neighbours
    and glues every adjacent pair of positions into a tie with tie_prob.
    """
    if n < 0:
        raise _invalid("Число вершин должно быть неотрицательным.")
    _check_probability("edge_prob", edge_prob)
    _check_probability("tie_prob", tie_prob)

    rng = random.Random(seed)
    nbrs: Dict[VertexId, List[VertexId]] = {v: [] for v in range(n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_prob:
                nbrs[u].append(v)
                nbrs[v].append(u)

    prefs = []
    for v in range(n):
        perm = sorted(nbrs[v])
        rng.shuffle(perm)
        groups: List[List[VertexId]] = []
        for x in perm:
            if groups and rng.random() < tie_prob:
                groups[-1].append(x)
            else:
                groups.append([x])
        prefs.append(WeakOrder.from_groups(groups))
    return PreferenceSystem(tuple(f"v{v + 1}" for v in range(n)), tuple(prefs))


def gen_random_digraph(n: int, m: int, seed: int) -> RawDigraph:
    if n < 0 or m < 0:
        raise _invalid("Размеры орграфа должны быть неотрицательными.")
    if m > 0 and n < 2:
        raise _invalid("Для дуг без петель нужно хотя бы две вершины.")
    rng = random.Random(seed)
    arcs = []
    for _ in range(m):
        tail, head = rng.sample(range(n), 2)
        arcs.append((tail, head))
    return RawDigraph(tuple(f"v{v + 1}" for v in range(n)), tuple(arcs))


def gen_random_hitting_set(
    universe_size: int, m: int, seed: int, max_set_size: Optional[int] = 3
) -> HittingSetInstance:
    if universe_size < 0 or m < 0:
        raise _invalid("Размеры экземпляра должны быть неотрицательными.")
    if m > 0 and universe_size < 1:
        raise _invalid("Непустое семейство требует непустого универсума.")
    rng = random.Random(seed)
    cap = min(universe_size, max_set_size or universe_size)
    sets = []
    for _ in range(m):
        size = rng.randint(1, cap)
        sets.append(tuple(sorted(rng.sample(range(universe_size), size))))
    return HittingSetInstance(tuple(f"u{x + 1}" for x in range(universe_size)), tuple(sets))


def raw_digraph_from_names(names: Sequence[str], arcs: Iterable[Tuple[str, str]]) -> RawDigraph:
    index = {name: k for k, name in enumerate(names)}
    return RawDigraph(tuple(names), tuple((index[a], index[b]) for a, b in arcs))
