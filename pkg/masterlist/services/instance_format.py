from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from masterlist.domain.digraph import MasterList
from masterlist.domain.errors import ParseError
from masterlist.domain.matching import Matching
from masterlist.domain.preferences import Edge, PreferenceSystem
from masterlist.domain.results import RawDigraph
from masterlist.services.generators import raw_digraph_from_names


def _parse_error(line: int, detail: str) -> ParseError:
    return ParseError(title="Parse error", detail=f"Строка {line}: {detail}", line=line)


def _content_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def _split_groups(line: int, body: str) -> List[List[str]]:
    groups: List[List[str]] = []
    for chunk in body.split(">"):
        members = [m.strip() for m in chunk.split("=")]
        if any(not m for m in members):
            raise _parse_error(line, "пустое имя в группе предпочтений.")
        groups.append(members)
    return groups


def parse_instance(text: str) -> PreferenceSystem:
    """
    One line per vertex: "name : a = b > c". Ids follow declaration order;
    every listed neighbour must be declared somewhere in the text.
    """
    names: List[str] = []
    orders: Dict[str, List[List[str]]] = {}
    first_ref: Dict[str, int] = {}

    for number, line in _content_lines(text):
        if ":" not in line:
            raise _parse_error(number, "ожидается разделитель ':'.")
        head, body = line.split(":", 1)
        name = head.strip()
        if not name:
            raise _parse_error(number, "пустое имя вершины.")
        if name in orders:
            raise _parse_error(number, f"вершина {name} объявлена повторно.")

        groups = _split_groups(number, body) if body.strip() else []
        flat = [m for g in groups for m in g]
        if len(set(flat)) != len(flat):
            raise _parse_error(number, f"повторяющийся сосед в списке вершины {name}.")
        for member in flat:
            first_ref.setdefault(member, number)
        names.append(name)
        orders[name] = groups

    for member, number in first_ref.items():
        if member not in orders:
            raise _parse_error(number, f"вершина {member} не объявлена.")
    return PreferenceSystem.from_named(names, orders)


def serialize_instance(i: PreferenceSystem) -> str:
    lines = []
    for v in i.vertices:
        groups = [" = ".join(i.names[x] for x in sorted(g)) for g in i.order(v).groups]
        body = " > ".join(groups)
        lines.append(f"{i.names[v]} : {body}".rstrip())
    return "\n".join(lines) + "\n"


def format_master_list(i: PreferenceSystem, ml: MasterList) -> str:
    return " > ".join(" = ".join(i.names[x] for x in sorted(g)) for g in ml.groups)


def parse_master_list(i: PreferenceSystem, text: str) -> MasterList:
    body = " ".join(line for _, line in _content_lines(text))
    groups = []
    seen = set()
    for members in _split_groups(1, body):
        ids = []
        for name in members:
            if name not in i.names:
                raise _parse_error(1, f"вершина {name} не объявлена.")
            v = i.index_of(name)
            if v in seen:
                raise _parse_error(1, f"вершина {name} встречается в мастер-списке дважды.")
            seen.add(v)
            ids.append(v)
        groups.append(frozenset(ids))
    if len(seen) != i.n:
        raise _parse_error(1, "мастер-список должен содержать все вершины экземпляра.")
    return MasterList(tuple(groups))


def parse_edge_token(i: PreferenceSystem, token: str, line: int = 0) -> Edge:
    """Accepts "a--b" as well as "a -- b"."""
    parts = [p.strip() for p in token.split("--")]
    if len(parts) != 2 or not all(parts):
        raise _parse_error(line, f"ребро {token!r} должно иметь вид a--b.")
    for name in parts:
        if name not in i.names:
            raise _parse_error(line, f"вершина {name} не объявлена.")
    edge = i.edge_of(parts[0], parts[1])
    if edge is None:
        raise _parse_error(line, f"ребра {parts[0]} -- {parts[1]} нет в экземпляре.")
    return edge


def parse_edges(i: PreferenceSystem, tokens: Sequence[str]) -> List[Edge]:
    return [parse_edge_token(i, token) for token in tokens]


def parse_vertices(i: PreferenceSystem, tokens: Sequence[str]) -> List[int]:
    out = []
    for name in tokens:
        if name not in i.names:
            raise _parse_error(0, f"вершина {name} не объявлена.")
        out.append(i.index_of(name))
    return out


def parse_weights(i: PreferenceSystem, text: str) -> Tuple[Dict[Edge, int], Dict[Edge, int]]:
    """Lines "a -- b : utility cost"; returns (utility, cost)."""
    utility: Dict[Edge, int] = {}
    cost: Dict[Edge, int] = {}
    for number, line in _content_lines(text):
        if ":" not in line:
            raise _parse_error(number, "ожидается 'a -- b : полезность стоимость'.")
        token, values = line.split(":", 1)
        edge = parse_edge_token(i, token, number)
        if edge in utility:
            raise _parse_error(number, "веса ребра заданы повторно.")
        fields = values.split()
        if len(fields) != 2:
            raise _parse_error(number, "нужны ровно два числа: полезность и стоимость.")
        try:
            utility[edge], cost[edge] = int(fields[0]), int(fields[1])
        except ValueError:
            raise _parse_error(number, "веса должны быть целыми числами.") from None
    return utility, cost


def format_weights(i: PreferenceSystem, utility: Dict[Edge, int], cost: Dict[Edge, int]) -> str:
    lines = [f"{format_edge(i, e)} : {utility[e]} {cost[e]}" for e in i.edges]
    return "\n".join(lines) + "\n"


def format_edge(i: PreferenceSystem, e: Edge) -> str:
    a, b = i.edge_names(e)
    return f"{a} -- {b}"


def format_matching(i: PreferenceSystem, m: Matching) -> List[str]:
    return [format_edge(i, e) for e in m.key]


def parse_matching(i: PreferenceSystem, text: str) -> Matching:
    edges = [parse_edge_token(i, line, number) for number, line in _content_lines(text)]
    try:
        return Matching.of(edges)
    except ValueError:
        raise _parse_error(0, "рёбра паросочетания пересекаются.") from None


def matching_to_json(i: PreferenceSystem, m: Optional[Matching]) -> Optional[List[List[str]]]:
    if m is None:
        return None
    return [list(i.edge_names(e)) for e in m.key]


def parse_digraph(text: str) -> RawDigraph:
    """Lines "a -> b" for arcs; a bare "a" declares a vertex. Names in first-seen order."""
    names: List[str] = []
    arcs: List[Tuple[str, str]] = []

    def see(name: str) -> None:
        if name not in names:
            names.append(name)

    for number, line in _content_lines(text):
        if "->" not in line:
            see(line)
            continue
        parts = [p.strip() for p in line.split("->")]
        if len(parts) != 2 or not all(parts):
            raise _parse_error(number, "дуга должна иметь вид a -> b.")
        if parts[0] == parts[1]:
            raise _parse_error(number, f"петля в вершине {parts[0]} недопустима.")
        see(parts[0])
        see(parts[1])
        arcs.append((parts[0], parts[1]))
    return raw_digraph_from_names(names, arcs)


def serialize_digraph(d: RawDigraph) -> str:
    lines = list(d.names)
    lines += [f"{d.names[a]} -> {d.names[b]}" for a, b in d.arcs]
    return "\n".join(lines) + "\n"
