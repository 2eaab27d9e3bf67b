from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from masterlist.domain.errors import InvalidParamsError, MasterListError
from masterlist.domain.preferences import PreferenceSystem
from masterlist.domain.results import EdgeWitness, MupmicInstance, MupmicResult, VertexWitness
from masterlist.services import generators, oracles
from masterlist.services.distances import (
    delta_edge_2approx,
    delta_edge_exact,
    delta_swap,
    delta_vert_exact,
    in_master_list_family,
)
from masterlist.services.instance_format import (
    format_edge,
    format_master_list,
    matching_to_json,
    parse_digraph,
    parse_edges,
    parse_instance,
    parse_vertices,
    parse_weights,
    serialize_instance,
)
from masterlist.services.popular import is_popular, solve_mupmic, solve_mupmic_auto
from masterlist.services.prefdigraph import (
    admits_master_list,
    build_digraph,
    find_strict_cycle,
    is_consistent,
)
from masterlist.services.stable import (
    OBJECTIVES,
    Objective,
    blocking_edges,
    brute_force_stable,
    enum_bp_edge_modulator,
    enum_bp_vertex_modulator,
    enum_stable,
    enum_with_modulator,
    find_modulator,
    optimize_over_stable,
    utility_weight,
)
from masterlist.services.swaps import (
    apply_swaps,
    delete_edges,
    delete_vertices,
    instance_swap_distance,
)
from masterlist.settings import Settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NONE = 1
EXIT_ERROR = 2

NONE = "NONE"


class ResultDocument(BaseModel):
    command: str
    value: Any = None
    witness: Any = None
    verified: bool = False
    elapsed_ms: float = 0.0


Outcome = Tuple[int, ResultDocument]
Handler = Callable[[argparse.Namespace, Settings], Outcome]


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> PreferenceSystem:
    return parse_instance(_read_text(path))


def _names(i: PreferenceSystem, ids: Any) -> List[str]:
    return [i.names[v] for v in sorted(ids)]


def _edges_json(i: PreferenceSystem, edges: Any) -> List[str]:
    return [format_edge(i, e) for e in sorted(edges)]


def _none(command: str, witness: Any = None, verified: bool = True) -> Outcome:
    doc = ResultDocument(command=command, value=NONE, witness=witness, verified=verified)
    return EXIT_NONE, doc


# --- check ---------------------------------------------------------------


def cmd_check(args: argparse.Namespace, settings: Settings) -> Outcome:
    i = _load(args.file)
    ml = admits_master_list(i)
    if ml is None:
        d = build_digraph(i)
        cycle = find_strict_cycle(d) or []
        arcs = [d.arcs[e] for e in cycle]
        closed = all(arcs[k].head == arcs[(k + 1) % len(arcs)].tail for k in range(len(arcs)))
        witness = [
            [i.names[a.tail], i.names[a.head], i.names[a.label], a.kind.value] for a in arcs
        ]
        return _none("check", witness, bool(arcs) and closed and any(a.is_strict for a in arcs))

    return EXIT_OK, ResultDocument(
        command="check",
        value=format_master_list(i, ml),
        witness=format_master_list(i, ml),
        verified=is_consistent(i, ml),
    )


# --- dist ----------------------------------------------------------------


def _dist_swap(i: PreferenceSystem, budget: Optional[int]) -> Outcome:
    limit = len(build_digraph(i).arcs) if budget is None else budget
    found = delta_swap(i, limit)
    if found is None:
        return _none("dist")

    witness_instance = found.witness_instance
    verified = in_master_list_family(witness_instance)
    distance = instance_swap_distance(i, witness_instance)
    verified = verified and not distance.infinite and distance.value == found.witness_distance
    witness: Dict[str, Any] = {
        "instance": serialize_instance(witness_instance),
        "witness_distance": found.witness_distance,
        "hitting_arcs": len(found.hitting_arcs),
    }
    if found.strict_swaps is not None:
        witness["swaps"] = [
            [i.names[s.a], i.names[s.b], i.names[s.v]] for s in found.strict_swaps
        ]
        verified = verified and apply_swaps(i, found.strict_swaps) == witness_instance
        verified = verified and found.value == distance.value
    return EXIT_OK, ResultDocument(
        command="dist", value=found.value, witness=witness, verified=verified
    )


def _dist_edge(
    i: PreferenceSystem, budget: Optional[int], mode: str, settings: Settings
) -> Outcome:
    limit = len(i.edges) if budget is None else budget
    if mode == "exact":
        found = delta_edge_exact(i, limit, settings)
    else:
        found = delta_edge_2approx(i, limit)
    if found is None:
        return _none("dist")
    verified = in_master_list_family(delete_edges(i, found.edges))
    if mode == "approx" and budget is not None:
        verified = verified and found.value <= 2 * budget
    return EXIT_OK, ResultDocument(
        command="dist", value=found.value, witness=_edges_json(i, found.edges), verified=verified
    )


def _dist_vert(i: PreferenceSystem, budget: Optional[int], settings: Settings) -> Outcome:
    found = delta_vert_exact(i, i.n if budget is None else budget, settings)
    if found is None:
        return _none("dist")
    verified = in_master_list_family(delete_vertices(i, found.vertices))
    return EXIT_OK, ResultDocument(
        command="dist", value=found.value, witness=_names(i, found.vertices), verified=verified
    )


def cmd_dist(args: argparse.Namespace, settings: Settings) -> Outcome:
    if args.budget is not None and args.budget < 0:
        raise InvalidParamsError(
            title="Invalid budget", detail="Бюджет должен быть неотрицательным."
        )
    if args.mode == "approx" and args.measure != "edge":
        raise InvalidParamsError(
            title="Approximation unavailable",
            detail="Приближённый режим есть только для удаления рёбер (--measure edge).",
        )
    i = _load(args.file)
    if args.measure == "swap":
        return _dist_swap(i, args.budget)
    if args.measure == "edge":
        return _dist_edge(i, args.budget, args.mode, settings)
    return _dist_vert(i, args.budget, settings)


# --- enum-stable ---------------------------------------------------------


def cmd_enum_stable(args: argparse.Namespace, settings: Settings) -> Outcome:
    i = _load(args.file)
    blocking = frozenset(parse_edges(i, args.blocking or []))
    if args.edge_modulator is not None:
        found = enum_bp_edge_modulator(i, blocking, parse_edges(i, args.edge_modulator), settings)
    elif args.vertex_modulator is not None:
        modulator = parse_vertices(i, args.vertex_modulator)
        found = enum_bp_vertex_modulator(i, blocking, modulator, settings)
    elif blocking:
        found = enum_with_modulator(i, blocking, find_modulator(i, settings), settings)
    else:
        found = enum_stable(i, settings)

    verified = all(blocking_edges(i, m) == blocking for m in found)
    verified = verified and len({m.key for m in found}) == len(found)
    return EXIT_OK, ResultDocument(
        command="enum-stable",
        value=len(found),
        witness=[matching_to_json(i, m) for m in found],
        verified=verified,
    )


# --- optimize ------------------------------------------------------------


def _objective(args: argparse.Namespace, i: PreferenceSystem) -> Objective:
    if args.objective != "utility":
        return OBJECTIVES[args.objective](i)
    if args.weights is None:
        raise InvalidParamsError(
            title="Missing weights", detail="Для цели utility нужен файл --weights."
        )
    utility, _ = parse_weights(i, _read_text(args.weights))
    return utility_weight(utility)


def cmd_optimize(args: argparse.Namespace, settings: Settings) -> Outcome:
    i = _load(args.file)
    objective = _objective(args, i)
    found = optimize_over_stable(i, objective, args.direction, settings)
    if found is None:
        return _none("optimize")
    m, value = found
    verified = not blocking_edges(i, m) and objective(m) == value
    return EXIT_OK, ResultDocument(
        command="optimize", value=value, witness=matching_to_json(i, m), verified=verified
    )


# --- mupmic --------------------------------------------------------------


def _mupmic_instance(args: argparse.Namespace, i: PreferenceSystem) -> MupmicInstance:
    utility, cost = parse_weights(i, _read_text(args.weights))
    return MupmicInstance(i, utility, cost, target=args.target, budget=args.budget)


def _mupmic_witness(i: PreferenceSystem, result: MupmicResult) -> Dict[str, Any]:
    return {
        "matching": matching_to_json(i, result.matching),
        "utility": result.utility,
        "cost": result.cost,
        "blocking": _edges_json(i, result.blocking),
    }


def _mupmic_verified(inst: MupmicInstance, result: MupmicResult) -> bool:
    i = inst.system
    blocking = blocking_edges(i, result.matching)
    utility = sum(inst.utility[e] for e in result.matching.edges)
    cost = sum(inst.cost[e] for e in blocking)
    return (
        blocking == result.blocking
        and utility == result.utility >= inst.target
        and cost == result.cost <= inst.budget
        and is_popular(i, result.matching, mode="weighted")
    )


def cmd_mupmic(args: argparse.Namespace, settings: Settings) -> Outcome:
    i = _load(args.file)
    inst = _mupmic_instance(args, i)
    modulator: EdgeWitness | VertexWitness
    if args.edge_modulator is not None:
        modulator = EdgeWitness(frozenset(parse_edges(i, args.edge_modulator)))
        result = solve_mupmic(inst, modulator, settings)
    elif args.vertex_modulator is not None:
        modulator = VertexWitness(frozenset(parse_vertices(i, args.vertex_modulator)))
        result = solve_mupmic(inst, modulator, settings)
    else:
        result = solve_mupmic_auto(inst, settings, use_swap_modulator=args.swap_modulator)
    if result is None:
        return _none("mupmic")
    return EXIT_OK, ResultDocument(
        command="mupmic",
        value=result.utility,
        witness=_mupmic_witness(i, result),
        verified=_mupmic_verified(inst, result),
    )


# --- gen -----------------------------------------------------------------


def _gen_text(args: argparse.Namespace) -> str:
    family = args.family
    if family == "four-cycles":
        return serialize_instance(generators.gen_four_cycles(args.k))
    if family == "jkn":
        return serialize_instance(generators.gen_jkn(args.k, args.n))
    if family == "random":
        i = generators.gen_random(args.n, args.edge_prob, args.tie_prob, args.seed)
        return serialize_instance(i)
    if family == "fas":
        if args.digraph:
            d = parse_digraph(_read_text(args.digraph))
        else:
            if args.n is None or args.m is None:
                raise InvalidParamsError(
                    title="Missing sizes",
                    detail="Нужно указать N и M либо --digraph FILE.",
                )
            d = generators.gen_random_digraph(args.n, args.m, args.seed)
        header = [f"# arc {d.names[a]} -> {d.names[b]}" for a, b in d.arcs]
        body = serialize_instance(generators.reduce_fas_to_ml(d))
        return "\n".join(header + [body]) if header else body
    h = generators.gen_random_hitting_set(args.universe, args.m, args.seed, args.max_set_size)
    header = [
        f"# set S{k + 1} = " + " ".join(h.universe[x] for x in members)
        for k, members in enumerate(h.sets)
    ]
    body = serialize_instance(generators.reduce_hitting_set_to_mlvd(h))
    return "\n".join(header + [body]) if header else body


def cmd_gen(args: argparse.Namespace, settings: Settings) -> Outcome:
    text = _gen_text(args)
    # the generated text must parse back to an instance
    parse_instance(text)
    return EXIT_OK, ResultDocument(command="gen", value=text, verified=True)


# --- oracle --------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace, settings: Settings) -> Outcome:
    i = _load(args.file)
    solver = args.solver
    if solver == "master-list":
        ml = oracles.brute_force_master_list(i, settings)
        agree = (ml is None) == (admits_master_list(i) is None)
        if ml is None:
            return _none("oracle", verified=agree)
        text = format_master_list(i, ml)
        return EXIT_OK, ResultDocument(command="oracle", value=text, witness=text, verified=agree)

    if solver == "swap":
        depth = oracles.brute_force_swap_distance(i, settings)
        if depth is None:
            return _none("oracle")
        main = delta_swap(i, depth)
        agree = main is not None and main.value == depth
        return EXIT_OK, ResultDocument(command="oracle", value=depth, verified=agree)

    if solver == "edge":
        edges = oracles.brute_force_edge_distance(i, settings)
        main_edge = delta_edge_exact(i, len(edges), settings)
        agree = main_edge is not None and main_edge.value == len(edges)
        return EXIT_OK, ResultDocument(
            command="oracle", value=len(edges), witness=_edges_json(i, edges), verified=agree
        )

    if solver == "vert":
        vertices = oracles.brute_force_vertex_distance(i, settings)
        main_vert = delta_vert_exact(i, len(vertices), settings)
        agree = main_vert is not None and main_vert.value == len(vertices)
        return EXIT_OK, ResultDocument(
            command="oracle", value=len(vertices), witness=_names(i, vertices), verified=agree
        )

    if solver == "stable":
        found = brute_force_stable(i, settings)
        agree = [m.key for m in found] == [m.key for m in enum_stable(i, settings)]
        return EXIT_OK, ResultDocument(
            command="oracle",
            value=len(found),
            witness=[matching_to_json(i, m) for m in found],
            verified=agree,
        )

    if solver == "popular":
        found_popular = oracles.popular_matchings(i, settings)
        agree = all(is_popular(i, m, mode="weighted") for m in found_popular)
        return EXIT_OK, ResultDocument(
            command="oracle",
            value=len(found_popular),
            witness=[matching_to_json(i, m) for m in found_popular],
            verified=agree,
        )

    # mupmic
    if args.weights is None:
        raise InvalidParamsError(
            title="Missing weights", detail="Для оракула mupmic нужен файл --weights."
        )
    inst = _mupmic_instance(args, i)
    best = oracles.brute_force_mupmic(inst, settings)
    main_result = solve_mupmic_auto(inst, settings)
    agree = (best is None) == (main_result is None)
    if best is None:
        return _none("oracle", verified=agree)
    agree = agree and main_result is not None and main_result.utility == best.utility
    return EXIT_OK, ResultDocument(
        command="oracle", value=best.utility, witness=_mupmic_witness(i, best), verified=agree
    )


# --- experiment ----------------------------------------------------------


def _experiment_row(seed: int, n: int, edge_prob: float, settings: Settings) -> Dict[str, Any]:
    i = generators.gen_random(n, edge_prob, 0.0, seed)
    swap = delta_swap(i, len(build_digraph(i).arcs))
    edge = delta_edge_exact(i, len(i.edges), settings)
    stable = enum_stable(i, settings)
    if swap is None or edge is None:
        raise RuntimeError("unbounded distance search returned nothing")
    ratio = math.log2(len(stable)) / swap.value if swap.value and stable else None
    return {
        "seed": seed,
        "swap": swap.value,
        "edge": edge.value,
        "stable": len(stable),
        "log2_stable_per_swap": None if ratio is None else round(ratio, 6),
        "ok": all(not blocking_edges(i, m) for m in stable),
    }


def cmd_experiment(args: argparse.Namespace, settings: Settings) -> Outcome:
    if args.count < 0 or args.n < 0:
        raise InvalidParamsError(
            title="Invalid experiment size",
            detail="Число экземпляров и вершин должно быть неотрицательным.",
        )
    rows = [
        _experiment_row(args.seed + k, args.n, args.edge_prob, settings) for k in range(args.count)
    ]
    verified = all(row.pop("ok") for row in rows)
    return EXIT_OK, ResultDocument(
        command="experiment", value=len(rows), witness=rows, verified=verified
    )


HANDLERS: Dict[str, Handler] = {
    "check": cmd_check,
    "dist": cmd_dist,
    "enum-stable": cmd_enum_stable,
    "mupmic": cmd_mupmic,
    "gen": cmd_gen,
    "oracle": cmd_oracle,
    "optimize": cmd_optimize,
    "experiment": cmd_experiment,
}


def _error_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False)


def dispatch(args: argparse.Namespace, settings: Settings) -> int:
    handler = HANDLERS[args.command]
    started = time.perf_counter()
    try:
        code, doc = handler(args, settings)
    except MasterListError as e:
        logger.info("%s failed: %s", args.command, e)
        sys.stdout.write(_error_json(e.to_dict()) + "\n")
        return EXIT_ERROR
    except (OSError, UnicodeDecodeError) as e:
        payload = {"title": "Input not readable", "detail": f"Не удалось прочитать ввод: {e}"}
        sys.stdout.write(_error_json(payload) + "\n")
        return EXIT_ERROR
    except Exception:  # noqa: BLE001
        logger.exception("unexpected failure in %s", args.command)
        sys.stdout.write(
            _error_json({"title": "Internal error", "detail": "Внутренняя ошибка вычисления."})
            + "\n"
        )
        return EXIT_ERROR

    elapsed = round((time.perf_counter() - started) * 1000, 3)
    if args.command == "gen" and not args.json:
        sys.stdout.write(doc.value)
        return code
    sys.stdout.write(doc.model_copy(update={"elapsed_ms": elapsed}).model_dump_json() + "\n")
    return code
