from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from masterlist.cli.commands import EXIT_ERROR, dispatch
from masterlist.domain.errors import ConfigError
from masterlist.services.stable import OBJECTIVES
from masterlist.settings import Settings, load_settings


def _token_list(value: str) -> List[str]:
    """"a--b,c--d" or "u,v"; an empty value gives an empty list."""
    return [token.strip() for token in value.split(",") if token.strip()]


def _add_file(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", help="файл экземпляра или '-' для stdin")


def _add_mupmic_params(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--weights", required=required, help="файл 'a -- b : полезность стоимость'")
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--budget", type=int, default=0)


def _add_gen(sub: argparse._SubParsersAction) -> None:
    gen = sub.add_parser("gen", help="сгенерировать экземпляр")
    gen.add_argument("--json", action="store_true", help="обернуть текст в JSON-результат")
    families = gen.add_subparsers(dest="family", required=True)

    p = families.add_parser("four-cycles")
    p.add_argument("k", type=int)

    p = families.add_parser("jkn")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)

    p = families.add_parser("random")
    p.add_argument("n", type=int)
    p.add_argument("edge_prob", type=float)
    p.add_argument("tie_prob", type=float)

    p = families.add_parser("fas", help="сведение орграфа к экземпляру")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--digraph", help="орграф из файла вместо случайного")

    p = families.add_parser("hitting-set", help="сведение задачи о покрытии к экземпляру")
    p.add_argument("universe", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--max-set-size", type=int, default=3)

    for family in families.choices.values():
        family.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="masterlist",
        description="Расстояние до мастер-списка и устойчивые паросочетания.",
    )
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--config", default=None, help="JSON-файл настроек")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="найти мастер-список")
    _add_file(p)

    p = sub.add_parser("dist", help="расстояние до семейства с мастер-списком")
    p.add_argument("--measure", choices=["swap", "edge", "vert"], default="swap")
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    p.add_argument("--budget", type=int, default=None)
    _add_file(p)

    p = sub.add_parser("enum-stable", help="перечислить паросочетания с заданными блокирующими")
    modulator = p.add_mutually_exclusive_group()
    modulator.add_argument("--edge-modulator", type=_token_list, metavar="A--B,...")
    modulator.add_argument("--vertex-modulator", type=_token_list, metavar="V,...")
    modulator.add_argument("--auto", action="store_true")
    p.add_argument("--blocking", type=_token_list, default=[], metavar="A--B,...")
    _add_file(p)

    p = sub.add_parser("mupmic", help="популярное паросочетание максимальной полезности")
    _add_mupmic_params(p, required=True)
    modulator = p.add_mutually_exclusive_group()
    modulator.add_argument("--edge-modulator", type=_token_list, metavar="A--B,...")
    modulator.add_argument("--vertex-modulator", type=_token_list, metavar="V,...")
    modulator.add_argument("--swap-modulator", action="store_true")
    _add_file(p)

    _add_gen(sub)

    p = sub.add_parser("oracle", help="переборные проверки")
    p.add_argument(
        "solver", choices=["master-list", "swap", "edge", "vert", "stable", "popular", "mupmic"]
    )
    _add_mupmic_params(p, required=False)
    _add_file(p)

    p = sub.add_parser("optimize", help="оптимум по устойчивым паросочетаниям")
    p.add_argument("--objective", choices=[*sorted(OBJECTIVES), "utility"], default="egalitarian")
    p.add_argument("--direction", choices=["min", "max"], default="min")
    p.add_argument("--weights", help="файл весов для цели utility")
    _add_file(p)

    p = sub.add_parser("experiment", help="число устойчивых паросочетаний против расстояния")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config)
    except ConfigError as e:
        sys.stdout.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
        return EXIT_ERROR

    update = {}
    if args.threads is not None:
        update["threads"] = args.threads
    if args.log_level is not None:
        update["log_level"] = args.log_level.upper()
    if update:
        try:
            settings = Settings.model_validate({**settings.model_dump(), **update})
        except ValidationError:
            error = ConfigError(
                title="Invalid flags",
                detail="Недопустимые значения --threads или --log-level.",
            )
            sys.stdout.write(json.dumps(error.to_dict(), ensure_ascii=False) + "\n")
            return EXIT_ERROR

    logging.basicConfig(
        stream=sys.stderr,
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return dispatch(args, settings)


if __name__ == "__main__":
    sys.exit(main())
