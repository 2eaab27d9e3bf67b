from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(eq=False)
class MasterListError(Exception):
    title: str
    detail: str

    def __str__(self) -> str:
        return f"{self.title}: {self.detail}"

    def extra(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "detail": self.detail,
            **self.extra(),
        }


@dataclass(eq=False)
class NotAdmissibleError(MasterListError):
    pass


@dataclass(eq=False)
class UnknownVertexError(MasterListError):
    vertex: Optional[str] = None

    def extra(self) -> Dict[str, Any]:
        return {"vertex": self.vertex}


@dataclass(eq=False)
class UnknownEdgeError(MasterListError):
    edge: Optional[Tuple[str, str]] = None

    def extra(self) -> Dict[str, Any]:
        return {"edge": list(self.edge) if self.edge else None}


@dataclass(eq=False)
class SwapsUndefinedError(MasterListError):
    # swaps that could not be consumed, as (a, b, v) name triples
    remainder: List[Tuple[str, str, str]] = field(default_factory=list)

    def extra(self) -> Dict[str, Any]:
        return {"remainder": [list(s) for s in self.remainder]}


@dataclass(eq=False)
class NotStrictError(MasterListError):
    pass


@dataclass(eq=False)
class NotConsistentError(MasterListError):
    pass


@dataclass(eq=False)
class ModulatorInvalidError(MasterListError):
    pass


@dataclass(eq=False)
class TooLargeError(MasterListError):
    size: int = 0
    cap: int = 0

    def extra(self) -> Dict[str, Any]:
        return {"size": self.size, "cap": self.cap}


@dataclass(eq=False)
class InvalidParamsError(MasterListError):
    pass


@dataclass(eq=False)
class ParseError(MasterListError):
    line: int = 0

    def extra(self) -> Dict[str, Any]:
        return {"line": self.line}


@dataclass(eq=False)
class SymmetryError(MasterListError):
    pair: Tuple[str, str] = ("", "")

    def extra(self) -> Dict[str, Any]:
        return {"pair": list(self.pair)}


@dataclass(eq=False)
class ConfigError(MasterListError):
    pass
