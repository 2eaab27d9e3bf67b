from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from masterlist.domain.errors import ConfigError

CONFIG_ENV = "MASTERLIST_CONFIG"


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    threads: int = Field(default=1, ge=1)
    # exhaustive searches refuse instances with more edges than this
    brute_force_edge_cap: int = Field(default=40, ge=0)
    popularity_exhaustive_edge_cap: int = Field(default=24, ge=0)
    popularity_matching_cap: int = Field(default=200_000, ge=1)
    swap_oracle_depth: int = Field(default=3, ge=0)
    weak_order_oracle_vertex_cap: int = Field(default=7, ge=0)
    # exact vertex modulators are only tried up to this many vertices
    vertex_modulator_vertex_cap: int = Field(default=12, ge=0)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"


@lru_cache(maxsize=8)
def load_settings(config_path: Optional[str] = None) -> Settings:
    path_str = config_path or os.environ.get(CONFIG_ENV)
    if not path_str:
        return Settings()

    path = Path(path_str)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(
            title="Config not readable",
            detail=f"Не удалось прочитать файл настроек {path}: {exc.strerror}.",
        ) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            title="Config is not JSON",
            detail=f"Файл настроек {path} содержит некорректный JSON (строка {exc.lineno}).",
        ) from exc

    try:
        return Settings.model_validate(raw)
    except ValidationError as exc:
        fields = ", ".join(".".join(str(p) for p in err["loc"]) for err in exc.errors())
        raise ConfigError(
            title="Invalid config",
            detail=f"Недопустимые значения настроек: {fields}.",
        ) from exc
