"""Effective configuration: matching weights, detector tolerances, severity ramps."""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass

from .errors import ConfigError

CONFIG_ENV_VAR = "GUI_VERIFY_CONFIG"


@dataclass(frozen=True)
class Config:
    # matching
    w_spatial: float = 0.5
    w_type: float = 0.3
    w_text: float = 0.2
    match_threshold: float = 0.4
    match_by_id: bool = False
    # detector tolerances
    pos_tol: float = 5
    size_tol: float = 5
    text_color_tol: float = 10.0
    color_tol: float = 10.0
    image_tol: float = 0.2
    text_size_tol: float = 0.1
    jnd: float = 2.3
    # severity = min(1, excess / scale)
    layout_severity_scale: float = 50.0
    color_severity_scale: float = 50.0
    text_content_severity_scale: float = 1.0
    text_size_severity_scale: float = 0.5
    image_severity_scale: float = 0.5

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "match_by_id":
                if not isinstance(value, bool):
                    raise ConfigError(f"field '{f.name}': expected a boolean", field=f.name)
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"field '{f.name}': expected a number, got {value!r}", field=f.name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"field '{f.name}': must be finite and >= 0, got {value}", field=f.name)
        for name in ("layout_severity_scale", "color_severity_scale", "text_content_severity_scale",
                     "text_size_severity_scale", "image_severity_scale"):
            if getattr(self, name) == 0:
                raise ConfigError(f"field '{name}': must be > 0", field=name)
        if self.match_threshold > 1:
            raise ConfigError("field 'match_threshold': must be <= 1", field="match_threshold")
        total = self.w_spatial + self.w_type + self.w_text
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(
                f"fields 'w_spatial', 'w_type', 'w_text': weights sum to {total}, expected 1",
                field="w_spatial",
            )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, doc: dict) -> "Config":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        for key in doc:
            if key not in known:
                raise ConfigError(f"field '{key}': unknown config field", field=key)
        return cls(**doc)


def parse_config(data: bytes | str) -> Config:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return Config.from_dict(doc)


def load_config(path=None) -> Config:
    """Load a config file; falls back to ``$GUI_VERIFY_CONFIG``, then defaults."""
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return Config()
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data)
