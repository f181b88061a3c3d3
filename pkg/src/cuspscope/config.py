"""Run configuration: JSON schema, defaults and resolution.

A config is a JSON object with optional sections; missing keys take the
defaults in :data:`DEFAULTS`, and the resolved config (every default made
explicit) is embedded in every report.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .engine import ScaleGrid
from .wavelets import WaveletSpec

__all__ = ["ConfigError", "SCHEMA", "DEFAULTS", "RunConfig", "load_config", "wavelet_from_config",
           "scales_from_config"]


class ConfigError(ValueError):
    """Unreadable or schema-violating configuration."""


_WAVELET = {
    "type": "object",
    "properties": {
        "kind": {"type": "string"},
        "dimension": {"type": "integer", "enum": [1, 2]},
        "params": {"type": "object"},
        "norm": {"type": "number", "exclusiveMinimum": 0},
        "normalized": {"type": "boolean"},
    },
    "required": ["kind"],
}

_VEC = {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 2}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cuspscope run configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_points": {"type": "integer", "minimum": 2},
                "length": {"type": "number", "exclusiveMinimum": 0},
                "dimension": {"type": "integer", "enum": [1, 2]},
            },
        },
        "scales": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["resolvable", "full-band", "explicit"]},
                "a_min": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "a_max": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "count": {"type": "integer", "minimum": 1},
            },
        },
        "wavelets": {"type": "array", "items": _WAVELET, "minItems": 1},
        "signal": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "generator": {"enum": ["holder-cusp", "composite-cusp", "oscillating-cusp",
                                       "rough", "band-limited", "zero", "file"]},
                "params": {"type": "object"},
                "path": {"type": ["string", "null"]},
            },
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "paths": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {"xi": _VEC, "gamma": {"type": "number", "exclusiveMinimum": 1}},
                        "required": ["xi", "gamma"],
                    },
                },
                "apex": {"anyOf": [_VEC, {"type": "null"}]},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "alpha_grid": {"type": "array", "items": {"type": "number"}},
                "window": {"anyOf": [{"type": "array", "items": {"type": "number"},
                                      "minItems": 2, "maxItems": 2}, {"type": "null"}]},
                "window_steps": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "cutoff": {"type": "number", "exclusiveMinimum": 0},
                "min_decades": {"type": "number", "minimum": 0},
            },
        },
        "separation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "pairs": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {"omega": {"type": "object"}, "sigma": {"type": "object"},
                                       "eps": {"type": "number", "exclusiveMinimum": 0},
                                       "name": {"type": "string"}},
                        "required": ["omega", "sigma"],
                    },
                },
                "lattice": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "b_min": {"type": "number"}, "b_max": {"type": "number"},
                        "n_b": {"type": "integer", "minimum": 1},
                        "a_min": {"type": "number", "exclusiveMinimum": 0},
                        "a_max": {"type": "number", "exclusiveMinimum": 0},
                        "n_a": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
        "elliptic": {
            "anyOf": [{"type": "null"}, {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "domain": {"type": "object"},
                    "xi": _VEC,
                    "gamma": {"type": "number"},
                    "alpha": {"type": "number"},
                    "wavelet": _WAVELET,
                    "n_points": {"type": "integer", "minimum": 16},
                    "eps": {"type": "number", "exclusiveMinimum": 0},
                    "window": {"anyOf": [{"type": "array", "items": {"type": "number"},
                                          "minItems": 2, "maxItems": 2}, {"type": "null"}]},
                    "n_scales": {"type": "integer", "minimum": 4},
                },
            }],
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"checks": {"type": "array", "items": {"type": "string"}}},
        },
    },
}

DEFAULTS: dict = {
    "seed": 0,
    "grid": {"n_points": 1024, "length": 1.0, "dimension": 2},
    "scales": {"kind": "resolvable", "a_min": None, "a_max": None, "count": 56},
    "wavelets": [{"kind": "gaussian-derivative", "params": {"order": 4}},
                 {"kind": "gaussian-derivative", "params": {"order": 6}}],
    "signal": {
        "generator": "composite-cusp",
        "params": {"domain": {"apex": [0.2, 0.5], "axis": [1.0, 0.0], "degree": 2.0,
                              "width": 3.0, "extent": 0.6},
                   "inside": {"kind": "constant", "value": 4.0}, "beta": 0.3},
        "path": None,
    },
    "analysis": {
        "paths": [{"xi": [1.0, 0.0], "gamma": 3.0}, {"xi": [1.0, 0.0], "gamma": 1.2},
                  {"xi": [0.0, 1.0], "gamma": 3.0}],
        "apex": None,
        "eps": 0.25,
        "alpha_grid": [0.3, 0.5, 1.0],
        "window": None,
        "window_steps": 3.0,
        "cutoff": 6.0,
        "min_decades": 1.0,
    },
    "separation": {
        "pairs": [
            {"name": "strips (2, 1)", "eps": 0.25,
             "omega": {"family": "parabolic-strip",
                       "params": {"exponent": 2.0, "side": "below", "a_max": 0.5}},
             "sigma": {"family": "parabolic-strip",
                       "params": {"exponent": 1.0, "side": "above", "a_max": 0.5}}},
            {"name": "strips (1, 2)", "eps": 0.25,
             "omega": {"family": "parabolic-strip",
                       "params": {"exponent": 1.0, "side": "below", "a_max": 0.5}},
             "sigma": {"family": "parabolic-strip",
                       "params": {"exponent": 2.0, "side": "above", "a_max": 0.5}}},
        ],
        "lattice": {"b_min": -4.0, "b_max": 4.0, "n_b": 161, "a_min": 1e-3, "a_max": 1e3, "n_a": 61},
    },
    "elliptic": {
        "domain": {"apex": [0.2, 0.5], "axis": [1.0, 0.0], "degree": 2.0, "width": 3.0, "extent": 0.3},
        "xi": [1.0, 0.0],
        "gamma": 3.0,
        "alpha": 0.5,
        "wavelet": {"kind": "gaussian-derivative", "params": {"order": 6}},
        "n_points": 512,
        "eps": 0.25,
        "window": None,
        "n_scales": 48,
    },
    "verify": {"checks": ["geometry", "admissibility", "reconstruction_1d", "reconstruction_2d",
                          "energy", "cross_kernel", "projector", "transfer"]},
}


def _merge(base: Any, override: Any) -> Any:
    if isinstance(base, dict) and isinstance(override, Mapping):
        out = dict(base)
        for k, v in override.items():
            out[k] = _merge(base.get(k), v) if k in base else copy.deepcopy(v)
        return out
    return copy.deepcopy(override)


@dataclass
class RunConfig:
    """Resolved configuration (defaults merged, schema-validated)."""

    data: dict

    @classmethod
    def from_dict(cls, d: Mapping[str, Any] | None = None) -> "RunConfig":
        d = dict(d or {})
        try:
            jsonschema.validate(d, SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"config invalid at {'/'.join(map(str, exc.absolute_path)) or '<root>'}: "
                              f"{exc.message}") from exc
        return cls(_merge(copy.deepcopy(DEFAULTS), d))

    def __getitem__(self, key: str):
        return self.data[key]

    def with_overrides(self, **kw) -> "RunConfig":
        d = copy.deepcopy(self.data)
        for k, v in kw.items():
            if v is not None:
                d[k] = v
        return RunConfig(d)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.data)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig.from_dict({})
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(d)


def wavelet_from_config(d: Mapping[str, Any], dimension: int) -> WaveletSpec:
    from .wavelets import normalized

    d = dict(d)
    want_norm = bool(d.pop("normalized", False))
    d.setdefault("dimension", dimension)
    w = WaveletSpec.from_dict(d)
    return normalized(w) if want_norm else w


def scales_from_config(d: Mapping[str, Any], n_points: int, length: float, dimension: int) -> ScaleGrid:
    kind = d.get("kind", "resolvable")
    count = int(d.get("count", 40))
    if kind == "full-band":
        return ScaleGrid.full_band(n_points, length, dimension, count)
    if kind == "explicit":
        if d.get("a_min") is None or d.get("a_max") is None:
            raise ConfigError("explicit scales need a_min and a_max")
        return ScaleGrid(float(d["a_min"]), float(d["a_max"]), count)
    dx = length / n_points
    a_min = d.get("a_min") or 2 * dx
    a_max = d.get("a_max") or 0.25 * length
    return ScaleGrid(float(a_min), float(a_max), count)
