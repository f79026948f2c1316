"""Run configuration: JSON file plus command-line overrides, validated by a schema."""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema

from .errors import InputError

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_matrix = {"type": "array", "items": {"type": "array", "items": _num, "minItems": 1}, "minItems": 1}

SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "system": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"const": "fhn"},
                        "a": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
                        "gamma": _pos,
                        "d": _pos,
                        "orientation": {"enum": ["auto", "high-to-low", "low-to-high"]},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"const": "nagumo"},
                        "a": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "n", "r", "B_minus", "B_plus"],
                    "properties": {
                        "kind": {"const": "matrices"},
                        "n": {"type": "integer", "minimum": 1},
                        "r": {"type": "integer", "minimum": 0},
                        "B_minus": _matrix,
                        "B_plus": _matrix,
                    },
                },
            ]
        },
        "bvp": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "Xi": _pos,
                "nodes": {"type": "integer", "minimum": 100},
                "tol_newton": _pos,
                "tol_bc": _pos,
                "tol_res": _pos,
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambda_grid": {"type": "integer", "minimum": 5},
                "delta0": _pos,
                "C": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "S_nodes": {"type": "integer", "minimum": 200},
                "tau_samples": {"type": "integer", "minimum": 21},
            },
        },
        "check": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "require": {
                    "type": "array",
                    "items": {"enum": ["H1", "H2", "H2prime", "d_gt_gamma_inv2"]},
                },
            },
        },
        "profile": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"csv": {"type": "string"}, "meta": {"type": "string"}},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}},
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}

DEFAULTS: Dict[str, Any] = {
    "system": {"kind": "fhn", "a": 0.25, "gamma": 10.0, "d": 1.0, "orientation": "auto"},
    "bvp": {"Xi": 40.0, "nodes": 2000, "tol_newton": 1e-11, "tol_bc": 1e-6, "tol_res": 1e-8},
    "sweep": {"lambda_grid": 50, "delta0": 1e-4, "C": None, "S_nodes": 2001, "tau_samples": 201},
    "check": {"require": ["H1", "H2prime", "d_gt_gamma_inv2"]},
    "output": {"dir": "out"},
    "seed": 0,
}

SYSTEM_DEFAULTS = {
    "fhn": DEFAULTS["system"],
    "nagumo": {"kind": "nagumo", "a": 0.25},
    "matrices": {},
}


def validate(cfg: Dict[str, Any]) -> None:
    """Raise InputError listing schema violations (unknown keys included)."""
    v = jsonschema.Draft202012Validator(SCHEMA)
    errs = sorted(v.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errs:
        lines = []
        for e in errs:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            lines.append(f"{where}: {e.message}")
        raise InputError("invalid configuration:\n  " + "\n  ".join(lines))
    sysb = cfg.get("system", {})
    if sysb.get("kind") == "matrices":
        n, r = sysb["n"], sysb["r"]
        if r > n:
            raise InputError("invalid configuration:\n  system/r: must not exceed n")
        for key in ("B_minus", "B_plus"):
            M = sysb[key]
            if len(M) != n or any(len(row) != n for row in M):
                raise InputError(f"invalid configuration:\n  system/{key}: must be {n} x {n}")


def merged(user: Dict[str, Any]) -> Dict[str, Any]:
    """Defaults overlaid by a validated user config (one level deep)."""
    validate(user)
    out = copy.deepcopy(DEFAULTS)
    if "system" in user:
        out["system"] = copy.deepcopy(SYSTEM_DEFAULTS.get(user["system"]["kind"], {}))
    for key, val in user.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key].update(copy.deepcopy(val))
        else:
            out[key] = copy.deepcopy(val)
    validate(out)
    return out


def load_config(path) -> Dict[str, Any]:
    """Read a JSON config file (no defaults applied)."""
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc


def save_config(cfg: Dict[str, Any], path) -> Path:
    """Write a config so that :func:`load_config` gives back equal values (floats via repr)."""
    path = Path(path)
    path.write_text(canonical_json(cfg) + "\n")
    return path


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def config_hash(cfg: Dict[str, Any]) -> str:
    """SHA-256 of the canonical JSON of everything except the output location."""
    cfg = {k: v for k, v in cfg.items() if k != "output"}
    return hashlib.sha256(json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def apply_overrides(cfg: Dict[str, Any], overrides: Dict[str, Optional[Any]]) -> Dict[str, Any]:
    """Set dotted keys ("sweep.delta0") whose override value is not None."""
    out = copy.deepcopy(cfg)
    for dotted, val in overrides.items():
        if val is None:
            continue
        node = out
        parts = dotted.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = val
    return out
