"""Toolkit configuration: built-in defaults plus optional user overrides.

Defaults live in ``orbitload/data/defaults.json`` (versioned, schema below)
and are the single source of truth for every tunable threshold: rubric
bands, scoring weights, cloud-regime bounds, pipeline parameters, and link
unit conventions.  A user config file is a JSON document with the same
shape; sections and keys it provides override the defaults key-by-key,
everything else keeps the built-in value.

Top-level sections: ``suitability``, ``eo``, ``depth``, ``link``.  The
phase-fit registry is a separate file (``data/phase_fits.json``) loaded by
:mod:`orbitload.suitability`.
"""

from __future__ import annotations

import copy
import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any

_SECTIONS = ("suitability", "eo", "depth", "link")


def _load_packaged(name: str) -> dict:
    with resources.files("orbitload.data").joinpath(name).open("rb") as fh:
        return json.load(fh)


def default_config() -> dict:
    """A fresh copy of the built-in defaults."""
    return copy.deepcopy(_DEFAULTS)


def load_config(path: str | Path | None = None) -> dict:
    """Defaults merged with the user config file at ``path`` (if given)."""
    cfg = default_config()
    if path is None:
        return cfg
    with open(path, "rb") as fh:
        user = json.load(fh)
    if not isinstance(user, dict):
        raise ValueError(f"config file {path}: expected a JSON object")
    version = user.get("config_version", 1)
    if version != 1:
        raise ValueError(f"config file {path}: unsupported config_version {version}")
    for section, values in user.items():
        if section == "config_version":
            continue
        if section not in _SECTIONS:
            raise ValueError(f"config file {path}: unknown section {section!r}")
        if not isinstance(values, dict):
            raise ValueError(f"config file {path}: section {section!r} must be an object")
        for key, value in values.items():
            if key not in cfg[section]:
                raise ValueError(f"config file {path}: unknown key {section}.{key}")
            cfg[section][key] = value
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    suit = cfg["suitability"]
    weights = suit["weights"]
    if len(weights) != 5 or any(w < 0 for w in weights):
        raise ValueError("suitability.weights must be five nonnegative numbers")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("suitability.weights must sum to 1")
    for key in ("latency_thresholds_s", "bandwidth_thresholds"):
        thr = suit[key]
        if len(thr) != 4 or sorted(thr) != list(thr):
            raise ValueError(f"suitability.{key} must be four ascending numbers")
    eo = cfg["eo"]
    if not eo["cloud_classes"]:
        raise ValueError("eo.cloud_classes must be nonempty")
    if not 0 < eo["patch_threshold"] <= 1:
        raise ValueError("eo.patch_threshold must be in (0, 1]")
    for name, (lo, hi) in eo["regimes"].items():
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"eo.regimes.{name} bounds must satisfy 0 <= lo <= hi <= 1")
    depth = cfg["depth"]
    if depth["window_px"] % 2 == 0 or depth["window_px"] < 3:
        raise ValueError("depth.window_px must be odd and >= 3")
    if depth["quantization_bits"] not in (8, 16):
        raise ValueError("depth.quantization_bits must be 8 or 16")


def config_hash(cfg: dict) -> str:
    """Stable short hash of an effective config, for output provenance."""
    text = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def dump_config(cfg: dict, path: str | Path) -> None:
    from ._fileio import atomic_write_json

    out = {"config_version": 1, **{s: cfg[s] for s in _SECTIONS}}
    atomic_write_json(path, out)


_DEFAULTS: dict[str, Any] = _load_packaged("defaults.json")
validate_config(_DEFAULTS)
