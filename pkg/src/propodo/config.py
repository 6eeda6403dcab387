"""Configuration files, seed derivation and content hashing.

Configs are plain JSON objects with flat scalar/list keys per section, so a
run is fully described by one human-editable text file. All randomness in a
pipeline flows from a single root seed, split per stage and per consumer with
``numpy.random.SeedSequence`` so any stage can be re-run in isolation.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1

# fixed stage indices so seeds do not depend on execution order
_STAGE_KEYS = {"simulate": 0, "stats": 1, "train": 2, "fuse": 3, "eval": 4}


def to_plain(obj):
    """Recursively convert dataclasses / numpy values to JSON-able types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, separators=(",", ":"))


def config_hash(obj) -> str:
    """Stable content hash of any config-like object."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


def save_json(obj, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_plain(obj), indent=2, sort_keys=True) + "\n")


def load_json(path):
    return json.loads(Path(path).read_text())


def stage_seed(root_seed: int, stage: str, index: int = 0) -> np.random.SeedSequence:
    """Derive the seed sequence for one pipeline stage.

    ``index`` distinguishes independent consumers inside a stage (e.g.
    per-trajectory or per-member streams).
    """
    if stage not in _STAGE_KEYS:
        raise ValueError(f"unknown stage {stage!r}, expected one of {sorted(_STAGE_KEYS)}")
    return np.random.SeedSequence(entropy=root_seed, spawn_key=(_STAGE_KEYS[stage], index))


def hash_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()[:16]


def hash_tree(root) -> str:
    """Content hash of a directory: file names and file contents."""
    root = Path(root)
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode())
            h.update(hash_file(p).encode())
    return h.hexdigest()[:16]
