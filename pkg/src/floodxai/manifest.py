"""Run manifests, canonical JSON serialization, and atomic report files.

Every CLI report embeds a manifest describing the command, the dataset
content hash, all seeds and hyperparameters, and the tool version. Two
runs with equal manifests must produce byte-identical reports once
timestamp fields are excluded, so serialization here is canonical:
sorted keys, fixed indentation, shortest round-trip float formatting.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from datetime import datetime, timezone

SCHEMA_VERSION = 1
TIMESTAMP_KEYS = frozenset({"created_at"})


def dataset_fingerprint(path):
    """sha256 content hash of a file, prefixed with the algorithm name."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return "sha256:" + digest.hexdigest()


def _plain(obj):
    """Reduce numpy containers/scalars to JSON-native types; NaN -> null."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _plain(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def canonical_json(obj):
    """Deterministic JSON text: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(path, obj):
    """Write canonical JSON atomically: temp file in place, then rename.

    A failed serialization or interrupted write never leaves a partial
    report at the destination.
    """
    text = canonical_json(obj)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return path


def write_text(path, text):
    """Atomic plain-text write (SVG charts, provenance logs)."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return path


def strip_timestamps(obj):
    """Recursively drop timestamp fields, for run-to-run byte comparison."""
    if isinstance(obj, dict):
        return {
            k: strip_timestamps(v) for k, v in obj.items() if k not in TIMESTAMP_KEYS
        }
    if isinstance(obj, list):
        return [strip_timestamps(v) for v in obj]
    return obj


def build_manifest(command, data_path, version, seeds=None, hyperparameters=None):
    """Assemble the reproducibility record embedded in every report."""
    return {
        "command": command,
        "dataset_fingerprint": dataset_fingerprint(data_path),
        "seeds": dict(seeds or {}),
        "hyperparameters": _plain(hyperparameters or {}),
        "version": version,
        "created_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    }
