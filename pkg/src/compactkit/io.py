"""Grid-function and family manifests.

A grid-function manifest is JSON::

    {"version": 1, "dim": 2, "shape": [64, 64], "origin": [-1.0, -1.0],
     "spacing": 0.03125, "values": "bump.f64"}

where ``values`` is either a path (relative to the manifest) to raw
little-endian float64 data in row-major order, or an inline (flat or nested)
array.  A family manifest lists members::

    {"version": 1, "members": [{"label": "a", "manifest": "a.json"}, ...]}

with each ``manifest`` either a path or an inline grid-function manifest.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import GridMismatch, NonFiniteValue, ParseError, SizeMismatch
from .grid import FunctionFamily, Grid, GridFunction

MANIFEST_VERSION = 1
_F64 = np.dtype("<f8")


def _read_json(path: Path, label=None):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}", label) from exc


def parse_grid_function(doc: dict, base_dir: Path = Path("."), label=None) -> GridFunction:
    if not isinstance(doc, dict):
        raise ParseError("grid-function manifest must be a JSON object", label)
    if doc.get("version", MANIFEST_VERSION) != MANIFEST_VERSION:
        raise ParseError(f"unsupported manifest version {doc.get('version')!r}", label)
    try:
        shape = tuple(int(s) for s in doc["shape"])
        origin = tuple(float(o) for o in doc.get("origin", [0.0] * len(shape)))
        spacing = float(doc["spacing"])
        dim = int(doc.get("dim", len(shape)))
        raw = doc["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed grid-function manifest: {exc}", label) from exc
    if dim != len(shape):
        raise ParseError(f"dim {dim} does not match shape {list(shape)}", label)
    try:
        grid = Grid(shape, origin, spacing)
    except ValueError as exc:
        raise ParseError(str(exc), label) from exc

    if isinstance(raw, str):
        path = base_dir / raw
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read payload {path}: {exc}", label) from exc
        if len(data) % 8:
            raise SizeMismatch(f"payload {path} is not a whole number of float64 values", label)
        values = np.frombuffer(data, dtype=_F64).astype(np.float64)
    else:
        try:
            values = np.asarray(raw, dtype=np.float64).ravel()
        except (TypeError, ValueError) as exc:
            raise ParseError(f"inline values are not numeric: {exc}", label) from exc

    if values.size != grid.size:
        raise SizeMismatch(f"expected {grid.size} values for shape {list(shape)}, got {values.size}", label)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteValue(f"non-finite value at flat index {bad}", label)
    return GridFunction(grid, values)


def load_grid_function(path) -> GridFunction:
    path = Path(path)
    return parse_grid_function(_read_json(path), path.parent)


def load_family(path) -> FunctionFamily:
    """Load a family manifest; errors name the offending member label."""
    path = Path(path)
    doc = _read_json(path)
    if not isinstance(doc, dict) or not isinstance(doc.get("members"), list):
        raise ParseError(f"{path}: family manifest needs a 'members' list")
    if doc.get("version", MANIFEST_VERSION) != MANIFEST_VERSION:
        raise ParseError(f"unsupported manifest version {doc.get('version')!r}")
    members, labels = [], []
    for i, entry in enumerate(doc["members"]):
        label = str(entry.get("label", f"f{i}")) if isinstance(entry, dict) else f"f{i}"
        if not isinstance(entry, dict) or "manifest" not in entry:
            raise ParseError("member entry needs a 'manifest'", label)
        ref = entry["manifest"]
        if isinstance(ref, str):
            sub = path.parent / ref
            members.append(parse_grid_function(_read_json(sub, label), sub.parent, label))
        else:
            members.append(parse_grid_function(ref, path.parent, label))
        labels.append(label)
    if not members:
        raise ParseError(f"{path}: family has no members")
    grid = members[0].grid
    for m, label in zip(members, labels):
        if not grid.compatible(m.grid):
            raise GridMismatch(f"member {label!r} is on a different grid")
    try:
        return FunctionFamily(members, labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def grid_manifest(f: GridFunction, values=None) -> dict:
    return {
        "version": MANIFEST_VERSION,
        "dim": f.dim,
        "shape": list(f.grid.shape),
        "origin": list(f.grid.origin),
        "spacing": f.grid.spacing,
        "values": f.values.ravel().tolist() if values is None else values,
    }


def save_grid_function(f: GridFunction, path, inline: bool = False) -> Path:
    """Write ``path`` (JSON) and, unless ``inline``, a sibling ``.f64`` payload."""
    path = Path(path)
    if inline:
        doc = grid_manifest(f)
    else:
        payload = path.with_suffix(".f64")
        payload.write_bytes(np.ascontiguousarray(f.values, dtype=_F64).tobytes())
        doc = grid_manifest(f, payload.name)
    path.write_text(json.dumps(doc, indent=2))
    return path


def save_family(family: FunctionFamily, path, inline: bool = False) -> Path:
    """Write a family manifest plus one manifest (and payload) per member."""
    path = Path(path)
    entries = []
    for label, f in zip(family.labels, family.members):
        if inline:
            entries.append({"label": label, "manifest": grid_manifest(f)})
        else:
            sub = path.parent / f"{path.stem}_{label}.json"
            save_grid_function(f, sub)
            entries.append({"label": label, "manifest": sub.name})
    path.write_text(json.dumps({"version": MANIFEST_VERSION, "members": entries}, indent=2))
    return path


def write_json_atomic(doc, path) -> None:
    """Write JSON to a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
