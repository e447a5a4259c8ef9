"""Run manifests and deterministic JSON serialization.

Every artifact embeds a manifest (command, config digest, input digests,
seeds, version, timestamp). Apart from the timestamp the manifest pins the
result; setting SOURCE_DATE_EPOCH pins the timestamp too, making repeated
runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, is_dataclass
from pathlib import Path

import numpy as np

from . import __version__


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_digest: str | None
    input_digests: dict[str, str]
    seeds: tuple[int, ...]
    toolkit_version: str
    timestamp: str


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def make_manifest(command: str, config_digest: str | None = None,
                  input_paths: dict[str, str | Path] | None = None,
                  seeds: tuple[int, ...] = ()) -> RunManifest:
    digests = {
        name: file_digest(path) for name, path in sorted((input_paths or {}).items())
    }
    return RunManifest(
        command=command,
        config_digest=config_digest,
        input_digests=digests,
        seeds=tuple(int(s) for s in seeds),
        toolkit_version=__version__,
        timestamp=_timestamp(),
    )


def jsonable(obj):
    """Recursively coerce toolkit objects into JSON-serializable values.

    numpy arrays become nested row-major lists, NaN/inf become None, and
    dataclasses serialize by field name.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else None
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return [jsonable(row) for row in obj.tolist()]
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in seq]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(payload: dict, path: str | Path | None = None) -> str:
    text = json.dumps(jsonable(payload), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
