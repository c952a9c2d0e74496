"""Content-addressed on-disk cache for covers and simplification results.

Keys hash the canonical form of the input complex together with the
operation name and its parameters, so isomorphic inputs share entries.
Writes go through a temporary file and ``os.replace``; unreadable or
stale entries count as misses.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .dcomplex import DeltaComplex, canonical_form

log = logging.getLogger(__name__)

CACHE_VERSION = "svbounds-cache-1"
ENV_VAR = "SVBOUNDS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "svbounds"


def cache_key(K: DeltaComplex | None, operation: str, params: dict) -> str:
    body = {"complex": None if K is None else repr(canonical_form(K)),
            "operation": operation, "params": params}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    key: str
    payload: bytes
    version: str = CACHE_VERSION

    def dumps(self) -> bytes:
        return json.dumps({"key": self.key, "version": self.version,
                           "payload": self.payload.decode()}).encode()


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None, version: str = CACHE_VERSION):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.version = version
        self.warnings: list[str] = []

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> bytes | None:
        path = self._path(key)
        try:
            doc = json.loads(path.read_bytes())
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            self._warn(f"corrupt cache entry {key[:12]}: {exc}")
            return None
        if not isinstance(doc, dict) or doc.get("key") != key or "payload" not in doc:
            self._warn(f"corrupt cache entry {key[:12]}")
            return None
        if doc.get("version") != self.version:
            return None
        return doc["payload"].encode()

    def put(self, key: str, payload: bytes) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = CacheEntry(key, payload, self.version).dumps()
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def _warn(self, msg):
        log.warning(msg)
        self.warnings.append(msg)


def cache_get(cache: Cache, key: str) -> bytes | None:
    return cache.get(key)


def cache_put(cache: Cache, key: str, payload: bytes) -> None:
    cache.put(key, payload)
