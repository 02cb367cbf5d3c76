"""Content-addressed JSON cache for expensive results.

Entries are keyed by the sha256 of (module, canonical parameters, code
version).  Each file stores the payload together with its own checksum, so a
truncated or edited entry is detected on read and treated as a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Mapping

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "CYCLEFORGE_CACHE"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "cycleforge"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def cache_key(module: str, params: Mapping[str, Any], version: str = __version__) -> str:
    h = hashlib.sha256()
    h.update(canonical_json({"module": module, "params": params, "version": version}).encode("utf-8"))
    return h.hexdigest()


def _checksum(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


class ResultCache:
    def __init__(self, directory: str | os.PathLike | None = None, version: str = __version__):
        self.directory = Path(directory) if directory is not None else default_dir()
        self.version = version
        self.enabled = True
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            probe = tempfile.NamedTemporaryFile(dir=self.directory, delete=True)
            probe.close()
        except OSError as exc:
            log.warning("cache directory %s is not writable (%s); running uncached", self.directory, exc)
            self.enabled = False

    def key(self, module: str, params: Mapping[str, Any]) -> str:
        return cache_key(module, params, self.version)

    def path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> Any | None:
        if not self.enabled:
            return None
        p = self.path(key)
        try:
            with open(p, encoding="utf-8") as fh:
                entry = json.load(fh)
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("unreadable cache entry %s (%s), discarding", p, exc)
            self._discard(p)
            return None
        if not isinstance(entry, dict) or entry.get("checksum") != _checksum(entry.get("payload")):
            log.warning("checksum mismatch in cache entry %s, discarding", p)
            self._discard(p)
            return None
        return entry["payload"]

    def put(self, key: str, payload: Any) -> None:
        if not self.enabled:
            return
        p = self.path(key)
        entry = {"key": key, "checksum": _checksum(payload), "payload": payload}
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(entry))
            os.replace(tmp, p)
        except OSError as exc:
            log.warning("could not write cache entry %s (%s)", p, exc)

    def cached(self, module: str, params: Mapping[str, Any], compute: Callable[[], Any]) -> Any:
        """Return the stored payload for these parameters, computing and storing it on a miss."""
        key = self.key(module, params)
        hit = self.get(key)
        if hit is not None:
            return hit
        payload = compute()
        # round-trip so hits and misses return identical structures
        payload = json.loads(canonical_json(payload))
        self.put(key, payload)
        return payload

    @staticmethod
    def _discard(p: Path) -> None:
        try:
            p.unlink()
        except OSError:
            pass


def cache_get(cache: ResultCache, key: str) -> Any | None:
    return cache.get(key)


def cache_put(cache: ResultCache, key: str, payload: Any) -> None:
    cache.put(key, payload)
