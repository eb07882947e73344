"""
Persistent result cache.

Engine results are deterministic, so entries never expire; instead every key
includes ENGINE_VERSION and a version bump invalidates old entries. The
in-memory index is backed by an append-only JSON-lines file written under an
advisory lock, so concurrent sweep workers can share it. When the file holds
several lines for one key the last one wins.

Usage:
    cache = ResultCache.from_config()

    key = cache.make_key("davenport", ring="Z/4", psi="id")
    payload = cache.get(key)
    if payload is None:
        payload = compute()
        cache.set(key, payload, computation="davenport")
"""
import fcntl
import hashlib
import json
import logging
import threading
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from pydantic import ValidationError

from config import ENGINE_VERSION, CacheConfig
from schemas import ResultCacheEntry

logger = logging.getLogger(__name__)


class ResultCache:
    """
    Thread-safe cache of JSON payloads keyed by computation and arguments.

    Payloads marked ``"complete": false`` are never stored.
    """

    def __init__(self, path: Optional[Path] = None, enabled: bool = True, engine_version: str = ENGINE_VERSION):
        self.path = Path(path) if path is not None else None
        self.enabled = enabled
        self.engine_version = engine_version
        self._cache: Dict[str, ResultCacheEntry] = {}
        self._loaded = False
        self._hits = 0
        self._misses = 0
        self._lock = threading.RLock()

    @classmethod
    def from_config(cls, config: Optional[CacheConfig] = None, enabled: Optional[bool] = None) -> "ResultCache":
        config = config or CacheConfig.from_env()
        return cls(
            path=config.path,
            enabled=config.enabled if enabled is None else enabled,
            engine_version=config.engine_version,
        )

    def make_key(self, computation: str, **params: Any) -> str:
        """Create a cache key from the computation name, its parameters and the engine version."""
        key_data = json.dumps(
            {"computation": computation, "params": params, "engine": self.engine_version},
            sort_keys=True,
            default=str,
        )
        return hashlib.sha256(key_data.encode()).hexdigest()

    def _load(self) -> None:
        if self._loaded:
            return
        self._loaded = True
        if self.path is None or not self.path.exists():
            return
        skipped = 0
        with open(self.path, "r", encoding="utf-8") as handle:
            fcntl.flock(handle, fcntl.LOCK_SH)
            try:
                for line in handle:
                    if not line.strip():
                        continue
                    try:
                        entry = ResultCacheEntry.model_validate_json(line)
                    except ValidationError:
                        skipped += 1
                        continue
                    if entry.engine_version == self.engine_version:
                        self._cache[entry.key] = entry
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)
        if skipped:
            logger.warning("ignored %d unreadable lines in %s", skipped, self.path)
        logger.debug("loaded %d cache entries from %s", len(self._cache), self.path)

    def _append(self, entry: ResultCacheEntry) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as handle:
            fcntl.flock(handle, fcntl.LOCK_EX)
            try:
                handle.write(entry.model_dump_json() + "\n")
                handle.flush()
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Get a cached payload.

        Args:
            key: Cache key from ``make_key``

        Returns:
            The stored payload, or None on a miss or when the cache is disabled
        """
        if not self.enabled:
            return None
        with self._lock:
            self._load()
            entry = self._cache.get(key)
            if entry is None:
                self._misses += 1
                return None
            self._hits += 1
            logger.info("cache hit for %s (%s)", entry.computation, key[:12])
            return entry.value

    def set(self, key: str, value: Dict[str, Any], computation: str = "") -> bool:
        """
        Store a payload in memory and append it to the cache file.

        Args:
            key: Cache key
            value: JSON-ready payload
            computation: Name recorded with the entry

        Returns:
            True if the payload was stored
        """
        if not self.enabled or value.get("complete") is False:
            return False
        entry = ResultCacheEntry(
            key=key,
            computation=computation,
            engine_version=self.engine_version,
            value=value,
            timestamp=time.time(),
        )
        with self._lock:
            self._load()
            self._cache[key] = entry
            self._append(entry)
        return True

    def delete(self, key: str) -> bool:
        """
        Remove a key from the in-memory index.

        Returns:
            True if key was present, False otherwise
        """
        with self._lock:
            self._load()
            return self._cache.pop(key, None) is not None

    def clear(self) -> None:
        """Drop every entry and truncate the cache file."""
        with self._lock:
            self._cache.clear()
            self._loaded = True
            if self.path is not None and self.path.exists():
                with open(self.path, "w", encoding="utf-8") as handle:
                    fcntl.flock(handle, fcntl.LOCK_EX)
                    fcntl.flock(handle, fcntl.LOCK_UN)

    def stats(self) -> Dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            Dict with entry count, hit/miss counters and the backing file
        """
        with self._lock:
            self._load()
            return {
                "total_entries": len(self._cache),
                "hits": self._hits,
                "misses": self._misses,
                "path": str(self.path) if self.path is not None else None,
                "engine_version": self.engine_version,
            }


def cached_computation(computation: str, cache_getter: Callable[[], Optional[ResultCache]]):
    """
    Decorator caching a payload-producing function by its keyword arguments.

    The wrapped function must be called with keyword arguments only and return
    a JSON-ready dict. ``cache_getter`` is evaluated per call so the CLI can
    switch the cache off.

    Usage:
        @cached_computation("davenport", lambda: state.cache)
        def davenport_payload(*, ring: str, psi: str) -> dict:
            ...
    """
    def decorator(func: Callable[..., Dict[str, Any]]) -> Callable[..., Dict[str, Any]]:
        @wraps(func)
        def wrapper(**kwargs: Any) -> Dict[str, Any]:
            cache = cache_getter()
            if cache is None:
                return func(**kwargs)
            key = cache.make_key(computation, **kwargs)
            cached_value = cache.get(key)
            if cached_value is not None:
                return cached_value
            result = func(**kwargs)
            cache.set(key, result, computation=computation)
            return result

        return wrapper
    return decorator
