from __future__ import annotations

import functools
import threading
from typing import Any, Callable, Optional

from cachelib import BaseCache, NullCache, SimpleCache

from ..config import Settings, get_settings


def create_cache(settings: Optional[Settings] = None) -> BaseCache:
    """Cache backend selected by ``LRE_CACHE_TYPE``; entries never expire."""
    s = settings or get_settings()
    if s.cache_type == "NullCache":
        return NullCache()
    return SimpleCache(threshold=s.cache_threshold, default_timeout=0)


class CacheFacade:
    """Thin wrapper over cachelib to make caching injectable and optional.

    When no cache is provided, `memoize` returns the wrapped function unchanged.
    """

    def __init__(self, cache: Optional[BaseCache], timeout_seconds: int = 0) -> None:
        self.cache = cache
        self.timeout_seconds = timeout_seconds
        self._lock = threading.Lock()

    def memoize(self, key_fn: Callable[..., str]) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
        def decorator(fn: Callable[..., Any]) -> Callable[..., Any]:
            if self.cache is None:
                return fn

            @functools.wraps(fn)
            def wrapper(*args, **kwargs):
                key = key_fn(*args, **kwargs)
                with self._lock:
                    hit = self.cache.get(key)
                if hit is not None:
                    return hit
                value = fn(*args, **kwargs)
                with self._lock:
                    self.cache.set(key, value, timeout=self.timeout_seconds)
                return value

            return wrapper

        return decorator
