"""
Evaluation cache for response values.

A pure accelerator: entries are keyed by the exact float inputs and the scheme
version, and the stored floats round-trip exactly through the cache file, so
results are bit-identical with or without it.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

CacheKey = tuple[str, float, float, str]


@dataclass(frozen=True)
class ResponseValue:
    """
    A response function value with its nu-derivative and error estimates.

    value          : f_i(omega0, r, nu), dimensionless, > 0
    dvalue_dnu     : d f_i / d nu; 0 unless ``has_derivative``
    trunc_error    : magnitude of the last included mode band (mode-sum tail estimate)
    quad_error     : gap between the last two quadrature refinements
    has_derivative : whether ``dvalue_dnu`` was computed
    """
    value: float
    dvalue_dnu: float = 0.0
    trunc_error: float = 0.0
    quad_error: float = 0.0
    has_derivative: bool = False

    @property
    def error(self) -> float:
        return self.trunc_error + self.quad_error


class ResponseCache:
    """
    Map (component, r_tilde, nu, scheme) -> ResponseValue.

    Concurrent readers are fine; writes take a lock. Two workers computing the
    same key both store the same value, so a lost update is harmless.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[CacheKey, ResponseValue] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            from stringqfi.io.read_write import read_cache_file

            self._entries.update(read_cache_file(self.path))
            logger.debug("Loaded %d cached response values from %s", len(self._entries), self.path)

    @staticmethod
    def key(component: str, r_tilde: float, nu: float, scheme: str) -> CacheKey:
        return (component, float(r_tilde), float(nu), scheme)

    def get(self, key: CacheKey, need_derivative: bool = False) -> ResponseValue | None:
        entry = self._entries.get(key)
        if entry is None or (need_derivative and not entry.has_derivative):
            self.misses += 1
            return None
        self.hits += 1
        return entry

    def put(self, key: CacheKey, value: ResponseValue) -> None:
        with self._lock:
            current = self._entries.get(key)
            if current is not None and current.has_derivative and not value.has_derivative:
                return
            self._entries[key] = value

    def __len__(self) -> int:
        return len(self._entries)

    def items(self) -> list[tuple[CacheKey, ResponseValue]]:
        with self._lock:
            return sorted(self._entries.items(), key=lambda item: item[0])

    def save(self) -> Path | None:
        if self.path is None:
            return None
        from stringqfi.io.read_write import write_cache_file

        write_cache_file(self.items(), self.path)
        logger.debug("Saved %d response values to %s (hits=%d, misses=%d)", len(self), self.path, self.hits, self.misses)
        return self.path
