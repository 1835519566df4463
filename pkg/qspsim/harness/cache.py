"""Sidecar cache for network statistics.

ζ₁, ζ₂, ζ₃ depend only on the geometry, the number of drops and the seed, so
they are computed once per content hash and kept as JSON next to the run.
"""

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable, Optional

from ..link.config import config
from ..models import GeometryStats

logger = logging.getLogger(__name__)


def stats_key(geometry: dict, n_drops: int, seed: int) -> str:
    """sha256 of the canonical JSON of everything that determines the stats."""
    payload = json.dumps(
        {"geometry": geometry, "n_drops": n_drops, "seed": seed}, sort_keys=True
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class CacheEntry:
    """Cached statistics with TTL tracking."""

    data: GeometryStats
    computed_at: datetime
    ttl_seconds: int

    @property
    def age_seconds(self) -> float:
        return (datetime.now() - self.computed_at).total_seconds()

    @property
    def is_fresh(self) -> bool:
        return self.age_seconds < self.ttl_seconds

    def to_json(self) -> str:
        return json.dumps(
            {
                "computed_at": self.computed_at.isoformat(),
                "ttl_seconds": self.ttl_seconds,
                "stats": self.data.model_dump(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "CacheEntry":
        raw = json.loads(text)
        return cls(
            data=GeometryStats(**raw["stats"]),
            computed_at=datetime.fromisoformat(raw["computed_at"]),
            ttl_seconds=int(raw["ttl_seconds"]),
        )


@dataclass
class StatsCache:
    """In-memory entries backed by one JSON file per key.

    A stale entry is recomputed; if recomputation fails the stale value is
    served with a warning.
    """

    directory: Optional[Path] = None
    ttl_seconds: int = config.cache_ttl_seconds
    _entries: dict[str, CacheEntry] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def _path(self, key: str) -> Optional[Path]:
        if self.directory is None:
            return None
        return Path(self.directory) / f"zeta-{key[:16]}.json"

    def _load(self, key: str) -> Optional[CacheEntry]:
        entry = self._entries.get(key)
        if entry is not None:
            return entry
        path = self._path(key)
        if path is None or not path.exists():
            return None
        try:
            entry = CacheEntry.from_json(path.read_text(encoding="utf-8"))
        except (ValueError, KeyError) as e:
            logger.warning(f"Ignoring unreadable cache file {path}: {e}")
            return None
        self._entries[key] = entry
        return entry

    def _store(self, key: str, entry: CacheEntry) -> None:
        self._entries[key] = entry
        path = self._path(key)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(entry.to_json(), encoding="utf-8")

    def get_or_compute(
        self, key: str, compute_fn: Callable[[], GeometryStats]
    ) -> GeometryStats:
        """Cached statistics, computing them on a miss or when stale."""
        with self._lock:
            entry = self._load(key)
            if entry and entry.is_fresh:
                logger.info(f"Cache hit for {key[:12]}, age={entry.age_seconds:.0f}s")
                return entry.data
            try:
                if entry:
                    logger.info(f"Cache stale for {key[:12]}, recomputing...")
                else:
                    logger.info(f"Cache miss for {key[:12]}, computing...")
                data = compute_fn()
            except Exception as e:
                if entry:
                    logger.warning(
                        f"Recompute failed for {key[:12]}, serving stale stats "
                        f"(age={entry.age_seconds:.0f}s): {e}"
                    )
                    return entry.data
                logger.error(f"Recompute failed for {key[:12]} with no cached stats: {e}")
                raise
            self._store(
                key,
                CacheEntry(data=data, computed_at=datetime.now(), ttl_seconds=self.ttl_seconds),
            )
            return data

    def get_entry_info(self, key: str) -> Optional[dict]:
        entry = self._load(key)
        if not entry:
            return None
        return {
            "age_seconds": entry.age_seconds,
            "is_fresh": entry.is_fresh,
            "computed_at": entry.computed_at.isoformat(),
        }

    def invalidate(self, key: Optional[str] = None):
        """Drop one key (memory and file) or the whole in-memory cache."""
        if key is None:
            self._entries.clear()
            logger.info("Cache cleared")
            return
        self._entries.pop(key, None)
        path = self._path(key)
        if path is not None and path.exists():
            path.unlink()
        logger.info(f"Cache invalidated for {key[:12]}")

    def keys(self) -> list[str]:
        return list(self._entries.keys())
