"""Harness module - coordinates experiment runs, statistics caching and config loading."""

import json
import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from pydantic import ValidationError

from ..link.config import config
from ..link.exceptions import ConfigError
from ..models import ExperimentSpec, GeometryStats, NetworkConfig
from .cache import StatsCache, stats_key
from .output import format_csv, read_csv, to_frame, write_csv
from .presets import PRESETS, preset
from .runner import SweepRunner, compute_zeta_stats, run_experiment

logger = logging.getLogger(__name__)

__all__ = [
    "ExperimentCoordinator",
    "PRESETS",
    "SweepRunner",
    "format_csv",
    "load_config",
    "preset",
    "read_csv",
    "run_experiment",
    "to_frame",
    "write_csv",
]


def load_config(path: Union[str, Path]) -> ExperimentSpec:
    """Read a flat JSON experiment file into a validated spec.

    Raises:
        ConfigError: The file is missing or unreadable, or a field is unknown
            or out of range (``fields`` names the offenders).
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", fields=[]) from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}", fields=[]) from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path} must hold a JSON object", fields=[])
    try:
        spec = ExperimentSpec(**raw)
    except ValidationError as e:
        fields = [".".join(str(p) for p in err["loc"]) or "spec" for err in e.errors()]
        reasons = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'spec'}: {err['msg']}"
            for err in e.errors()
        )
        logger.error(f"Invalid config {path}: {reasons}")
        raise ConfigError(f"invalid config {path}: {reasons}", fields=fields) from None
    logger.info(f"Loaded experiment {spec.name!r} from {path}")
    return spec


class ExperimentCoordinator:
    """Coordinates runs and the ζ-statistics cache shared between them."""

    _instance: Optional["ExperimentCoordinator"] = None

    def __init__(self, cache_dir: Optional[str] = None):
        directory = Path(cache_dir or config.cache_dir)
        self.cache = StatsCache(directory=directory, ttl_seconds=config.cache_ttl_seconds)
        self.runs_completed = 0
        self.last_run: Optional[str] = None

    @classmethod
    def get_instance(cls) -> "ExperimentCoordinator":
        """Get singleton instance."""
        if cls._instance is None:
            cls._instance = ExperimentCoordinator()
        return cls._instance

    @classmethod
    def reset_instance(cls):
        """Reset singleton instance (for testing)."""
        cls._instance = None

    def zeta_stats(self, network: NetworkConfig, n_drops: int, seed: int) -> GeometryStats:
        """ζ statistics of a geometry, from the sidecar cache when available."""
        key = stats_key(network.geometry_key(), n_drops, seed)
        return self.cache.get_or_compute(
            key, lambda: compute_zeta_stats(network, n_drops, seed)
        )

    def run(self, spec: ExperimentSpec, threads: Optional[int] = None) -> pd.DataFrame:
        frame = run_experiment(spec, threads=threads, stats=self.zeta_stats)
        self.runs_completed += 1
        self.last_run = spec.name
        logger.info(f"Experiment {spec.name} complete: {len(frame)} rows")
        return frame

    def get_health_info(self) -> dict:
        """Get health/status information."""
        return {
            "cache_dir": str(self.cache.directory),
            "cache_keys": len(self.cache.keys()),
            "runs_completed": self.runs_completed,
            "last_run": self.last_run,
            "threads": config.threads,
            "presets": sorted(PRESETS),
        }
