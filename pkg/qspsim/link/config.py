"""Runtime configuration for the simulator."""

import os
from dataclasses import dataclass


@dataclass
class SimConfig:
    """Simulator configuration loaded from environment variables."""

    cache_dir: str
    cache_ttl_seconds: int
    threads: int
    n_outer: int
    n_inner: int
    zeta_drops: int
    log_level: str

    @classmethod
    def from_env(cls) -> "SimConfig":
        """Load configuration from environment variables."""
        return cls(
            cache_dir=os.getenv("QSPSIM_CACHE_DIR", ".qspsim_cache"),
            cache_ttl_seconds=int(
                os.getenv("QSPSIM_CACHE_TTL_SECONDS", str(30 * 24 * 3600))
            ),
            threads=int(os.getenv("QSPSIM_THREADS", "1")),
            n_outer=int(os.getenv("QSPSIM_N_OUTER", "200")),
            n_inner=int(os.getenv("QSPSIM_N_INNER", "50")),
            zeta_drops=int(os.getenv("QSPSIM_ZETA_DROPS", "20000")),
            log_level=os.getenv("QSPSIM_LOG_LEVEL", "INFO"),
        )


# Global config instance
config = SimConfig.from_env()
