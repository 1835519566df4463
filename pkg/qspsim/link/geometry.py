"""Hexagonal multicell layout, user drops and network statistics.

Cells are flat-top hexagons of circumradius R. BS 0 sits at the origin and the
first tier of six sites lies at distance √3·R in the directions 30° + 60°·k.
A second tier of twelve sites is added for L = 19. The network is finite; there
is no wrap-around.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..models import GeometryStats, NetworkConfig

logger = logging.getLogger(__name__)

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class LargeScaleRealization:
    """One drop of all users, seen from BS 0.

    ``theta[j, k]`` is the gain of user k of cell j towards BS 0 relative to
    its own BS; ``theta[0, :]`` is exactly one.
    """

    theta: np.ndarray
    kappa0: float
    kappa1: float
    positions: Optional[np.ndarray] = None

    @property
    def K(self) -> int:
        return self.theta.shape[1]

    @property
    def max_cross_theta(self) -> float:
        if self.theta.shape[0] == 1:
            return 0.0
        return float(self.theta[1:].max())

    @classmethod
    def single_cell(cls, K: int) -> "LargeScaleRealization":
        return cls(theta=np.ones((1, K)), kappa0=float(K), kappa1=float(K))


def base_stations(L: int, cell_radius: float) -> np.ndarray:
    """BS coordinates (L × 2), BS 0 first, then tier one, then tier two."""
    isd = _SQRT3 * cell_radius
    angles = np.deg2rad(30.0 + 60.0 * np.arange(6))
    ring1 = isd * np.column_stack([np.cos(angles), np.sin(angles)])
    sites = [np.zeros((1, 2)), ring1]
    if L >= 19:
        ring2 = [2.0 * ring1]
        ring2.append(ring1 + np.roll(ring1, -1, axis=0))
        # interleave so the tier walks around the centre
        sites.append(np.stack(ring2, axis=1).reshape(12, 2))
    return np.concatenate(sites)[:L]


def in_hexagon(points: np.ndarray, cell_radius: float) -> np.ndarray:
    """Membership in the flat-top hexagon of circumradius R centred at the origin."""
    x = np.abs(points[..., 0])
    y = np.abs(points[..., 1])
    half_height = _SQRT3 * cell_radius / 2.0
    return (y <= half_height) & (_SQRT3 * x + y <= _SQRT3 * cell_radius)


def sample_hexagon(
    n: int, cell_radius: float, forbidden_radius: float, rng: np.random.Generator
) -> np.ndarray:
    """Uniform points over the hexagon minus the forbidden disk around its centre.

    Rejection sampling from the bounding rectangle; about 70% of proposals are
    kept, so each round draws a little more than is still missing.
    """
    half_height = _SQRT3 * cell_radius / 2.0
    out = np.empty((0, 2))
    while out.shape[0] < n:
        missing = n - out.shape[0]
        proposal = np.column_stack(
            [
                rng.uniform(-cell_radius, cell_radius, size=2 * missing + 8),
                rng.uniform(-half_height, half_height, size=2 * missing + 8),
            ]
        )
        keep = in_hexagon(proposal, cell_radius)
        keep &= np.hypot(proposal[:, 0], proposal[:, 1]) > forbidden_radius
        out = np.concatenate([out, proposal[keep]])
    return out[:n]


def _theta_from_positions(
    positions: np.ndarray, bs: np.ndarray, exponent: float
) -> np.ndarray:
    """θ for positions of shape (..., L, K, 2)."""
    home = bs[:, np.newaxis, :]
    d_home = np.linalg.norm(positions - home, axis=-1)
    d_zero = np.linalg.norm(positions, axis=-1)
    theta = (d_zero / d_home) ** (-exponent)
    theta[..., 0, :] = 1.0
    return theta


def _kappas(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    K = theta.shape[-1]
    cross = theta[..., 1:, :]
    kappa0 = K + cross.sum(axis=(-2, -1))
    kappa1 = K + (cross**2).sum(axis=(-2, -1))
    return kappa0, kappa1


def drop_positions(
    cfg: NetworkConfig, n_drops: int, rng: np.random.Generator
) -> np.ndarray:
    """User coordinates of shape (n_drops, L, K, 2)."""
    offsets = sample_hexagon(
        n_drops * cfg.L * cfg.K, cfg.cell_radius, cfg.forbidden_radius, rng
    ).reshape(n_drops, cfg.L, cfg.K, 2)
    bs = base_stations(cfg.L, cfg.cell_radius)
    return offsets + bs[np.newaxis, :, np.newaxis, :]


def drop_users(cfg: NetworkConfig, rng: np.random.Generator) -> LargeScaleRealization:
    """Drop K users uniformly in each cell and compute their gains towards BS 0."""
    if cfg.L == 1:
        return LargeScaleRealization.single_cell(cfg.K)
    positions = drop_positions(cfg, 1, rng)[0]
    bs = base_stations(cfg.L, cfg.cell_radius)
    theta = _theta_from_positions(positions, bs, cfg.pathloss_exponent)
    kappa0, kappa1 = _kappas(theta)
    return LargeScaleRealization(
        theta=theta,
        kappa0=float(kappa0),
        kappa1=float(kappa1),
        positions=positions,
    )


def sample_kappas(
    cfg: NetworkConfig, n_drops: int, rng: np.random.Generator, batch: int = 4096
) -> tuple[np.ndarray, np.ndarray]:
    """κ₀ and κ₁ for ``n_drops`` independent drops."""
    if cfg.L == 1:
        return np.full(n_drops, float(cfg.K)), np.full(n_drops, float(cfg.K))
    bs = base_stations(cfg.L, cfg.cell_radius)
    k0_parts, k1_parts = [], []
    done = 0
    while done < n_drops:
        size = min(batch, n_drops - done)
        theta = _theta_from_positions(
            drop_positions(cfg, size, rng), bs, cfg.pathloss_exponent
        )
        k0, k1 = _kappas(theta)
        k0_parts.append(k0)
        k1_parts.append(k1)
        done += size
    return np.concatenate(k0_parts), np.concatenate(k1_parts)


def _stderr(samples: np.ndarray) -> float:
    if samples.size < 2:
        return float("nan")
    return float(samples.std(ddof=1) / math.sqrt(samples.size))


def estimate_zeta_stats(
    cfg: NetworkConfig, n_drops: int, rng: np.random.Generator, seed: int = 0
) -> GeometryStats:
    """Sample means of κ₀, κ₀² and κ₁ with their standard errors."""
    if n_drops < 1:
        raise ValueError(f"n_drops must be at least 1, got {n_drops}")
    kappa0, kappa1 = sample_kappas(cfg, n_drops, rng)
    kappa0_sq = kappa0**2
    stats = GeometryStats(
        K=cfg.K,
        n_drops=n_drops,
        zeta1=float(kappa0.mean()),
        zeta2=float(kappa0_sq.mean()),
        zeta3=float(kappa1.mean()),
        se1=_stderr(kappa0),
        se2=_stderr(kappa0_sq),
        se3=_stderr(kappa1),
        seed=seed,
    )
    logger.debug(
        f"zeta stats K={cfg.K} L={cfg.L} n={n_drops}: "
        f"{stats.zeta1:.4f} {stats.zeta2:.4f} {stats.zeta3:.4f}"
    )
    return stats
