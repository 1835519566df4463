"""Rayleigh block fading and the unquantized received block at BS 0."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..models import NetworkConfig
from . import rng as streams
from .exceptions import ShapeMismatchError
from .geometry import LargeScaleRealization, drop_users
from .rng import complex_normal
from .waveform import PilotBook, pilot_book_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelRealization:
    """Small-scale fading ``H0`` (M × KL) and large-scale amplitudes ``D0`` (KL,)."""

    H0: np.ndarray
    D0: np.ndarray

    @property
    def M(self) -> int:
        return self.H0.shape[0]

    def composite(self) -> np.ndarray:
        """H0·diag(D0)."""
        return self.H0 * self.D0[np.newaxis, :]


def rho_from_db(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def large_scale_amplitudes(theta: np.ndarray) -> np.ndarray:
    """√θ in cell-major user order."""
    return np.sqrt(np.asarray(theta, dtype=float).reshape(-1))


def draw_channel(M: int, theta: np.ndarray, rng: np.random.Generator) -> ChannelRealization:
    D0 = large_scale_amplitudes(theta)
    return ChannelRealization(H0=complex_normal(rng, (M, D0.size)), D0=D0)


@dataclass(frozen=True)
class SuperimposedBlock:
    """One small-scale trial with the pilot and data contributions kept apart.

    ``received(alpha)`` rebuilds Y0 for any power split from the same fading,
    data and noise, so a sweep over α sees common random numbers.
    """

    pilot_part: np.ndarray  # √ρ·H0·D0·C
    data_part: np.ndarray  # √ρ·H0·D0·S
    noise: np.ndarray
    H_home: np.ndarray  # M × K, home-cell columns of H0
    S_home: np.ndarray  # K × T

    def received(self, alpha: float) -> np.ndarray:
        if alpha == 1.0:
            return self.pilot_part + self.noise
        if alpha == 0.0:
            return self.data_part + self.noise
        return (
            np.sqrt(alpha) * self.pilot_part
            + np.sqrt(1.0 - alpha) * self.data_part
            + self.noise
        )


def draw_superimposed_block(
    M: int, D0: np.ndarray, C: np.ndarray, K: int, rho: float, rng: np.random.Generator
) -> SuperimposedBlock:
    """Draw fading, data and noise for one trial, in that order."""
    KL, T = C.shape
    H0 = complex_normal(rng, (M, KL))
    S = complex_normal(rng, (KL, T))
    W = complex_normal(rng, (M, T))
    G = np.sqrt(rho) * (H0 * D0[np.newaxis, :])
    return SuperimposedBlock(
        pilot_part=G @ C,
        data_part=G @ S,
        noise=W,
        H_home=H0[:, :K],
        S_home=S[:K],
    )


def received_block(
    H0: np.ndarray,
    D0: np.ndarray,
    X: np.ndarray,
    rho: float,
    rng: Optional[np.random.Generator] = None,
    noise: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Y0 = √ρ·H0·D0·X + W0.

    ``X`` is the (KL × T) transmit block of a TxFrame. Fresh CN(0, 1) noise is
    drawn from ``rng`` unless ``noise`` is given.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    M, KL = H0.shape
    if D0.shape != (KL,) or X.shape[0] != KL:
        raise ShapeMismatchError(
            "channel, large-scale and transmit shapes disagree",
            expected=(M, KL),
            actual=(D0.shape, X.shape),
        )
    T = X.shape[1]
    if noise is None:
        if rng is None:
            raise ValueError("either rng or noise is required")
        noise = complex_normal(rng, (M, T))
    elif noise.shape != (M, T):
        raise ShapeMismatchError("noise block has the wrong shape", (M, T), noise.shape)
    return np.sqrt(rho) * ((H0 * D0[np.newaxis, :]) @ X) + noise


@dataclass(frozen=True)
class DropTask:
    """One large-scale drop of a sweep point, simulated independently.

    Geometry, pilots and trials come from streams keyed by (seed, point,
    drop[, trial]), so results do not depend on which worker runs the task.
    """

    cfg: NetworkConfig
    seed: int
    point: int
    drop: int
    n_inner: int
    redraw_pilots: bool = False
    sample_variance_gamma: bool = False

    def realization(self) -> LargeScaleRealization:
        return drop_users(
            self.cfg, streams.stream(self.seed, streams.GEOMETRY, self.point, self.drop)
        )

    def pilot_book(self) -> PilotBook:
        index = (self.point, self.drop) if self.redraw_pilots else (self.point,)
        return pilot_book_for(self.cfg, streams.stream(self.seed, streams.PILOTS, *index))

    def trial_stream(self, trial: int) -> np.random.Generator:
        return streams.stream(self.seed, streams.TRIAL, self.point, self.drop, trial)
