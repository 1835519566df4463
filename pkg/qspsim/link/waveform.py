"""Pilot books, data symbols and superimposed transmit frames.

Rows are users in cell-major order: user ``k`` of cell ``j`` is row ``j*K + k``,
so the first K rows always belong to the cell of BS 0.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PilotSupplyError, ShapeMismatchError
from .rng import complex_normal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PilotBook:
    """KL orthogonal unit-modulus pilots of length T, one row per user."""

    C: np.ndarray
    selected_rows: np.ndarray

    @property
    def n_users(self) -> int:
        return self.C.shape[0]

    @property
    def T(self) -> int:
        return self.C.shape[1]


@dataclass(frozen=True)
class TxFrame:
    """Per-user transmit block x[t] = √α·c[t] + √(1−α)·s[t]."""

    X: np.ndarray
    S: np.ndarray
    alpha: float


@dataclass(frozen=True)
class QtpPilots:
    """Time-multiplexed training book shared by all cells.

    ``book`` holds K orthogonal sequences over τ = K symbols; ``assignment[j, k]``
    is the book row used by user k of cell j. Users of one cell never share
    a sequence; users of different cells may.
    """

    book: np.ndarray
    assignment: np.ndarray

    @property
    def tau(self) -> int:
        return self.book.shape[1]

    def sequences(self) -> np.ndarray:
        """Training matrix of shape (L*K) × τ in cell-major user order."""
        return self.book[self.assignment.reshape(-1)]


def fourier_rows(rows: np.ndarray, T: int) -> np.ndarray:
    """Rows ``rows`` of the T-point Fourier basis, entries exp(−i2πnt/T)."""
    t = np.arange(T)
    return np.exp(-2j * math.pi * np.outer(rows, t) / T)


def make_pilot_book(KL: int, T: int, rng: np.random.Generator) -> PilotBook:
    """Draw KL distinct Fourier rows uniformly without replacement."""
    if KL > T:
        logger.error(f"Cannot fit {KL} orthogonal pilots in T={T}")
        raise PilotSupplyError(
            f"K*L={KL} orthogonal pilots do not fit in T={T}", fields=["K", "L", "T"]
        )
    rows = rng.choice(T, size=KL, replace=False)
    return PilotBook(C=fourier_rows(rows, T), selected_rows=rows)


def make_reused_pilot_book(
    K: int, L: int, T: int, rng: np.random.Generator
) -> PilotBook:
    """Orthogonal pilots within every cell, independent row draws across cells.

    Used only when K*L exceeds T; users of different cells may then share a
    sequence and contaminate each other's estimates.
    """
    if K > T:
        raise PilotSupplyError(f"K={K} orthogonal pilots do not fit in T={T}", ["K", "T"])
    rows = np.concatenate([rng.choice(T, size=K, replace=False) for _ in range(L)])
    return PilotBook(C=fourier_rows(rows, T), selected_rows=rows)


def pilot_book_for(cfg, rng: np.random.Generator) -> PilotBook:
    """Orthogonal book when K*L fits in T, otherwise the reuse book if allowed."""
    if cfg.KL <= cfg.T or not cfg.pilot_reuse:
        return make_pilot_book(cfg.KL, cfg.T, rng)
    logger.debug(f"Reusing pilots across cells: K*L={cfg.KL} > T={cfg.T}")
    return make_reused_pilot_book(cfg.K, cfg.L, cfg.T, rng)


def make_data(KL: int, T: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) data symbols."""
    return complex_normal(rng, (KL, T))


def superimpose(C: np.ndarray, S: np.ndarray, alpha: float) -> TxFrame:
    if C.shape != S.shape:
        raise ShapeMismatchError(
            "pilot and data blocks differ in shape", expected=C.shape, actual=S.shape
        )
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 1.0:
        X = C.copy()
    elif alpha == 0.0:
        X = S.copy()
    else:
        X = math.sqrt(alpha) * C + math.sqrt(1.0 - alpha) * S
    return TxFrame(X=X, S=S, alpha=alpha)


def make_qtp_pilots(K: int, L: int, rng: np.random.Generator) -> QtpPilots:
    """K-point Fourier training book with a random per-cell permutation."""
    book = fourier_rows(np.arange(K), K)
    assignment = np.stack([rng.permutation(K) for _ in range(L)])
    return QtpPilots(book=book, assignment=assignment)
