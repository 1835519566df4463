"""LMMSE channel estimation for superimposed and time-multiplexed pilots.

All estimators are scaled pilot correlators of the received block. The
superimposed-pilot estimate of user k is ĥ_k = ξ·R·c*_k over the whole
coherence block; the unquantized receiver is the same estimator with γ = 1
and no quantization noise.
"""

import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from functools import partial
from typing import Optional, Union

import numpy as np

from ..models import NetworkConfig, Scheme
from .channel import DropTask, draw_superimposed_block, large_scale_amplitudes
from .exceptions import PilotSupplyError, ShapeMismatchError
from .quantizer import SIGMA_Z_SQ, QuantizerModel, apply_receiver, receiver_model
from .waveform import QtpPilots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelEstimate:
    """Estimated columns ``H_hat`` (M × users) and the LMMSE gain(s) used."""

    H_hat: np.ndarray
    xi: Union[float, np.ndarray]
    scheme: Scheme


def lmmse_gain_qsp(
    alpha: float, rho: float, T: int, kappa0: float, quant: QuantizerModel
) -> float:
    """ξ = √(αργ) / (αργT + ᾱργκ₀ + γ + σ²_z).

    With κ₀ = K this is the single-cell gain; with the identity model it is
    the infinite-resolution gain.
    """
    g = quant.gamma
    numerator = math.sqrt(alpha * rho * g)
    denominator = (
        alpha * rho * g * T + (1.0 - alpha) * rho * g * kappa0 + g + quant.sigma_z_sq
    )
    return numerator / denominator


def estimate_channel(
    R: np.ndarray, pilots: np.ndarray, xi: float, scheme: Scheme = Scheme.QSP
) -> ChannelEstimate:
    """Correlate every antenna's block with each user's pilot and scale by ξ.

    ``pilots`` holds one pilot per row (users × T), usually the home-cell rows
    of a PilotBook.
    """
    if R.shape[1] != pilots.shape[1]:
        raise ShapeMismatchError(
            "received block and pilots differ in length",
            expected=pilots.shape[1],
            actual=R.shape[1],
        )
    return ChannelEstimate(H_hat=xi * (R @ pilots.conj().T), xi=xi, scheme=scheme)


def mse_per_realization(
    alpha: float, rho: float, T: int, kappa0: float, quant: QuantizerModel
) -> float:
    """Per-coefficient error variance 1 − T·√(αργ)·ξ for one drop."""
    xi = lmmse_gain_qsp(alpha, rho, T, kappa0, quant)
    return 1.0 - T * math.sqrt(alpha * rho * quant.gamma) * xi


def mse_qsp_single(alpha: float, rho: float, T: int, K: int) -> float:
    """Single-cell error variance with the 1-bit receiver."""
    gamma = 2.0 / (math.pi * (K * rho + 1.0))
    correction = ((1.0 - alpha) * rho * K + SIGMA_Z_SQ / gamma + 1.0) / T
    return 1.0 - alpha * rho / (alpha * rho + correction)


def mse_uqsp_single(alpha: float, rho: float, T: int, K: int) -> float:
    """Single-cell error variance with the infinite-resolution receiver."""
    correction = ((1.0 - alpha) * rho * K + 1.0) / T
    return 1.0 - alpha * rho / (alpha * rho + correction)


def mse_bound_multicell(alpha: float, rho: float, T: int, zeta1: float) -> float:
    """Jensen upper bound on the drop-averaged error variance.

    Only κ₀ enters the per-drop variance, and it does so through a concave
    map, so evaluating at ζ₁ = E{κ₀} bounds the average from above.
    """
    qn = SIGMA_Z_SQ * math.pi / 2.0
    correction = (((1.0 - alpha) + qn) * rho * zeta1 + qn + 1.0) / T
    return 1.0 - alpha * rho / (alpha * rho + correction)


def mse_bound_limit_rho(alpha: float, T: int, zeta1: float) -> float:
    """High-SNR floor of the multicell bound."""
    qn = SIGMA_Z_SQ * math.pi / 2.0
    return 1.0 - alpha / (alpha + ((1.0 - alpha) + qn) * zeta1 / T)


def qtp_sequence_loads(qtp: QtpPilots, theta: np.ndarray) -> np.ndarray:
    """Σθ over all users sharing each training sequence."""
    K = qtp.book.shape[0]
    return np.bincount(
        qtp.assignment.reshape(-1), weights=np.asarray(theta).reshape(-1), minlength=K
    )


def lmmse_gain_qtp(
    rho: float, loads: np.ndarray, quant: QuantizerModel
) -> np.ndarray:
    """Per-sequence gain √(γρ) / (γρτ·S_c + γ + σ²_z), τ = K."""
    tau = loads.size
    g = quant.gamma
    return math.sqrt(g * rho) / (g * rho * tau * loads + g + quant.sigma_z_sq)


def estimate_channel_qtp(
    R_train: np.ndarray,
    qtp: QtpPilots,
    theta: np.ndarray,
    rho: float,
    quant: QuantizerModel,
) -> ChannelEstimate:
    """Per-antenna scalar LMMSE estimates of the home users from the training slots.

    Users of other cells that reuse a home user's sequence contaminate its
    estimate; the gain accounts for their average power.
    """
    K = theta.shape[1]
    if qtp.tau != K:
        raise PilotSupplyError(
            f"training length {qtp.tau} must equal K={K}", fields=["K"]
        )
    if R_train.shape[1] != qtp.tau:
        raise ShapeMismatchError(
            "training block length differs from tau",
            expected=qtp.tau,
            actual=R_train.shape[1],
        )
    xi_per_sequence = lmmse_gain_qtp(rho, qtp_sequence_loads(qtp, theta), quant)
    home = qtp.assignment[0]
    xi = xi_per_sequence[home]
    H_hat = (R_train @ qtp.book[home].conj().T) * xi[np.newaxis, :]
    return ChannelEstimate(H_hat=H_hat, xi=xi, scheme=Scheme.QTP)


def empirical_mse(H_true: np.ndarray, H_hat: np.ndarray) -> float:
    """Mean squared error per coefficient."""
    if H_true.shape != H_hat.shape:
        raise ShapeMismatchError(
            "true and estimated channels differ in shape", H_true.shape, H_hat.shape
        )
    return float(np.mean(np.abs(H_true - H_hat) ** 2))


@dataclass(frozen=True)
class MseEstimate:
    """Drop-averaged empirical MSE and the per-drop model variance it tracks."""

    empirical: float
    stderr: float
    model: float
    n_trials: int


def simulate_mse_drop(task: DropTask, quantized: bool = True) -> tuple[float, float]:
    """Empirical MSE of the home users over one drop, and 1 − T√(αργ)ξ for it."""
    cfg = task.cfg
    realization = task.realization()
    book = task.pilot_book()
    D0 = large_scale_amplitudes(realization.theta)
    C_home = book.C[: cfg.K]
    quant = receiver_model(quantized, realization.kappa0 * cfg.rho + 1.0)
    xi = lmmse_gain_qsp(cfg.alpha, cfg.rho, cfg.T, realization.kappa0, quant)
    scheme = Scheme.QSP if quantized else Scheme.UQSP
    errors = []
    for trial in range(task.n_inner):
        block = draw_superimposed_block(
            cfg.M, D0, book.C, cfg.K, cfg.rho, task.trial_stream(trial)
        )
        R = apply_receiver(block.received(cfg.alpha), quantized)
        estimate = estimate_channel(R, C_home, xi, scheme)
        errors.append(empirical_mse(block.H_home, estimate.H_hat))
    model = mse_per_realization(cfg.alpha, cfg.rho, cfg.T, realization.kappa0, quant)
    return math.fsum(errors) / len(errors), model


def estimate_mse_mc(
    cfg: NetworkConfig,
    n_outer: int,
    n_inner: int,
    seed: int,
    point: int = 0,
    quantized: bool = True,
    redraw_pilots: bool = False,
    executor: Optional[Executor] = None,
) -> MseEstimate:
    """Channel-estimation MSE averaged over antennas, users, trials and drops."""
    tasks = [
        DropTask(cfg, seed, point, d, n_inner, redraw_pilots) for d in range(n_outer)
    ]
    fn = partial(simulate_mse_drop, quantized=quantized)
    results = [fn(t) for t in tasks] if executor is None else list(executor.map(fn, tasks))
    empirical = [r[0] for r in results]
    stderr = (
        float(np.std(empirical, ddof=1) / math.sqrt(n_outer)) if n_outer > 1 else math.nan
    )
    return MseEstimate(
        empirical=math.fsum(empirical) / n_outer,
        stderr=stderr,
        model=math.fsum(r[1] for r in results) / n_outer,
        n_trials=n_outer * n_inner,
    )
