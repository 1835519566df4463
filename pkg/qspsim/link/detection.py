"""MRC detection and Monte Carlo achievable rates.

Rates use the worst-case-Gaussian bound: the MRC output of every home user is
fitted as ŝ = a·s + b·c + ε over one large-scale drop, and the drop's rate is
log₂(1 + |a|²/E|ε|²). The pilot term b·c is known at the receiver and is not
counted as noise. Reported rates are averages of per-drop rates.
"""

import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from functools import partial
from typing import Iterable, Optional, Sequence

import numpy as np

from ..models import NetworkConfig, RateEstimate, Scheme
from . import rng as streams
from .channel import DropTask, draw_superimposed_block, large_scale_amplitudes
from .estimation import estimate_channel, estimate_channel_qtp, lmmse_gain_qsp
from .exceptions import DegenerateSinrError, ShapeMismatchError
from .quantizer import apply_receiver, receiver_model
from .rng import complex_normal
from .waveform import make_qtp_pilots

logger = logging.getLogger(__name__)

# Coarse α grid {0.05, ..., 0.95}; the best point is refined in steps of 0.01.
DEFAULT_ALPHA_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
REFINE_STEP = 0.01
REFINE_SPAN = 4


def mrc_combine(R0: np.ndarray, H_hat: np.ndarray, t: Optional[int] = None) -> np.ndarray:
    """(1/M)·Ĥᴴ·r[t] for one slot, or for every slot when ``t`` is None."""
    M = R0.shape[0]
    if H_hat.shape[0] != M:
        raise ShapeMismatchError(
            "estimate and received block differ in antenna count",
            expected=M,
            actual=H_hat.shape[0],
        )
    column = R0 if t is None else R0[:, t]
    return (H_hat.conj().T @ column) / M


def remove_pilots(
    R0: np.ndarray,
    H_hat: np.ndarray,
    pilots: np.ndarray,
    alpha: float,
    rho: float,
    gamma: float,
) -> np.ndarray:
    """Subtract the estimated pilot contribution √(αργ)·Ĥ·c[t] from every slot."""
    if alpha == 0.0:
        return R0
    if H_hat.shape[1] != pilots.shape[0]:
        raise ShapeMismatchError(
            "one pilot row per estimated user is required",
            expected=H_hat.shape[1],
            actual=pilots.shape[0],
        )
    return R0 - math.sqrt(alpha * rho * gamma) * (H_hat @ pilots)


@dataclass
class EffectiveGainFit:
    """Streaming least-squares fit of MRC outputs on the transmitted symbols.

    The first regressor is the data symbol s; any further regressors (the
    known pilot c) are nuisance terms. Over the data and noise, the output
    of a fixed block has mean E{ŝ} = b·c, the deterministic pilot term, so
    fitting ŝ = a·s + b·c + ε gives

        â = ⟨s*·(ŝ − b̂·c)⟩ / ⟨|s|²⟩,
        σ̂²_ε = ⟨|ŝ|²⟩ − ⟨|â·s + b̂·c|²⟩,

    which, with s independent of c, is the sample form of
    σ²_ε = E|ŝ|² − |E ŝ|² − |a|². Without a nuisance
    regressor (pilot removal at the receiver) this is â = ⟨s*·ŝ⟩/⟨|s|²⟩
    with residual ⟨|ŝ − â·s|²⟩.
    """

    n: int = 0
    energy: float = 0.0
    gram: Optional[np.ndarray] = None
    cross: Optional[np.ndarray] = None

    def update(self, s_hat: np.ndarray, s: np.ndarray, *nuisance: np.ndarray) -> None:
        y = np.ravel(s_hat)
        X = np.column_stack([np.ravel(s)] + [np.ravel(c) for c in nuisance])
        if X.shape[0] != y.size:
            raise ShapeMismatchError("outputs and symbols differ", y.size, X.shape[0])
        if self.gram is None:
            self.gram = np.zeros((X.shape[1], X.shape[1]), dtype=complex)
            self.cross = np.zeros(X.shape[1], dtype=complex)
        self.gram += X.conj().T @ X
        self.cross += X.conj().T @ y
        self.energy += float(np.vdot(y, y).real)
        self.n += y.size

    def _residual(self, beta: np.ndarray) -> float:
        rss = (
            self.energy
            - 2.0 * float(np.vdot(beta, self.cross).real)
            + float(np.vdot(beta, self.gram @ beta).real)
        )
        return rss / self.n

    def solve(self) -> tuple[complex, float]:
        """Effective gain â and residual variance σ̂²_ε."""
        if self.n == 0 or self.energy == 0.0:
            # no output at all (no pilot energy, or no data slots)
            return 0j, math.inf
        beta = np.linalg.solve(self.gram, self.cross)
        noise_var = self._residual(beta)
        # Drop an imaginary part of â that is within noise.
        imag_stderr = math.sqrt(max(noise_var, 0.0) / (2.0 * self.gram[0, 0].real))
        if abs(beta[0].imag) < 3.0 * imag_stderr:
            beta[0] = beta[0].real
            noise_var = self._residual(beta)
        if not noise_var > 0.0:
            logger.error(f"Effective noise variance vanished ({noise_var}) over {self.n} samples")
            raise DegenerateSinrError(
                f"effective noise variance is {noise_var}; SINR is unbounded"
            )
        return complex(beta[0]), noise_var


def effective_sinr(
    s_hat: np.ndarray, s: np.ndarray, pilots: Optional[np.ndarray] = None
) -> tuple[complex, float]:
    """Fit ŝ = a·s (+ b·c) + ε in one shot and return (â, σ̂²_ε)."""
    fit = EffectiveGainFit()
    if pilots is None:
        fit.update(s_hat, s)
    else:
        fit.update(s_hat, s, pilots)
    return fit.solve()


def rate_bits(a_hat: complex, noise_var: float) -> float:
    return math.log2(1.0 + abs(a_hat) ** 2 / noise_var)


@dataclass(frozen=True)
class DropFit:
    """Fit of one large-scale drop."""

    a_hat: complex
    noise_var: float
    rate: float
    alpha: float

    @classmethod
    def from_fit(cls, fit: EffectiveGainFit, alpha: float, prefactor: float = 1.0):
        a_hat, noise_var = fit.solve()
        return cls(a_hat, noise_var, prefactor * rate_bits(a_hat, noise_var), alpha)

    @classmethod
    def no_data(cls, alpha: float) -> "DropFit":
        """α ∈ {0, 1}: either nothing to estimate with or nothing to detect."""
        return cls(0j, math.inf, 0.0, alpha)


def superimposed_outputs(
    Y: np.ndarray,
    C_home: np.ndarray,
    alpha: float,
    scheme: Scheme,
    cfg: NetworkConfig,
    kappa0: float,
    pr_flags: Iterable[bool],
    sample_variance_gamma: bool = False,
) -> dict[bool, np.ndarray]:
    """Receive, estimate and combine one superimposed block for each PR flag."""
    quantized = scheme.quantized
    if quantized and sample_variance_gamma:
        sigma_in_sq = float(np.mean(np.abs(Y) ** 2))
    else:
        sigma_in_sq = kappa0 * cfg.rho + 1.0
    quant = receiver_model(quantized, sigma_in_sq)
    R = apply_receiver(Y, quantized)
    xi = lmmse_gain_qsp(alpha, cfg.rho, cfg.T, kappa0, quant)
    estimate = estimate_channel(R, C_home, xi, scheme)
    outputs = {}
    for pr in pr_flags:
        if pr:
            R_used = remove_pilots(R, estimate.H_hat, C_home, alpha, cfg.rho, quant.gamma)
        else:
            R_used = R
        outputs[pr] = mrc_combine(R_used, estimate.H_hat)
    return outputs


def simulate_superimposed_drop(
    task: DropTask,
    scheme: Scheme,
    alphas: Sequence[float],
    pr_flags: Sequence[bool],
) -> dict[tuple[float, bool], DropFit]:
    """Fit every (α, PR) pair of one drop over the same inner trials."""
    cfg = task.cfg
    realization = task.realization()
    book = task.pilot_book()
    D0 = large_scale_amplitudes(realization.theta)
    C_home = book.C[: cfg.K]
    active = [a for a in alphas if 0.0 < a < 1.0]
    fits = {(a, pr): EffectiveGainFit() for a in active for pr in pr_flags}
    for trial in range(task.n_inner if active else 0):
        block = draw_superimposed_block(
            cfg.M, D0, book.C, cfg.K, cfg.rho, task.trial_stream(trial)
        )
        for alpha in active:
            outputs = superimposed_outputs(
                block.received(alpha),
                C_home,
                alpha,
                scheme,
                cfg,
                realization.kappa0,
                pr_flags,
                task.sample_variance_gamma,
            )
            for pr, s_hat in outputs.items():
                fits[(alpha, pr)].update(s_hat, block.S_home, C_home)
    logger.debug(
        f"drop {task.drop} at point {task.point}: kappa0={realization.kappa0:.3f}, "
        f"{len(fits)} fits over {task.n_inner} trials"
    )
    results = {key: DropFit.from_fit(fit, key[0]) for key, fit in fits.items()}
    for alpha in alphas:
        if alpha not in active:
            results.update({(alpha, pr): DropFit.no_data(alpha) for pr in pr_flags})
    return results


def simulate_qtp_drop(task: DropTask, quantized: bool = True) -> DropFit:
    """Time-multiplexed baseline: τ = K training slots, then T − τ data slots."""
    cfg = task.cfg
    realization = task.realization()
    qtp = make_qtp_pilots(
        cfg.K, cfg.L, streams.stream(task.seed, streams.QTP_ASSIGNMENT, task.point, task.drop)
    )
    tau = qtp.tau
    P = qtp.sequences()
    D0 = large_scale_amplitudes(realization.theta)
    quant = receiver_model(quantized, realization.kappa0 * cfg.rho + 1.0)
    fit = EffectiveGainFit()
    for trial in range(task.n_inner):
        rng = task.trial_stream(trial)
        H0 = complex_normal(rng, (cfg.M, cfg.KL))
        S = complex_normal(rng, (cfg.KL, cfg.T - tau))
        W = complex_normal(rng, (cfg.M, cfg.T))
        G = math.sqrt(cfg.rho) * (H0 * D0[np.newaxis, :])
        R = apply_receiver(G @ np.concatenate([P, S], axis=1) + W, quantized)
        estimate = estimate_channel_qtp(R[:, :tau], qtp, realization.theta, cfg.rho, quant)
        if cfg.T > tau:
            fit.update(mrc_combine(R[:, tau:], estimate.H_hat), S[: cfg.K])
    return DropFit.from_fit(fit, math.nan, prefactor=(cfg.T - tau) / cfg.T)


def _map(executor: Optional[Executor], fn, items):
    if executor is None:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def _stderr(values: Sequence[float]) -> float:
    if len(values) < 2:
        return math.nan
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def aggregate(
    fits: Sequence[DropFit],
    scheme: Scheme,
    pilot_removal: bool,
    n_inner: int,
) -> RateEstimate:
    """Average per-drop rates; â, σ̂²_ε and α are averaged alongside."""
    rates = [f.rate for f in fits]
    n = len(fits)
    return RateEstimate(
        rate_bits=math.fsum(rates) / n,
        a_hat=complex(
            math.fsum(f.a_hat.real for f in fits) / n,
            math.fsum(f.a_hat.imag for f in fits) / n,
        ),
        noise_var=math.fsum(f.noise_var for f in fits) / n,
        n_trials=n * n_inner,
        stderr=_stderr(rates),
        scheme=scheme,
        pilot_removal=pilot_removal,
        alpha_used=math.fsum(f.alpha for f in fits) / n,
    )


def _tasks(cfg, n_outer, n_inner, seed, point, redraw_pilots, sample_variance_gamma):
    return [
        DropTask(cfg, seed, point, d, n_inner, redraw_pilots, sample_variance_gamma)
        for d in range(n_outer)
    ]


def estimate_rates(
    cfg: NetworkConfig,
    scheme: Scheme,
    pr_flags: Sequence[bool],
    n_outer: int,
    n_inner: int,
    seed: int,
    point: int = 0,
    redraw_pilots: bool = False,
    sample_variance_gamma: bool = False,
    executor: Optional[Executor] = None,
) -> dict[bool, RateEstimate]:
    """Rates at the configured α for each PR flag, on shared drops and trials."""
    if n_outer < 1 or n_inner < 1:
        raise ValueError("n_outer and n_inner must be at least 1")
    tasks = _tasks(cfg, n_outer, n_inner, seed, point, redraw_pilots, sample_variance_gamma)
    if scheme is Scheme.QTP:
        fits = _map(executor, simulate_qtp_drop, tasks)
        return {pr: aggregate(fits, scheme, False, n_inner) for pr in pr_flags}
    per_drop = _map(
        executor,
        partial(
            simulate_superimposed_drop, scheme=scheme, alphas=[cfg.alpha], pr_flags=pr_flags
        ),
        tasks,
    )
    return {
        pr: aggregate([d[(cfg.alpha, pr)] for d in per_drop], scheme, pr, n_inner)
        for pr in pr_flags
    }


def estimate_rate(
    cfg: NetworkConfig,
    scheme: Scheme,
    pilot_removal: bool,
    n_outer: int,
    n_inner: int,
    seed: int,
    point: int = 0,
    **kwargs,
) -> RateEstimate:
    """Monte Carlo achievable rate of the home users of BS 0 at ``cfg.alpha``."""
    return estimate_rates(
        cfg, scheme, [pilot_removal], n_outer, n_inner, seed, point, **kwargs
    )[pilot_removal]


def _refinement(best: float, grid: Sequence[float]) -> list[float]:
    around = (round(best + k * REFINE_STEP, 4) for k in range(-REFINE_SPAN, REFINE_SPAN + 1))
    return [a for a in around if 0.0 < a < 1.0 and a not in grid]


@dataclass
class _BestAlpha:
    fit: Optional[DropFit] = None

    def offer(self, candidate: DropFit) -> None:
        if self.fit is None or candidate.rate > self.fit.rate:
            self.fit = candidate


def optimize_drop(
    task: DropTask,
    scheme: Scheme,
    pr_flags: Sequence[bool],
    grid: Sequence[float] = DEFAULT_ALPHA_GRID,
) -> dict[bool, DropFit]:
    """Per-drop maximizing α on the coarse grid, then one refinement pass.

    Both passes replay the same trial streams, so every α sees the same fading,
    data and noise.
    """
    coarse = simulate_superimposed_drop(task, scheme, list(grid), pr_flags)
    best = {pr: _BestAlpha() for pr in pr_flags}
    for (alpha, pr), fit in coarse.items():
        best[pr].offer(fit)
    fine_alphas = sorted({a for pr in pr_flags for a in _refinement(best[pr].fit.alpha, grid)})
    if fine_alphas:
        fine = simulate_superimposed_drop(task, scheme, fine_alphas, pr_flags)
        for (alpha, pr), fit in fine.items():
            if abs(alpha - best[pr].fit.alpha) <= REFINE_SPAN * REFINE_STEP + 1e-9:
                best[pr].offer(fit)
    return {pr: b.fit for pr, b in best.items()}


def optimize_alphas_mc(
    cfg: NetworkConfig,
    scheme: Scheme,
    pr_flags: Sequence[bool],
    n_outer: int,
    n_inner: int,
    seed: int,
    point: int = 0,
    grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    redraw_pilots: bool = False,
    sample_variance_gamma: bool = False,
    executor: Optional[Executor] = None,
) -> dict[bool, tuple[float, RateEstimate]]:
    """Average per-drop optimal α and the average of the maximal rates."""
    if scheme is Scheme.QTP:
        raise ValueError("the time-multiplexed baseline has no power split to optimize")
    if not grid or not all(0.0 < a < 1.0 for a in grid):
        raise ValueError("alpha grid must be a nonempty subset of (0, 1)")
    tasks = _tasks(cfg, n_outer, n_inner, seed, point, redraw_pilots, sample_variance_gamma)
    drop_fn = partial(optimize_drop, scheme=scheme, pr_flags=pr_flags, grid=grid)
    per_drop = _map(executor, drop_fn, tasks)
    results = {}
    for pr in pr_flags:
        estimate = aggregate([d[pr] for d in per_drop], scheme, pr, n_inner)
        results[pr] = (estimate.alpha_used, estimate)
    return results


def optimize_alpha_mc(
    cfg: NetworkConfig,
    scheme: Scheme,
    pilot_removal: bool,
    n_outer: int,
    n_inner: int,
    seed: int,
    point: int = 0,
    **kwargs,
) -> tuple[float, RateEstimate]:
    return optimize_alphas_mc(
        cfg, scheme, [pilot_removal], n_outer, n_inner, seed, point, **kwargs
    )[pilot_removal]
