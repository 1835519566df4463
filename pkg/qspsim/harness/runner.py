"""Sweep execution: Monte Carlo columns next to the closed-form ones.

Sweep points run in order; within a point the independent drops fan out to
a thread pool. Every random draw is keyed by (seed, point, drop, trial), so
the table does not depend on the number of threads.
"""

import logging
import math
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ..analytics import (
    asymptotic_rate_M,
    asymptotic_rate_rho,
    optimal_alpha_multicell,
    rate_from_sinr,
    rate_per_drop_mean,
    sinr_multicell,
)
from ..link import rng as streams
from ..link.config import config
from ..link.detection import estimate_rates, optimize_alphas_mc
from ..link.estimation import estimate_mse_mc, mse_bound_multicell, mse_uqsp_single
from ..link.exceptions import ConfigError, ModelDomainError
from ..link.geometry import estimate_zeta_stats, sample_kappas
from ..models import ClosedFormInputs, ExperimentSpec, GeometryStats, NetworkConfig, Scheme
from .output import to_frame

logger = logging.getLogger(__name__)

StatsProvider = Callable[[NetworkConfig, int, int], GeometryStats]


def zeta_stream(seed: int, network: NetworkConfig) -> np.random.Generator:
    """Stream for the drops behind the network statistics of one geometry."""
    return streams.stream(seed, streams.ZETA_STATS, network.L, network.K)


def compute_zeta_stats(network: NetworkConfig, n_drops: int, seed: int) -> GeometryStats:
    return estimate_zeta_stats(network, n_drops, zeta_stream(seed, network), seed)


def kappa_samples(
    network: NetworkConfig, n_drops: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """The same drops ``compute_zeta_stats`` averages over."""
    return sample_kappas(network, n_drops, zeta_stream(seed, network))


def check_spec(spec: ExperimentSpec) -> None:
    """Reject measure/scheme combinations that have nothing to compute."""
    if spec.measure in ("mse", "optimal_alpha") and Scheme.QTP in spec.schemes:
        raise ConfigError(
            f"measure {spec.measure!r} is not defined for the time-multiplexed baseline",
            fields=["schemes"],
        )
    if spec.measure == "mse" and any(spec.pilot_removal):
        logger.warning("pilot_removal has no effect on channel-estimation MSE")


def closed_form_inputs(
    network: NetworkConfig, stats: GeometryStats, quantized: bool, alpha: float
) -> ClosedFormInputs:
    return ClosedFormInputs(
        alpha=alpha,
        rho=network.rho,
        T=network.T,
        M=network.M,
        K=network.K,
        zeta1=stats.zeta1,
        zeta2=stats.zeta2,
        zeta3=stats.zeta3,
        quantized=quantized,
    )


def analytic_alpha(
    spec: ExperimentSpec, network: NetworkConfig, stats: GeometryStats, quantized: bool
) -> float:
    """Fixed α of the experiment, or the closed-form optimum (nan if there is none)."""
    if spec.alpha is not None:
        return spec.alpha
    inputs = closed_form_inputs(network, stats, quantized, 0.5)
    try:
        return optimal_alpha_multicell(inputs, quantized)
    except ModelDomainError as e:
        logger.warning(f"No closed-form optimal alpha at {spec.sweep_variable}: {e}")
        return math.nan


def _analytic_rate_columns(
    spec: ExperimentSpec,
    network: NetworkConfig,
    stats: GeometryStats,
    kappas: tuple[np.ndarray, np.ndarray],
    scheme: Scheme,
) -> dict:
    if scheme is Scheme.QTP:
        return {
            "alpha_analytic": math.nan,
            "rate_analytic": math.nan,
            "rate_per_drop": math.nan,
            "rate_asymptote_M": math.nan,
            "rate_asymptote_rho": math.nan,
        }
    alpha = analytic_alpha(spec, network, stats, scheme.quantized)
    if math.isnan(alpha):
        rate = per_drop = limit_M = limit_rho = math.nan
    else:
        inputs = closed_form_inputs(network, stats, scheme.quantized, alpha)
        rate = rate_from_sinr(sinr_multicell(inputs))
        per_drop = rate_per_drop_mean(inputs, *kappas)
        limit_M = asymptotic_rate_M(alpha, network.T, stats.zeta3)
        qsp_limit, uqsp_limit = asymptotic_rate_rho(inputs)
        limit_rho = qsp_limit if scheme.quantized else uqsp_limit
    return {
        "alpha_analytic": alpha,
        "rate_analytic": rate,
        "rate_per_drop": per_drop,
        "rate_asymptote_M": limit_M,
        "rate_asymptote_rho": limit_rho,
    }


class SweepRunner:
    """Runs one experiment; ``stats`` supplies (possibly cached) ζ statistics."""

    def __init__(
        self,
        spec: ExperimentSpec,
        stats: Optional[StatsProvider] = None,
        executor: Optional[Executor] = None,
    ):
        check_spec(spec)
        self.spec = spec
        self.stats = stats or compute_zeta_stats
        self.executor = executor

    def _mc_kwargs(self, point: int) -> dict:
        spec = self.spec
        return dict(
            n_outer=spec.n_outer,
            n_inner=spec.n_inner,
            seed=spec.seed,
            point=point,
            redraw_pilots=spec.redraw_pilots,
            sample_variance_gamma=spec.sample_variance_gamma,
            executor=self.executor,
        )

    def _zeta(self, network: NetworkConfig) -> GeometryStats:
        return self.stats(network, self.spec.zeta_drops, self.spec.seed)

    def rate_rows(self, point: int, value: float) -> list[dict]:
        spec = self.spec
        network = spec.network_at(value)
        stats = self._zeta(network)
        kappas = kappa_samples(network, spec.zeta_drops, spec.seed)
        rows = []
        for scheme in spec.schemes:
            # QTP has no pilots in its data slots, so it gets a single row.
            flags = [False] if scheme is Scheme.QTP else spec.pilot_removal
            if spec.alpha is None and scheme is not Scheme.QTP:
                optimized = optimize_alphas_mc(
                    network, scheme, flags, **self._mc_kwargs(point)
                )
                estimates = {pr: est for pr, (_, est) in optimized.items()}
            else:
                estimates = estimate_rates(network, scheme, flags, **self._mc_kwargs(point))
            analytic = _analytic_rate_columns(spec, network, stats, kappas, scheme)
            for pr in flags:
                rows.append(
                    {spec.sweep_variable: value, **estimates[pr].as_row(), **analytic}
                )
        return rows

    def mse_rows(self, point: int, value: float) -> list[dict]:
        spec = self.spec
        rows = []
        for T in spec.T_values:
            network = spec.network_at(value, T=T)
            stats = self._zeta(network)
            for scheme in spec.schemes:
                quantized = scheme.quantized
                estimate = estimate_mse_mc(
                    network,
                    spec.n_outer,
                    spec.n_inner,
                    spec.seed,
                    point=point,
                    quantized=quantized,
                    redraw_pilots=spec.redraw_pilots,
                    executor=self.executor,
                )
                if quantized:
                    bound = mse_bound_multicell(network.alpha, network.rho, T, stats.zeta1)
                else:
                    # the single-cell form at K = ζ₁ is the Jensen bound over drops
                    bound = mse_uqsp_single(network.alpha, network.rho, T, stats.zeta1)
                rows.append(
                    {
                        spec.sweep_variable: value,
                        "T": T,
                        "scheme": scheme.value,
                        "alpha": network.alpha,
                        "empirical_mse": estimate.empirical,
                        "bound_mse": bound,
                        "model_mse": estimate.model,
                        "stderr": estimate.stderr,
                    }
                )
        return rows

    def optimal_alpha_rows(self, point: int, value: float) -> list[dict]:
        spec = self.spec
        network = spec.network_at(value)
        stats = self._zeta(network)
        rows = []
        for scheme in spec.schemes:
            optimized = optimize_alphas_mc(
                network, scheme, spec.pilot_removal, **self._mc_kwargs(point)
            )
            inputs = closed_form_inputs(network, stats, scheme.quantized, 0.5)
            try:
                alpha_star = optimal_alpha_multicell(inputs, scheme.quantized)
                rate = rate_from_sinr(sinr_multicell(inputs.with_alpha(alpha_star)))
            except ModelDomainError as e:
                logger.warning(f"No closed-form optimal alpha for {scheme.value}: {e}")
                alpha_star = rate = math.nan
            for pr in spec.pilot_removal:
                alpha_mc, est = optimized[pr]
                rows.append(
                    {
                        spec.sweep_variable: value,
                        "scheme": scheme.value,
                        "pilot_removal": pr,
                        "alpha_analytic": alpha_star,
                        "alpha_mc": alpha_mc,
                        "rate_analytic": rate,
                        "rate_mc": est.rate_bits,
                        "stderr": est.stderr,
                    }
                )
        return rows

    def stats_rows(self, point: int, value: float) -> list[dict]:
        network = self.spec.network_at(value)
        stats = self._zeta(network)
        return [
            {
                self.spec.sweep_variable: value,
                "L": network.L,
                **stats.model_dump(),
                "zeta1_per_K": stats.zeta1 / stats.K,
                "zeta3_per_K": stats.zeta3 / stats.K,
            }
        ]

    def asymptote_rows(self, point: int, value: float) -> list[dict]:
        network = self.spec.network_at(value)
        stats = self._zeta(network)
        inputs = closed_form_inputs(network, stats, True, network.alpha)
        qsp_limit, uqsp_limit = asymptotic_rate_rho(inputs)
        return [
            {
                self.spec.sweep_variable: value,
                "alpha": network.alpha,
                "zeta3": stats.zeta3,
                "rate_asymptote_M": asymptotic_rate_M(network.alpha, network.T, stats.zeta3),
                "rate_asymptote_rho_qsp": qsp_limit,
                "rate_asymptote_rho_uqsp": uqsp_limit,
            }
        ]

    def run(self) -> pd.DataFrame:
        spec = self.spec
        build = {
            "rate": self.rate_rows,
            "mse": self.mse_rows,
            "optimal_alpha": self.optimal_alpha_rows,
            "stats": self.stats_rows,
            "asymptote": self.asymptote_rows,
        }[spec.measure]
        logger.info(
            f"Running {spec.name}: {spec.measure} over {spec.sweep_variable} "
            f"({len(spec.sweep_values)} points, seed={spec.seed})"
        )
        rows = []
        for point, value in enumerate(spec.sweep_values):
            rows.extend(build(point, value))
            logger.info(f"{spec.name}: {spec.sweep_variable}={value:g} done")
        return to_frame(rows)


def run_experiment(
    spec: ExperimentSpec,
    threads: Optional[int] = None,
    stats: Optional[StatsProvider] = None,
) -> pd.DataFrame:
    """Run a sweep and return its table, one row per (value, scheme, flag).

    Args:
        spec: Validated experiment.
        threads: Worker threads for the drops (default from ``QSPSIM_THREADS``).
        stats: Provider of ζ statistics; computed directly when omitted.
    """
    threads = threads or config.threads
    if threads <= 1:
        return SweepRunner(spec, stats).run()
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return SweepRunner(spec, stats, executor).run()
