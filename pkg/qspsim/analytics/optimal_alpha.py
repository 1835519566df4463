"""Power split α that maximizes the closed-form SINRs.

Every SINR here is αᾱ·N / D(α) with D quadratic in α, so the stationary
points are the two roots of a quadratic. Both are evaluated and the feasible
one (in (0,1)) with the larger SINR is returned.
"""

import logging
import math
from typing import Callable, Sequence

import numpy as np

from ..link.exceptions import NoFeasibleRootError
from ..models import ClosedFormInputs
from .multicell import qsp_multicell_terms, uqsp_multicell_terms
from .single_cell import PI_SQ, qsp_single_terms, uqsp_single_terms

logger = logging.getLogger(__name__)

GRID_STEP = 1e-4


def sinr_curve(
    inputs: ClosedFormInputs, multicell: bool, quantized: bool
) -> Callable[[np.ndarray], np.ndarray]:
    """α ↦ Υ for the chosen expression, vectorized over α."""
    rho, T, M = inputs.rho, inputs.T, inputs.M
    if multicell:
        zetas = inputs.require_multicell()
        terms = qsp_multicell_terms if quantized else uqsp_multicell_terms
        return lambda alpha: np.divide(*terms(alpha, rho, T, M, *zetas))
    K = inputs.require_single_cell()
    terms = qsp_single_terms if quantized else uqsp_single_terms
    return lambda alpha: np.divide(*terms(alpha, rho, T, M, K))


def select_root(
    roots: Sequence[float], sinr: Callable[[np.ndarray], np.ndarray], label: str
) -> float:
    """Feasible root with the larger SINR; fails loudly if neither is in (0,1)."""
    feasible = [r for r in roots if math.isfinite(r) and 0.0 < r < 1.0]
    if not feasible:
        logger.error(f"{label}: no root in (0,1), roots={list(roots)}")
        raise NoFeasibleRootError(
            f"{label}: no stationary point in (0,1); roots are {list(roots)}",
            roots=roots,
        )
    if len(feasible) > 1:
        logger.debug(f"{label}: two feasible roots {feasible}")
    return max(feasible, key=lambda a: float(sinr(np.float64(a))))


def _quadratic_roots(
    center: float, discriminant: float, denominator: float, label: str
) -> tuple[float, ...]:
    """(center ± √discriminant)/denominator."""
    if discriminant < 0:
        raise NoFeasibleRootError(
            f"{label}: complex roots (discriminant {discriminant})", roots=()
        )
    if denominator == 0.0:
        # D(α) is linear in α and the stationarity condition reduces to α = 1/2.
        return (0.5,)
    root = math.sqrt(discriminant)
    return ((center + root) / denominator, (center - root) / denominator)


def optimal_alpha_single(inputs: ClosedFormInputs, quantized: bool = None) -> float:
    """Optimal power split for the single-cell system.

    Args:
        inputs: Scenario with ``K`` set; ``alpha`` is ignored.
        quantized: Selects the 1-bit (default from ``inputs``) or the
            infinite-resolution receiver.

    Returns:
        α* in (0,1).
    """
    if quantized is None:
        quantized = inputs.quantized
    K = inputs.require_single_cell()
    rho, T, M = inputs.rho, inputs.T, inputs.M
    if quantized:
        label = "optimal_alpha_single[QSP]"
        sigma_sq = K * rho + 1.0
        lam = 4 * rho**2 * K * (M * T + 1) + PI_SQ * sigma_sq**2 * (T - 1)
        discriminant = (
            lam * sigma_sq * (4 * rho * T * (T - K) + (T - 1) * sigma_sq * PI_SQ)
        )
        denominator = 4 * rho * (K * rho * (T * (K + M - T) + 1) - T * (T - K))
        roots = _quadratic_roots(lam, discriminant, denominator, label)
    else:
        label = "optimal_alpha_single[UQSP]"
        delta = T * (K**2 * rho**2 + K * rho * (M * rho + 2) + 1) + K * rho**2
        discriminant = delta * (T * rho + 1) * (K * rho + 1) * T
        denominator = rho * (
            K**2 * rho * T + K * (M * rho * T + rho - rho * T**2 + T) - T**2
        )
        roots = _quadratic_roots(delta, discriminant, denominator, label)
    return select_root(roots, sinr_curve(inputs, False, quantized), label)


def optimal_alpha_multicell(inputs: ClosedFormInputs, quantized: bool = None) -> float:
    """Optimal power split for the multicell system from the ζ statistics."""
    if quantized is None:
        quantized = inputs.quantized
    z1, z2, z3 = inputs.require_multicell()
    rho, T, M = inputs.rho, inputs.T, inputs.M
    if quantized:
        label = "optimal_alpha_multicell[QSP]"
        shared = PI_SQ * (T - 1) * (2 * z1 * rho + z2 * rho**2 + 1)
        delta = shared + 4 * z3 * M * rho**2 * T + 4 * z3 * rho**2
        delta_one = shared + 4 * rho * T * (z1 * rho * T - z1 - z2 * rho + T)
        denominator = 4 * rho * (
            z1 * T * (rho * T - 1) - rho * T * (z2 + z3 * M) - z3 * rho + T**2
        )
        roots = _quadratic_roots(-delta, delta * delta_one, denominator, label)
    else:
        label = "optimal_alpha_multicell[UQSP]"
        delta = (
            2 * rho * T * z1 + rho**2 * T * z2 + (rho**2 + M * rho**2 * T) * z3 + T
        )
        discriminant = T * (rho * z1 + 1) * (rho * T + 1) * delta
        denominator = (
            rho * T * (rho * T - 1) * z1
            - rho**2 * T * z2
            - rho * (M * rho * T + rho) * z3
            + rho * T**2
        )
        roots = _quadratic_roots(-delta, discriminant, denominator, label)
    return select_root(roots, sinr_curve(inputs, True, quantized), label)


def grid_argmax(
    inputs: ClosedFormInputs,
    multicell: bool,
    quantized: bool,
    step: float = GRID_STEP,
) -> float:
    """Brute-force argmax of Υ over the open grid step, 2·step, …, 1 − step."""
    alphas = np.arange(1, round(1.0 / step)) * step
    values = sinr_curve(inputs, multicell, quantized)(alphas)
    return float(alphas[int(np.argmax(values))])
