"""Multicell closed forms.

The per-drop noise variance depends on the drop only through κ₀, κ₀² and κ₁
once the quantizer gain is written out, and it is linear in those (and in
σ⁴ = (κ₀ρ+1)²). Averaging over drops therefore amounts to substituting the
moments ζ₁, ζ₂, ζ₃, which is how the drop-averaged SINRs are obtained.
"""

import logging
import math

import numpy as np

from ..link.estimation import lmmse_gain_qsp
from ..link.quantizer import receiver_model
from ..models import ClosedFormInputs
from .single_cell import PI_SQ, checked_ratio, default_f_tt

logger = logging.getLogger(__name__)


def qsp_multicell_terms(alpha, rho, T, M, zeta1, zeta2, zeta3):
    ab = 1.0 - alpha
    numerator = alpha * ab * rho**2 * T**2 * M
    denominator = (
        ab * rho**2 * M * T * zeta3
        + ab**2 * rho**2 * zeta3
        + 0.25 * (PI_SQ * rho**2 * T - PI_SQ * rho**2 - 4 * alpha * rho**2 * T) * zeta2
        + 0.25
        * (
            4 * alpha * rho**2 * T**2
            - 2 * PI_SQ * rho
            - 4 * alpha * rho * T
            + 2 * PI_SQ * rho * T
        )
        * zeta1
        + 0.25
        * (
            4 * alpha * rho * T**2
            - 8 * alpha**2 * rho**2 * T
            + 8 * alpha * rho**2 * T
            + PI_SQ * T
            - PI_SQ
        )
    )
    return numerator, denominator


def uqsp_multicell_terms(alpha, rho, T, M, zeta1, zeta2, zeta3):
    ab = 1.0 - alpha
    numerator = alpha * ab * rho**2 * T**2 * M
    denominator = (
        ab * rho**2 * M * T * zeta3
        + ab**2 * rho**2 * zeta3
        + ab * rho**2 * T * zeta2
        + (alpha * rho**2 * T**2 + alpha * rho * T + 2 * ab * rho * T) * zeta1
        + alpha * rho * T**2
        + 2 * alpha * ab * rho**2 * T
        + T
    )
    return numerator, denominator


def sinr_qsp_multicell(inputs: ClosedFormInputs) -> float:
    """Drop-averaged effective SINR of the 1-bit multicell system."""
    z1, z2, z3 = inputs.require_multicell()
    num, den = qsp_multicell_terms(inputs.alpha, inputs.rho, inputs.T, inputs.M, z1, z2, z3)
    return float(checked_ratio(num, den, "sinr_qsp_multicell"))


def sinr_uqsp_multicell(inputs: ClosedFormInputs) -> float:
    """Drop-averaged effective SINR of the infinite-resolution multicell system."""
    z1, z2, z3 = inputs.require_multicell()
    num, den = uqsp_multicell_terms(inputs.alpha, inputs.rho, inputs.T, inputs.M, z1, z2, z3)
    return float(checked_ratio(num, den, "sinr_uqsp_multicell"))


def sinr_multicell(inputs: ClosedFormInputs) -> float:
    if inputs.quantized:
        return sinr_qsp_multicell(inputs)
    return sinr_uqsp_multicell(inputs)


def mu1_multicell(
    alpha: float, rho: float, T: int, M: float, kappa0: float, kappa1: float
) -> float:
    """Multicell counterpart of the fourth-order pilot moment, for one drop."""
    ab = 1.0 - alpha
    return M * (
        (
            2 * alpha * M * rho**2 * T
            - 2 * alpha * M * rho
            - 2 * alpha**2 * M * rho**2 * T
            - 2 * rho
            + alpha * rho**2 * T**2
            - alpha * rho * T
            + 2 * rho * T
        )
        * kappa0
        + (
            alpha**2 * M * rho**2
            - 2 * alpha * M * rho**2
            - rho**2
            - alpha * rho**2 * T
            + rho**2 * T
        )
        * kappa0**2
        + ab * rho**2 * (M * T + ab) * kappa1
        + alpha * M * rho**2 * T**2
        + 2 * alpha * M * rho * T
        + alpha * rho * T**2
        - 2 * alpha**2 * rho**2 * T
        + 2 * alpha * rho**2 * T
        + T
        - 1
    )


def sigma_eps_multicell(
    inputs: ClosedFormInputs, kappa0: float, kappa1: float, f_tt: float = None
) -> float:
    """Normalized effective noise variance of one drop, assembled from moments.

    Same construction as the single-cell assembly with K replaced by κ₀ in
    the estimator and the received power, and the drop's κ₁ entering through
    the fourth-order moment.
    """
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    sigma_sq = kappa0 * rho + 1.0
    quant = receiver_model(inputs.quantized, sigma_sq)
    g, s = quant.gamma, quant.sigma_z_sq
    if f_tt is None:
        f_tt = default_f_tt(inputs.quantized, M, sigma_sq)
    xi = lmmse_gain_qsp(alpha, rho, T, kappa0, quant)
    gain_sq = alpha * (1.0 - alpha) * rho**2 * g**2 * xi**2 * T**2
    if gain_sq == 0.0:
        return math.inf
    output_power = (
        xi**2 * f_tt
        + xi**2 * g**2 * mu1_multicell(alpha, rho, T, M, kappa0, kappa1) / M**2
        + 2 * alpha * rho * xi**2 * s * g * (T - kappa0)
        + xi**2 * s**2 * (T - 1) / M
        + 2 * xi**2 * g * s * sigma_sq * (T - 1) / M
    )
    return (output_power - alpha * rho * g - gain_sq) / gain_sq


def sigma_eps_multicell_closed_form(
    inputs: ClosedFormInputs, kappa0: float, kappa1: float, f_tt: float = None
) -> float:
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    ab = 1.0 - alpha
    sigma_sq = kappa0 * rho + 1.0
    quant = receiver_model(inputs.quantized, sigma_sq)
    g, s = quant.gamma, quant.sigma_z_sq
    if f_tt is None:
        f_tt = default_f_tt(inputs.quantized, M, sigma_sq)
    denominator = alpha * ab * g**2 * M**2 * rho**2 * T**2
    if denominator == 0.0:
        return math.inf
    numerator = (
        M**2 * f_tt
        + g**2
        * M
        * rho
        * (
            kappa0
            * (
                kappa0 * rho * (ab * T - M - 1)
                - 2 * M
                + T * (alpha + 2 * ab + alpha * rho * T)
                - 2
            )
            + ab * rho * (ab + M * T) * kappa1
        )
        + g**2 * M * (-M + T * (alpha * rho * (2 * ab * rho + T) + 1) - 1)
        + M * (T - M - 1) * (2 * g * sigma_sq + s) * s
    )
    return numerator / denominator


def noise_polynomial(alpha, rho, T, M, quantized, sigma4, k0, k0sq, k1):
    """M·|a|²-normalized noise power, linear in (σ⁴, κ₀, κ₀², κ₁).

    Pass one drop's values for its noise variance or the moments
    (E σ⁴, ζ₁, ζ₂, ζ₃) for the drop average. Works elementwise on arrays.
    """
    ab = 1.0 - alpha
    if quantized:
        sigma4_coeff = PI_SQ / 4.0 * (T - 1) + M + 1 - T
    else:
        sigma4_coeff = M + 1
    return (
        sigma4_coeff * sigma4
        + rho
        * (
            rho * (ab * T - M - 1) * k0sq
            + (-2 * M + T * (alpha + 2 * ab + alpha * rho * T) - 2) * k0
            + ab * rho * (ab + M * T) * k1
        )
        + (-M + T * (alpha * rho * (2 * ab * rho + T) + 1) - 1)
    )


def expected_sigma_eps_multicell(inputs: ClosedFormInputs) -> float:
    """Drop-averaged noise variance; its reciprocal is the multicell SINR."""
    z1, z2, z3 = inputs.require_multicell()
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    scale = alpha * (1.0 - alpha) * rho**2 * M * T**2
    if scale == 0.0:
        return math.inf
    sigma4 = rho**2 * z2 + 2 * rho * z1 + 1.0
    return float(
        noise_polynomial(alpha, rho, T, M, inputs.quantized, sigma4, z1, z2, z3) / scale
    )


def rate_per_drop_mean(
    inputs: ClosedFormInputs, kappa0: np.ndarray, kappa1: np.ndarray
) -> float:
    """Mean over drops of log₂(1 + 1/σ̃²(κ₀, κ₁)).

    The closed-form SINR puts the average inside the logarithm; this is the
    ergodic rate the Monte Carlo estimator targets.
    """
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    scale = alpha * (1.0 - alpha) * rho**2 * M * T**2
    if scale == 0.0:
        return 0.0
    k0 = np.asarray(kappa0, dtype=float)
    k1 = np.asarray(kappa1, dtype=float)
    noise = noise_polynomial(
        alpha, rho, T, M, inputs.quantized, (k0 * rho + 1.0) ** 2, k0, k0**2, k1
    )
    sinr = checked_ratio(scale, noise, "rate_per_drop_mean")
    return float(np.mean(np.log2(1.0 + sinr)))
