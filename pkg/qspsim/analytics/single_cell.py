"""Single-cell closed forms.

Each SINR is kept as one expanded polynomial so that it can be
checked against the independent assembly from the MRC-output moments
(``sigma_eps_qsp_single``). The ``*_terms`` functions take plain floats or
numpy arrays and return (numerator, denominator).
"""

import logging
import math

import numpy as np

from ..link.estimation import lmmse_gain_qsp
from ..link.exceptions import ModelDomainError
from ..link.quantizer import receiver_model
from ..models import ClosedFormInputs

logger = logging.getLogger(__name__)

PI_SQ = math.pi**2


def checked_ratio(numerator, denominator, expr: str):
    """numerator/denominator, refusing nonpositive noise terms."""
    if np.any(np.asarray(denominator) <= 0):
        bad = float(np.min(denominator))
        logger.error(f"{expr}: nonpositive denominator {bad}")
        raise ModelDomainError(
            f"{expr} has a nonpositive denominator ({bad}); parameters are outside the model",
            value=bad,
        )
    return numerator / denominator


def qsp_single_terms(alpha, rho, T, M, K):
    ab = 1.0 - alpha
    numerator = ab * alpha * rho**2 * T**2 * M
    denominator = (
        ab * rho**2 * K * T * M
        + T
        / 4.0
        * (
            8 * alpha * ab * rho**2
            - 4 * alpha * K**2 * rho**2
            + PI_SQ * K**2 * rho**2
            - 4 * alpha * K * rho
            + 2 * PI_SQ * K * rho
            + PI_SQ
        )
        + alpha**2 * K * rho**2
        - 2 * alpha * K * rho**2
        - PI_SQ / 4.0 * K**2 * rho**2
        + K * rho**2
        - PI_SQ / 2.0 * K * rho
        + alpha * rho * T**2 * (1 + K * rho)
        - PI_SQ / 4.0
    )
    return numerator, denominator


def uqsp_single_terms(alpha, rho, T, M, K):
    ab = 1.0 - alpha
    numerator = alpha * ab * rho**2 * T**2 * M
    denominator = (
        ab * rho**2 * K * T * M
        + alpha * rho * (K * rho + 1) * T**2
        + 2 * alpha * ab * rho**2 * T
        + ab * rho**2 * K**2 * T
        + (2 - alpha) * rho * K * T
        + T
        + ab**2 * rho**2 * K
    )
    return numerator, denominator


def sinr_qsp_single(inputs: ClosedFormInputs) -> float:
    """Effective SINR of the 1-bit single-cell system."""
    K = inputs.require_single_cell()
    num, den = qsp_single_terms(inputs.alpha, inputs.rho, inputs.T, inputs.M, K)
    return float(checked_ratio(num, den, "sinr_qsp_single"))


def sinr_uqsp_single(inputs: ClosedFormInputs) -> float:
    """Effective SINR of the infinite-resolution single-cell system."""
    K = inputs.require_single_cell()
    num, den = uqsp_single_terms(inputs.alpha, inputs.rho, inputs.T, inputs.M, K)
    return float(checked_ratio(num, den, "sinr_uqsp_single"))


def sinr_single(inputs: ClosedFormInputs) -> float:
    if inputs.quantized:
        return sinr_qsp_single(inputs)
    return sinr_uqsp_single(inputs)


def mu1_single(alpha: float, rho: float, T: int, M: float, K: int) -> float:
    """Fourth-order moment of the pilot-correlated block minus M(M+1)σ⁴_y."""
    ab = 1.0 - alpha
    return (
        alpha**2 * rho**2 * M * T**2 * (K + M)
        + ab**2 * rho**2 * K * M * (K * M + K * T + M * T + 1)
        + ab * alpha * rho**2 * K * M * T * (K + M)
        + ab * alpha * rho**2 * M * T**2 * (K + M)
        + 2 * ab * rho * K * M**2
        + 2 * ab * alpha * rho**2 * M * T * (K * M + 1)
        + 2 * ab * rho * K * M * T
        + alpha * rho * K * M * T
        + 2 * alpha * rho * M**2 * T
        + alpha * rho * M * T**2
        + M * (M + T)
        - M * (M + 1) * (K * rho + 1) ** 2
    )


def default_f_tt(quantized: bool, M: float, sigma_sq: float) -> float:
    """E‖r[t]‖⁴/M²: one for unit-modulus samples, (M+1)σ⁴/M otherwise."""
    if quantized:
        return 1.0
    return (M + 1) * sigma_sq**2 / M


def sigma_eps_qsp_single(inputs: ClosedFormInputs, f_tt: float = None) -> float:
    """Normalized effective noise variance assembled from the MRC-output moments.

    E|ŝ|² is built from μ₁ and the quantization-noise cross terms, the
    pilot mean |E ŝ|² = αργ and the signal power |a|² are removed, and the
    rest is normalized by |a|². The reciprocal is the effective SINR.
    """
    K = inputs.require_single_cell()
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    sigma_sq = K * rho + 1.0
    quant = receiver_model(inputs.quantized, sigma_sq)
    g, s = quant.gamma, quant.sigma_z_sq
    if f_tt is None:
        f_tt = default_f_tt(inputs.quantized, M, sigma_sq)
    xi = lmmse_gain_qsp(alpha, rho, T, K, quant)
    gain_sq = alpha * (1.0 - alpha) * rho**2 * g**2 * xi**2 * T**2
    if gain_sq == 0.0:
        return math.inf
    output_power = (
        xi**2 * f_tt
        + xi**2 * g**2 * mu1_single(alpha, rho, T, M, K) / M**2
        + 2 * alpha * rho * xi**2 * s * g * (T - K)
        + xi**2 * s**2 * (T - 1) / M
        + 2 * xi**2 * g * s * sigma_sq * (T - 1) / M
    )
    pilot_power = alpha * rho * g
    return (output_power - pilot_power - gain_sq) / gain_sq


def sigma_eps_single_closed_form(inputs: ClosedFormInputs, f_tt: float = None) -> float:
    """The same noise variance in its simplified closed form."""
    K = inputs.require_single_cell()
    alpha, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
    ab = 1.0 - alpha
    sigma_sq = K * rho + 1.0
    quant = receiver_model(inputs.quantized, sigma_sq)
    g, s = quant.gamma, quant.sigma_z_sq
    if f_tt is None:
        f_tt = default_f_tt(inputs.quantized, M, sigma_sq)
    denominator = alpha * ab * rho**2 * g**2 * M**2 * T**2
    if denominator == 0.0:
        return math.inf
    inner = (
        rho**2
        * (
            K**2 * (M - ab * T + 1)
            - K * (ab * M * T + alpha * (alpha + T**2 - 2) + 1)
            - 2 * ab * alpha * T
        )
        + rho * (2 * K * (M - T + 1) + alpha * T * (K - T))
        + M
        - T
        + 1
    )
    numerator = (
        M**2 * f_tt
        - g**2 * M * inner
        + M * (T - M - 1) * (2 * g * sigma_sq + s) * s
    )
    return numerator / denominator
