"""Large-array and high-SNR limits of the achievable rates."""

import logging
import math

from ..models import ClosedFormInputs
from .single_cell import checked_ratio

logger = logging.getLogger(__name__)


def rate_from_sinr(sinr: float) -> float:
    """log₂(1 + Υ) in bits/s/Hz."""
    return math.log2(1.0 + sinr)


def asymptotic_rate_M(alpha: float, T: int, denom: float) -> float:
    """Rate as M → ∞: log₂(1 + αT/denom).

    ``denom`` is K for a single cell and ζ₃ for the multicell network; the
    quantization noise averages out, so the limit is the same for both
    receivers.
    """
    if denom <= 0:
        raise ValueError(f"denom must be positive, got {denom}")
    return math.log2(1.0 + alpha * T / denom)


def sinr_limit_rho_qsp(inputs: ClosedFormInputs) -> float:
    """High-SNR limit of the 1-bit multicell SINR."""
    z1, z2, z3 = inputs.require_multicell()
    a, T, M = inputs.alpha, inputs.T, inputs.M
    ab = 1.0 - a
    numerator = ab * a * M * T**2
    denominator = (
        a * T**2 * z1
        - 0.25 * (4 * a * T - math.pi**2 * T + math.pi**2) * z2
        + ab * (ab + M * T) * z3
        + 2 * ab * a * T
    )
    return float(checked_ratio(numerator, denominator, "sinr_limit_rho_qsp"))


def sinr_limit_rho_uqsp(inputs: ClosedFormInputs) -> float:
    """High-SNR limit of the infinite-resolution multicell SINR."""
    z1, z2, z3 = inputs.require_multicell()
    a, T, M = inputs.alpha, inputs.T, inputs.M
    ab = 1.0 - a
    numerator = a * ab * M * T**2
    denominator = (
        a * T**2 * z1 + ab * T * z2 + ab * (ab + M * T) * z3 + 2 * a * ab * T
    )
    return float(checked_ratio(numerator, denominator, "sinr_limit_rho_uqsp"))


def asymptotic_rate_rho(inputs: ClosedFormInputs) -> tuple[float, float]:
    """(QSP, UQSP) rates as ρ → ∞ at the given α and M."""
    return (
        rate_from_sinr(sinr_limit_rho_qsp(inputs)),
        rate_from_sinr(sinr_limit_rho_uqsp(inputs)),
    )
