"""Zero-threshold 1-bit complex quantizer and its Bussgang linear model."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ModelDomainError

logger = logging.getLogger(__name__)

# Quantization-noise variance of the 1-bit quantizer with unit-modulus output.
SIGMA_Z_SQ = 1.0 - 2.0 / math.pi

_SCALE = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class QuantizerModel:
    """Bussgang gain ``gamma`` and QN variance for an input of variance ``sigma_in_sq``.

    The infinite-resolution chain is the same model with ``gamma = 1`` and no
    quantization noise, so every downstream formula takes a QuantizerModel.
    """

    gamma: float
    sigma_z_sq: float
    sigma_in_sq: float

    @property
    def quantized(self) -> bool:
        return self.sigma_z_sq > 0.0

    @property
    def sqrt_gamma(self) -> float:
        return math.sqrt(self.gamma)


def quantize(Y: np.ndarray) -> np.ndarray:
    """Map each entry to (±1 ± j)/√2 by the signs of its real and imaginary parts.

    An exact zero component maps to +1.
    """
    Y = np.asarray(Y)
    re = np.where(Y.real >= 0.0, _SCALE, -_SCALE)
    im = np.where(Y.imag >= 0.0, _SCALE, -_SCALE)
    return re + 1j * im


def bussgang_params(sigma_in_sq: float) -> QuantizerModel:
    """Linear-model parameters of the 1-bit quantizer for a Gaussian input."""
    if not sigma_in_sq > 0.0:
        logger.error(f"Bussgang model requested for input variance {sigma_in_sq}")
        raise ModelDomainError(
            f"input variance must be positive, got {sigma_in_sq}", value=sigma_in_sq
        )
    return QuantizerModel(
        gamma=2.0 / (math.pi * sigma_in_sq),
        sigma_z_sq=SIGMA_Z_SQ,
        sigma_in_sq=float(sigma_in_sq),
    )


def unquantized_params(sigma_in_sq: float) -> QuantizerModel:
    """Identity model of an infinite-resolution receiver."""
    if not sigma_in_sq > 0.0:
        raise ModelDomainError(
            f"input variance must be positive, got {sigma_in_sq}", value=sigma_in_sq
        )
    return QuantizerModel(gamma=1.0, sigma_z_sq=0.0, sigma_in_sq=float(sigma_in_sq))


def receiver_model(quantized: bool, sigma_in_sq: float) -> QuantizerModel:
    if quantized:
        return bussgang_params(sigma_in_sq)
    return unquantized_params(sigma_in_sq)


def apply_receiver(Y: np.ndarray, quantized: bool) -> np.ndarray:
    """Pass a received block through the 1-bit front end, or leave it untouched."""
    return quantize(Y) if quantized else Y


def quantization_noise(Y: np.ndarray, model: QuantizerModel) -> np.ndarray:
    """Residual z = r − √γ·y of the Bussgang decomposition."""
    return quantize(Y) - model.sqrt_gamma * Y
