import math

import numpy as np
import pytest

from qspsim.link.exceptions import ModelDomainError
from qspsim.link.quantizer import (
    SIGMA_Z_SQ,
    apply_receiver,
    bussgang_params,
    quantization_noise,
    quantize,
    receiver_model,
    unquantized_params,
)
from qspsim.link.rng import complex_normal


def test_output_is_unit_modulus(rng):
    r = quantize(complex_normal(rng, (64, 64), 3.0))
    assert np.allclose(np.abs(r), 1.0)
    assert set(np.unique(r.real)) <= {-1 / math.sqrt(2), 1 / math.sqrt(2)}


def test_zero_maps_to_positive_corner():
    assert quantize(np.array([0j]))[0] == pytest.approx((1 + 1j) / math.sqrt(2))


def test_gain_and_noise_variance():
    model = bussgang_params(4.0)
    assert model.gamma == pytest.approx(2 / (math.pi * 4.0))
    assert model.sigma_z_sq == pytest.approx(0.3634, abs=1e-4)
    assert model.quantized


def test_noise_is_uncorrelated_with_input(rng):
    sigma_sq = 2.5
    Y = complex_normal(rng, 400_000, sigma_sq)
    model = bussgang_params(sigma_sq)
    Z = quantization_noise(Y, model)
    assert abs(np.mean(Z * Y.conj())) < 0.01
    assert np.mean(np.abs(Z) ** 2) == pytest.approx(SIGMA_Z_SQ, abs=0.005)


def test_noise_is_uncorrelated_with_channel(rng):
    n = 200_000
    h = complex_normal(rng, n)
    y = h * complex_normal(rng, n, 0.5) + h + complex_normal(rng, n)
    model = bussgang_params(float(np.mean(np.abs(y) ** 2)))
    z = quantization_noise(y, model)
    assert abs(np.mean(z * h.conj())) < 0.01


def test_noise_correlation_averages_out_over_antennas(rng):
    sigma_sq = 2.0
    model = bussgang_params(sigma_sq)
    Ms = np.array([64, 256, 1024])
    values = []
    for M in Ms:
        samples = []
        for _ in range(200):
            y = complex_normal(rng, M, sigma_sq)
            samples.append(abs(np.vdot(quantization_noise(y, model), y)) / M)
        values.append(np.mean(samples))
    slope = np.polyfit(np.log(Ms), np.log(values), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.1)


@pytest.mark.parametrize("variance", [0.0, -1.0, float("nan")])
def test_degenerate_variance_rejected(variance):
    with pytest.raises(ModelDomainError):
        bussgang_params(variance)


def test_unquantized_model_is_identity(rng):
    model = receiver_model(False, 2.0)
    assert model == unquantized_params(2.0)
    assert not model.quantized and model.gamma == 1.0
    Y = complex_normal(rng, (4, 4))
    assert apply_receiver(Y, quantized=False) is Y
    assert np.array_equal(apply_receiver(Y, quantized=True), quantize(Y))
