import math

import numpy as np
import pytest

from qspsim.link.channel import DropTask, draw_superimposed_block, large_scale_amplitudes
from qspsim.link.estimation import (
    empirical_mse,
    estimate_channel,
    estimate_channel_qtp,
    estimate_mse_mc,
    lmmse_gain_qsp,
    mse_bound_limit_rho,
    mse_bound_multicell,
    mse_per_realization,
    mse_qsp_single,
    mse_uqsp_single,
    simulate_mse_drop,
)
from qspsim.link.exceptions import PilotSupplyError, ShapeMismatchError
from qspsim.link.geometry import drop_users, sample_kappas
from qspsim.link.quantizer import apply_receiver, bussgang_params, receiver_model, unquantized_params
from qspsim.link.rng import complex_normal, stream
from qspsim.link.waveform import QtpPilots, fourier_rows, make_pilot_book, make_qtp_pilots
from qspsim.models import NetworkConfig


@pytest.mark.parametrize("alpha,rho,T,K", [(0.5, 0.1, 200, 12), (0.2, 3.0, 40, 7), (0.9, 0.01, 16, 1)])
def test_per_realization_variance_matches_single_cell(alpha, rho, T, K):
    quantized = bussgang_params(K * rho + 1.0)
    assert mse_per_realization(alpha, rho, T, K, quantized) == pytest.approx(
        mse_qsp_single(alpha, rho, T, K), rel=1e-12
    )
    unquantized = unquantized_params(K * rho + 1.0)
    assert mse_per_realization(alpha, rho, T, K, unquantized) == pytest.approx(
        mse_uqsp_single(alpha, rho, T, K), rel=1e-12
    )


def test_bound_value():
    assert mse_bound_multicell(0.5, 0.1, 200, 16.9392) == pytest.approx(0.25288, abs=1e-4)


def test_bound_floor():
    assert mse_bound_multicell(0.5, 1e9, 200, 16.9392) == pytest.approx(
        mse_bound_limit_rho(0.5, 200, 16.9392), rel=1e-6
    )


def test_bound_dominates_drop_average():
    kappa0, _ = sample_kappas(NetworkConfig(), 5000, stream(4, "kappa"))
    zeta1 = float(kappa0.mean())
    for rho in (0.01, 0.1, 1.0):
        average = np.mean(
            [mse_per_realization(0.5, rho, 200, k, bussgang_params(k * rho + 1.0)) for k in kappa0]
        )
        assert average <= mse_bound_multicell(0.5, rho, 200, zeta1) + 1e-12


def test_estimator_scales_the_correlator(rng):
    R = rng.standard_normal((4, 8)) + 0j
    pilots = np.exp(1j * rng.uniform(0, 2 * np.pi, (2, 8)))
    estimate = estimate_channel(R, pilots, 0.5)
    assert np.allclose(estimate.H_hat, 0.5 * R @ pilots.conj().T)
    with pytest.raises(ShapeMismatchError):
        estimate_channel(R, pilots[:, :7], 0.5)


def test_gain_reduces_with_interference():
    quant = unquantized_params(2.0)
    assert lmmse_gain_qsp(0.5, 0.1, 200, 20, quant) < lmmse_gain_qsp(0.5, 0.1, 200, 12, quant)


@pytest.mark.parametrize("quantized", [False, True])
def test_estimate_is_orthogonal_to_error(quantized):
    cfg = NetworkConfig(L=7, K=4, M=64, T=64, rho=1.0, alpha=0.5)
    rng = np.random.default_rng(101)
    corr, power = [], []
    for _ in range(8):
        drop = drop_users(cfg, rng)
        D0 = large_scale_amplitudes(drop.theta)
        C = make_pilot_book(cfg.KL, cfg.T, rng).C
        quant = receiver_model(quantized, drop.kappa0 * cfg.rho + 1.0)
        xi = lmmse_gain_qsp(cfg.alpha, cfg.rho, cfg.T, drop.kappa0, quant)
        for _ in range(12):
            block = draw_superimposed_block(cfg.M, D0, C, cfg.K, cfg.rho, rng)
            R = apply_receiver(block.received(cfg.alpha), quantized)
            H_hat = estimate_channel(R, C[: cfg.K], xi).H_hat
            corr.append(np.mean(H_hat.conj() * (block.H_home - H_hat)))
            power.append(np.mean(np.abs(H_hat) ** 2))
    corr = np.asarray(corr)
    if quantized:
        # The linearized quantizer leaves a small bias.
        assert abs(corr.mean()) < 0.02 * np.mean(power)
    else:
        assert abs(corr.mean()) < 3.0 * np.std(corr, ddof=1) / math.sqrt(corr.size)


def test_unquantized_mse_matches_model():
    cfg = NetworkConfig(L=1, K=4, M=32, T=64, rho=1.0, alpha=0.4)
    result = estimate_mse_mc(cfg, n_outer=4, n_inner=20, seed=7, quantized=False)
    assert result.empirical == pytest.approx(result.model, rel=0.05)
    assert result.model == pytest.approx(mse_uqsp_single(0.4, 1.0, 64, 4), rel=1e-12)
    assert result.n_trials == 80


def test_mse_drop_is_deterministic(small_network):
    task = DropTask(small_network, seed=11, point=0, drop=0, n_inner=2)
    assert simulate_mse_drop(task) == simulate_mse_drop(task)


def test_single_drop_has_no_stderr(small_network):
    assert math.isnan(estimate_mse_mc(small_network, 1, 1, seed=1).stderr)


def test_empirical_mse_shapes():
    with pytest.raises(ShapeMismatchError):
        empirical_mse(np.zeros((2, 2)), np.zeros((2, 3)))
    assert empirical_mse(np.ones((2, 2)), np.zeros((2, 2))) == 1.0


def test_qtp_training_must_cover_users(rng):
    qtp = make_qtp_pilots(4, 2, rng)
    with pytest.raises(PilotSupplyError):
        estimate_channel_qtp(np.zeros((8, 4), complex), qtp, np.ones((2, 3)), 1.0, bussgang_params(2.0))


def test_qtp_estimate_shape(rng):
    qtp = make_qtp_pilots(4, 2, rng)
    theta = np.vstack([np.ones(4), np.full(4, 0.1)])
    estimate = estimate_channel_qtp(
        np.ones((8, 4), complex), qtp, theta, 1.0, bussgang_params(2.0)
    )
    assert estimate.H_hat.shape == (8, 4)
    assert estimate.xi.shape == (4,)


def _proportional(estimate: np.ndarray, truth: np.ndarray) -> bool:
    ratio = estimate / truth
    return bool(np.allclose(ratio, ratio.flat[0], rtol=1e-9, atol=0.0))


def test_qtp_single_cell_estimate_is_colinear(rng):
    K, M, rho = 3, 8, 2.0
    qtp = make_qtp_pilots(K, 1, rng)
    H = complex_normal(rng, (M, K))
    R = math.sqrt(rho) * H @ qtp.sequences()
    estimate = estimate_channel_qtp(R, qtp, np.ones((1, K)), rho, unquantized_params(K * rho + 1.0))
    for k in range(K):
        assert _proportional(estimate.H_hat[:, k], H[:, k])


def test_qtp_shared_sequence_contaminates(rng):
    # User 0 of cell 0 and user 1 of cell 1 share sequence 1, and vice versa.
    qtp = QtpPilots(book=fourier_rows(np.arange(2), 2), assignment=np.array([[1, 0], [0, 1]]))
    theta = np.array([[1.0, 1.0], [0.3, 0.2]])
    H = complex_normal(rng, (6, 4))
    R = (H * large_scale_amplitudes(theta)) @ qtp.sequences()
    estimate = estimate_channel_qtp(R, qtp, theta, 1.0, unquantized_params(2.5))
    assert _proportional(estimate.H_hat[:, 0], H[:, 0] + math.sqrt(0.2) * H[:, 3])
    assert _proportional(estimate.H_hat[:, 1], H[:, 1] + math.sqrt(0.3) * H[:, 2])


def test_qtp_quantization_raises_mse():
    cfg = NetworkConfig(K=12, M=100, rho=1.0)
    rng = np.random.default_rng(202)
    drop = drop_users(cfg, rng)
    qtp = make_qtp_pilots(cfg.K, cfg.L, rng)
    D0 = large_scale_amplitudes(drop.theta)
    mse = {True: [], False: []}
    for _ in range(10):
        H0 = complex_normal(rng, (cfg.M, cfg.KL))
        Y = math.sqrt(cfg.rho) * (H0 * D0) @ qtp.sequences() + complex_normal(rng, (cfg.M, qtp.tau))
        for quantized in (True, False):
            quant = receiver_model(quantized, drop.kappa0 * cfg.rho + 1.0)
            estimate = estimate_channel_qtp(
                apply_receiver(Y, quantized), qtp, drop.theta, cfg.rho, quant
            )
            mse[quantized].append(empirical_mse(H0[:, : cfg.K], estimate.H_hat))
    assert np.mean(mse[True]) > np.mean(mse[False])


@pytest.mark.slow
def test_quantized_mse_tracks_bound():
    curves = {}
    for T in (200, 50):
        curve = []
        for point, snr_db in enumerate((-20.0, -10.0, 0.0)):
            rho = 10.0 ** (snr_db / 10.0)
            cfg = NetworkConfig(T=T, rho=rho, pilot_reuse=True)
            result = estimate_mse_mc(cfg, n_outer=20, n_inner=5, seed=3, point=point)
            kappa0, _ = sample_kappas(cfg, 20000, stream(3, "kappa"))
            bound = mse_bound_multicell(0.5, rho, T, float(kappa0.mean()))
            if T == 200:
                assert 0.85 <= result.empirical / bound <= 1.05
            curve.append(result.empirical)
        curves[T] = curve
    assert all(short > long for short, long in zip(curves[50], curves[200]))
