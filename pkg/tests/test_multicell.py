import numpy as np
import pytest

from conftest import bits, random_multicell, rel_err
from qspsim.analytics import (
    asymptotic_rate_M,
    expected_sigma_eps_multicell,
    rate_per_drop_mean,
    sigma_eps_multicell,
    sigma_eps_multicell_closed_form,
    sigma_eps_qsp_single,
    sinr_multicell,
    sinr_qsp_multicell,
    sinr_qsp_single,
    sinr_uqsp_multicell,
)
from qspsim.analytics.multicell import noise_polynomial
from qspsim.link.geometry import sample_kappas
from qspsim.link.rng import stream
from qspsim.models import ClosedFormInputs, NetworkConfig


@pytest.mark.parametrize("quantized", [True, False])
def test_drop_average_matches_closed_form_over_box(quantized):
    rng = np.random.default_rng(21 + quantized)
    expr = sinr_qsp_multicell if quantized else sinr_uqsp_multicell
    for _ in range(1000):
        inputs = random_multicell(rng, quantized)
        assert abs(expr(inputs) * expected_sigma_eps_multicell(inputs) - 1.0) < 1e-10


@pytest.mark.parametrize("quantized", [True, False])
def test_per_drop_assemblies_agree(quantized):
    rng = np.random.default_rng(31 + quantized)
    for _ in range(500):
        inputs = random_multicell(rng, quantized)
        kappa0 = float(rng.uniform(inputs.K, 2 * inputs.K))
        kappa1 = float(rng.uniform(inputs.K, kappa0))
        assembled = sigma_eps_multicell(inputs, kappa0, kappa1)
        closed = sigma_eps_multicell_closed_form(inputs, kappa0, kappa1)
        a, rho, T, M = inputs.alpha, inputs.rho, inputs.T, inputs.M
        polynomial = noise_polynomial(
            a, rho, T, M, quantized, (kappa0 * rho + 1) ** 2, kappa0, kappa0**2, kappa1
        ) / (a * (1 - a) * rho**2 * M * T**2)
        assert rel_err(assembled, closed) < 1e-10
        assert rel_err(polynomial, closed) < 1e-10


def test_deterministic_statistics_reduce_to_single_cell():
    rng = np.random.default_rng(41)
    for _ in range(200):
        inputs = random_multicell(rng)
        K = inputs.K
        flat = inputs.model_copy(update={"zeta1": K, "zeta2": K**2, "zeta3": K})
        assert rel_err(sinr_qsp_multicell(flat), sinr_qsp_single(inputs)) < 1e-9


def test_drop_without_interference_matches_single_cell():
    inputs = ClosedFormInputs(alpha=0.5, rho=0.1, T=200, M=100, K=12)
    assert rel_err(sigma_eps_multicell(inputs, 12.0, 12.0), sigma_eps_qsp_single(inputs)) < 1e-10


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_no_rate_without_pilot_or_data(multicell_inputs, alpha):
    inputs = multicell_inputs.with_alpha(alpha)
    assert sinr_qsp_multicell(inputs) == 0.0
    assert sinr_uqsp_multicell(inputs) == 0.0


def test_large_array_limit(multicell_inputs):
    inputs = multicell_inputs.model_copy(update={"alpha": 0.6, "M": 1e12, "zeta3": 13.987})
    limit = asymptotic_rate_M(0.6, 200, 13.987)
    assert limit == pytest.approx(3.2599, abs=1e-4)
    assert bits(sinr_qsp_multicell(inputs)) == pytest.approx(limit, abs=1e-6)
    assert bits(sinr_uqsp_multicell(inputs)) == pytest.approx(limit, abs=1e-6)


def test_drop_average_is_mean_of_per_drop_variances(multicell_inputs):
    kappa0, kappa1 = sample_kappas(NetworkConfig(), 2000, stream(5, "test-kappas"))
    inputs = multicell_inputs.model_copy(
        update={
            "zeta1": float(kappa0.mean()),
            "zeta2": float((kappa0**2).mean()),
            "zeta3": float(kappa1.mean()),
        }
    )
    # The noise variance is affine in κ₀, κ₀² and κ₁.
    per_drop = np.mean([sigma_eps_multicell(inputs, k0, k1) for k0, k1 in zip(kappa0, kappa1)])
    assert rel_err(per_drop, expected_sigma_eps_multicell(inputs)) < 1e-9
    # log(1 + 1/x) is convex, so the per-drop mean sits above the averaged bound.
    assert rate_per_drop_mean(inputs, kappa0, kappa1) >= bits(sinr_multicell(inputs)) - 1e-12


def test_constant_drops_give_the_averaged_rate(multicell_inputs):
    K = 12.0
    inputs = multicell_inputs.model_copy(update={"zeta1": K, "zeta2": K**2, "zeta3": K})
    kappas = np.full(50, K)
    assert rate_per_drop_mean(inputs, kappas, kappas) == pytest.approx(
        bits(sinr_qsp_multicell(inputs)), rel=1e-12
    )


def test_multicell_needs_statistics():
    with pytest.raises(ValueError, match="zeta1"):
        sinr_qsp_multicell(ClosedFormInputs(rho=0.1, T=200, M=100, K=12))


def test_quantization_never_helps():
    rng = np.random.default_rng(51)
    for _ in range(1000):
        inputs = random_multicell(rng)
        assert sinr_uqsp_multicell(inputs) >= sinr_qsp_multicell(inputs)


def test_interference_costs_rate(multicell_inputs):
    single = ClosedFormInputs(alpha=0.5, rho=0.1, T=200, M=100, K=12)
    assert sinr_qsp_multicell(multicell_inputs) < sinr_qsp_single(single)
