import math

import numpy as np
import pytest

from qspsim.link.geometry import (
    base_stations,
    drop_users,
    estimate_zeta_stats,
    in_hexagon,
    sample_hexagon,
    sample_kappas,
)
from qspsim.link.rng import stream
from qspsim.models import NetworkConfig

R = 1.8


def test_first_tier_distance():
    bs = base_stations(7, R)
    assert np.allclose(bs[0], 0.0)
    assert np.allclose(np.hypot(bs[1:, 0], bs[1:, 1]), math.sqrt(3) * R)


def test_second_tier_distances():
    bs = base_stations(19, R)
    d = np.sort(np.hypot(bs[7:, 0], bs[7:, 1]))
    assert np.allclose(d[:6], 2 * math.sqrt(3) * R)
    assert np.allclose(d[6:], 3 * R)
    # all sites distinct
    assert len({tuple(np.round(p, 9)) for p in bs}) == 19


def test_hexagon_membership():
    points = np.array(
        [[0.99 * R, 0.0], [1.01 * R, 0.0], [0.0, 0.86 * R], [0.0, 0.87 * R], [0.5 * R, 0.8 * R]]
    )
    assert in_hexagon(points, R).tolist() == [True, False, True, False, True]


def test_sampled_users_avoid_forbidden_disk(rng):
    points = sample_hexagon(5000, R, 0.1, rng)
    assert points.shape == (5000, 2)
    assert in_hexagon(points, R).all()
    assert (np.hypot(points[:, 0], points[:, 1]) > 0.1).all()


def test_home_cell_gains_are_unity(rng):
    realization = drop_users(NetworkConfig(), rng)
    assert np.array_equal(realization.theta[0], np.ones(12))
    assert realization.kappa0 >= 12 and realization.kappa1 >= 12
    assert realization.kappa1 <= realization.kappa0
    assert 0 < realization.max_cross_theta


def test_single_cell_has_no_interference(rng):
    cfg = NetworkConfig(L=1, K=5, T=20)
    realization = drop_users(cfg, rng)
    assert realization.kappa0 == realization.kappa1 == 5.0
    assert realization.max_cross_theta == 0.0
    k0, k1 = sample_kappas(cfg, 10, rng)
    assert (k0 == 5.0).all() and (k1 == 5.0).all()


def test_second_tier_adds_interference():
    seven = estimate_zeta_stats(NetworkConfig(L=7), 5000, stream(2, "zeta"))
    nineteen = estimate_zeta_stats(
        NetworkConfig(L=19, T=228), 5000, stream(2, "zeta")
    )
    assert nineteen.zeta1 > seven.zeta1


def test_statistics_edge_cases(rng):
    single = estimate_zeta_stats(NetworkConfig(), 1, rng)
    assert math.isnan(single.se1)
    with pytest.raises(ValueError):
        estimate_zeta_stats(NetworkConfig(), 0, rng)


def test_statistics_are_reproducible():
    a = estimate_zeta_stats(NetworkConfig(), 500, stream(9, "zeta"))
    b = estimate_zeta_stats(NetworkConfig(), 500, stream(9, "zeta"))
    assert a == b


@pytest.mark.slow
@pytest.mark.parametrize("K,zeta2", [(5, 50.53), (12, 288.6)])
def test_one_tier_network_statistics(K, zeta2):
    stats = estimate_zeta_stats(NetworkConfig(K=K), 100_000, stream(2024, "zeta", K))
    assert stats.zeta1 / K == pytest.approx(1.4116, rel=0.02)
    assert stats.zeta3 / K == pytest.approx(1.1656, rel=0.02)
    assert stats.zeta2 == pytest.approx(zeta2, rel=0.05)
