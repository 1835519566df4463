import io

import pytest

from qspsim.cli import main
from qspsim.harness import read_csv


def _table(capsys):
    return read_csv(io.StringIO(capsys.readouterr().out))


def test_analytic_single_cell_limit(capsys):
    code = main(
        ["analytic", "--expr", "sinr_qsp_single", "asymptote_M", "--K", "12", "--M", "1e9", "--T", "200"]
    )
    assert code == 0
    table = _table(capsys)
    assert list(table.expr) == ["sinr_qsp_single", "asymptote_M"]
    assert table.value_bits.tolist() == pytest.approx([3.2224, 3.2224], abs=1e-4)


def test_analytic_optimized_split(capsys):
    code = main(
        [
            "analytic", "--expr", "sinr_qsp_multicell", "--alpha", "opt", "--M", "50",
            "--zeta1", "16.9392", "--zeta2", "288.6", "--zeta3", "13.9872",
        ]
    )
    assert code == 0
    assert _table(capsys).alpha.iloc[0] == pytest.approx(0.38, abs=0.01)


def test_analytic_missing_statistics_fails(capsys):
    assert main(["analytic", "--expr", "sinr_qsp_multicell", "--K", "12"]) == 2


def test_stats_to_file(tmp_path):
    out = tmp_path / "stats.csv"
    assert main(["stats", "--K", "2", "3", "--n-drops", "50", "--seed", "1", "--out", str(out)]) == 0
    table = read_csv(out)
    assert list(table.K) == [2, 3]
    assert (table.zeta1 > table.K).all()


def test_mc_rate(capsys):
    code = main(
        ["mc", "--K", "2", "--M", "16", "--T", "32", "--alpha", "0.5", "--n-outer", "2", "--n-inner", "2", "--seed", "3"]
    )
    assert code == 0
    row = _table(capsys).iloc[0]
    assert row.scheme == "QSP" and row.rate_bits > 0 and row.seed == 3


def test_mc_rate_is_independent_of_threads(capsys):
    args = ["mc", "--K", "2", "--M", "16", "--T", "32", "--n-outer", "3", "--n-inner", "2", "--seed", "5"]
    assert main(args) == 0
    serial = _table(capsys).iloc[0]
    assert main(args + ["--threads", "2"]) == 0
    threaded = _table(capsys).iloc[0]
    assert threaded.rate_bits == pytest.approx(serial.rate_bits, rel=1e-12)
    assert threaded.alpha == pytest.approx(serial.alpha, rel=1e-12)


def test_mse_sweep(capsys):
    code = main(
        [
            "mse", "--K", "2", "--M", "16", "--T", "32", "16", "--snr-db", "-10", "0",
            "--n-outer", "2", "--n-inner", "1", "--seed", "4",
        ]
    )
    assert code == 0
    table = _table(capsys)
    assert len(table) == 4
    assert list(table.columns) == ["snr_db", "T", "alpha", "empirical_mse", "bound_mse", "stderr"]


def test_preset_from_config(tmp_path):
    config = tmp_path / "exp.json"
    out = tmp_path / "limits.csv"
    config.write_text(
        '{"name": "limits", "measure": "asymptote", "sweep_variable": "alpha",'
        ' "sweep_values": [0.5], "seed": 2, "zeta_drops": 50, "output": "%s"}' % out.as_posix(),
        encoding="utf-8",
    )
    assert main(["preset", "--config", str(config)]) == 0
    assert read_csv(out).rate_asymptote_M.iloc[0] > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["preset", "fig9", "--seed", "1"],
        ["preset", "fig4"],
        ["preset"],
        ["mse", "--T", "50", "--seed", "1"],
    ],
)
def test_errors_exit_with_status_two(argv):
    assert main(argv) == 2


def test_seed_is_required():
    with pytest.raises(SystemExit):
        main(["mc"])
