"""Command-line entry point.

    qspsim stats    --K 5 12 --n-drops 100000 --seed 1
    qspsim analytic --expr sinr_qsp_multicell --snr-db -10 --M 100 --T 200 \\
                    --zeta1 16.9392 --zeta2 288.6 --zeta3 13.9872 --alpha opt
    qspsim mse      --snr-db -20 -10 0 --T 200 50 --pilot-reuse --seed 1
    qspsim mc       --scheme QSP --snr-db -10 --seed 1 --threads 4
    qspsim preset   fig4 --seed 1 --out fig4.csv --threads 4
    qspsim preset   --config sweep.json
    qspsim serve    --port 8000
"""

import argparse
import logging
import sys
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Optional, Sequence, get_args

import pandas as pd

from . import __version__
from .analytics import CSV_COLUMNS, evaluate
from .harness import ExperimentCoordinator, load_config, preset, to_frame, write_csv
from .link.config import config
from .link.detection import estimate_rate, optimize_alpha_mc
from .link.exceptions import ConfigError, QspSimError
from .models import (
    ClosedFormInputs,
    ExperimentSpec,
    Expression,
    NetworkConfig,
    RateEstimate,
    Scheme,
)

logger = logging.getLogger("qspsim")

STATS_COLUMNS = ["K", "n_drops", "zeta1", "zeta2", "zeta3", "se1", "se2", "se3", "seed"]
MSE_COLUMNS = ["snr_db", "T", "alpha", "empirical_mse", "bound_mse", "stderr"]
MC_COLUMNS = [
    "scheme", "pilot_removal", "M", "K", "L", "T", "snr_db", "alpha",
    "rate_bits", "stderr", "n_outer", "n_inner", "seed",
]


def _rho(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def _emit(frame: pd.DataFrame, out: Optional[str]) -> None:
    text = write_csv(frame, out)
    if out is None:
        sys.stdout.write(text)


def _add_scenario_args(parser: argparse.ArgumentParser, with_T: bool = True) -> None:
    parser.add_argument("--L", type=int, default=7, help="cells (1, 7 or 19)")
    parser.add_argument("--K", type=int, default=12, help="users per cell")
    parser.add_argument("--M", type=int, default=100, help="BS antennas")
    if with_T:
        parser.add_argument("--T", type=int, default=200, help="coherence length")
    parser.add_argument("--n-outer", type=int, default=config.n_outer, help="large-scale drops")
    parser.add_argument("--n-inner", type=int, default=config.n_inner, help="trials per drop")


def cmd_stats(args: argparse.Namespace) -> int:
    coordinator = ExperimentCoordinator.get_instance()
    rows = []
    for K in args.K:
        network = NetworkConfig(L=args.L, K=K, T=max(200, K * args.L))
        stats = coordinator.zeta_stats(network, args.n_drops, args.seed)
        rows.append(stats.model_dump())
    _emit(to_frame(rows, STATS_COLUMNS), args.out)
    return 0


def cmd_analytic(args: argparse.Namespace) -> int:
    optimize = args.alpha == "opt"
    inputs = ClosedFormInputs(
        alpha=0.5 if optimize else float(args.alpha),
        rho=_rho(args.snr_db) if args.rho is None else args.rho,
        T=args.T,
        M=args.M,
        K=args.K,
        zeta1=args.zeta1,
        zeta2=args.zeta2,
        zeta3=args.zeta3,
        quantized=not args.unquantized,
    )
    rows = []
    for expr in args.expr:
        rows.extend(evaluate(expr, inputs, optimize_alpha=optimize))
    _emit(to_frame(rows, CSV_COLUMNS), args.out)
    return 0


def cmd_mse(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        name="mse",
        measure="mse",
        sweep_variable="snr_db",
        sweep_values=args.snr_db,
        schemes=[Scheme.UQSP if args.unquantized else Scheme.QSP],
        seed=args.seed,
        L=args.L,
        K=args.K,
        M=args.M,
        T=args.T[0],
        extra_T=args.T[1:],
        alpha=args.alpha,
        n_outer=args.n_outer,
        n_inner=args.n_inner,
        pilot_reuse=args.pilot_reuse,
    )
    frame = ExperimentCoordinator.get_instance().run(spec, threads=args.threads)
    _emit(frame.reindex(columns=MSE_COLUMNS), args.out)
    return 0


def _mc_estimate(
    args: argparse.Namespace,
    network: NetworkConfig,
    scheme: Scheme,
    executor: Optional[Executor],
) -> RateEstimate:
    if args.alpha is None and scheme is not Scheme.QTP:
        _, estimate = optimize_alpha_mc(
            network, scheme, args.pr, args.n_outer, args.n_inner, args.seed, executor=executor
        )
        return estimate
    return estimate_rate(
        network, scheme, args.pr, args.n_outer, args.n_inner, args.seed, executor=executor
    )


def cmd_mc(args: argparse.Namespace) -> int:
    scheme = Scheme(args.scheme)
    network = NetworkConfig(
        L=args.L,
        K=args.K,
        M=args.M,
        T=args.T,
        rho=_rho(args.snr_db),
        alpha=0.5 if args.alpha is None else args.alpha,
    )
    threads = args.threads or config.threads
    if threads <= 1:
        estimate = _mc_estimate(args, network, scheme, None)
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            estimate = _mc_estimate(args, network, scheme, executor)
    row = {
        "scheme": scheme.value,
        "pilot_removal": estimate.pilot_removal,
        "M": args.M,
        "K": args.K,
        "L": args.L,
        "T": args.T,
        "snr_db": args.snr_db,
        "alpha": estimate.alpha_used,
        "rate_bits": estimate.rate_bits,
        "stderr": estimate.stderr,
        "n_outer": args.n_outer,
        "n_inner": args.n_inner,
        "seed": args.seed,
    }
    _emit(to_frame([row], MC_COLUMNS), args.out)
    return 0


def cmd_preset(args: argparse.Namespace) -> int:
    if args.config:
        spec = load_config(args.config)
    elif args.name:
        if args.seed is None:
            raise ConfigError("--seed is required for presets", fields=["seed"])
        spec = preset(args.name, args.seed, publication=args.publication)
    else:
        raise ConfigError("give a preset name or --config", fields=["preset"])
    frame = ExperimentCoordinator.get_instance().run(spec, threads=args.threads)
    _emit(frame, args.out or spec.output)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("qspsim.main:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspsim",
        description="Superimposed pilots with 1-bit massive MIMO receivers: "
        "Monte Carlo rates, closed forms and figure presets.",
    )
    parser.add_argument("--version", action="version", version=f"qspsim {__version__}")
    parser.add_argument("--log-level", default=config.log_level)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="network statistics zeta1..zeta3 per K")
    p.add_argument("--L", type=int, default=7)
    p.add_argument("--K", type=int, nargs="+", default=[12])
    p.add_argument("--n-drops", type=int, default=config.zeta_drops)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("analytic", help="evaluate closed-form rates")
    p.add_argument(
        "--expr",
        nargs="+",
        required=True,
        choices=get_args(Expression),
    )
    p.add_argument("--alpha", default="0.5", help="power split, or 'opt' for the closed-form optimum")
    p.add_argument("--snr-db", type=float, default=-10.0)
    p.add_argument("--rho", type=float, help="linear SNR (overrides --snr-db)")
    p.add_argument("--M", type=float, default=100)
    p.add_argument("--K", type=int)
    p.add_argument("--T", type=int, default=200)
    p.add_argument("--zeta1", type=float)
    p.add_argument("--zeta2", type=float)
    p.add_argument("--zeta3", type=float)
    p.add_argument("--unquantized", action="store_true", help="infinite-resolution receiver")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("mse", help="Monte Carlo channel-estimation MSE vs SNR")
    _add_scenario_args(p, with_T=False)
    p.add_argument("--T", type=int, nargs="+", default=[200], help="coherence lengths")
    p.add_argument("--snr-db", type=float, nargs="+", default=[-20, -15, -10, -5, 0])
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--pilot-reuse", action="store_true")
    p.add_argument("--unquantized", action="store_true")
    p.add_argument("--threads", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mse)

    p = sub.add_parser("mc", help="Monte Carlo achievable rate at one point")
    _add_scenario_args(p)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="QSP")
    p.add_argument("--pr", action="store_true", help="remove the estimated pilot term")
    p.add_argument("--snr-db", type=float, default=-10.0)
    p.add_argument("--alpha", type=float, help="power split; optimized per drop when omitted")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("preset", help="run a named figure/table experiment or a config file")
    p.add_argument("name", nargs="?", help="fig3, fig4, fig5, fig6, table1 or table2")
    p.add_argument("--config", help="JSON experiment file")
    p.add_argument("--seed", type=int)
    p.add_argument("--publication", action="store_true", help="publication-scale trial counts")
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return args.func(args)
    except (QspSimError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 2
