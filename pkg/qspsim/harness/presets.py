"""Named sweeps behind the fig/table presets.

Desk-scale trial counts finish on a laptop; ``publication=True`` restores the
counts used for the full-resolution curves.
"""

import logging
from typing import Callable

from ..link.exceptions import ConfigError
from ..models import ExperimentSpec, Scheme

logger = logging.getLogger(__name__)

DESK_COUNTS = {"n_outer": 20, "n_inner": 5, "zeta_drops": 20000}
PUBLICATION_COUNTS = {"n_outer": 200, "n_inner": 50, "zeta_drops": 100000}

TABLE_K_VALUES = [5, 12, 15, 25]


def _fig3() -> dict:
    # T=50 cannot hold K*L orthogonal pilots, so rows are reused across cells.
    return dict(
        name="fig3",
        measure="mse",
        sweep_variable="snr_db",
        sweep_values=[-20, -15, -10, -5, 0],
        schemes=[Scheme.QSP],
        T=200,
        extra_T=[50],
        alpha=0.5,
        pilot_reuse=True,
    )


def _fig4() -> dict:
    return dict(
        name="fig4",
        measure="rate",
        sweep_variable="snr_db",
        sweep_values=[-20, -15, -10, -5, 0, 5, 10],
        schemes=[Scheme.QSP, Scheme.UQSP, Scheme.QTP],
        pilot_removal=[False, True],
        alpha=None,
    )


def _fig5() -> dict:
    return dict(
        name="fig5",
        measure="rate",
        sweep_variable="K",
        sweep_values=TABLE_K_VALUES,
        schemes=[Scheme.QSP, Scheme.UQSP, Scheme.QTP],
        pilot_removal=[False, True],
        alpha=None,
    )


def _fig6() -> dict:
    return dict(
        name="fig6",
        measure="rate",
        sweep_variable="M",
        sweep_values=[2**n for n in range(5, 13)],
        schemes=[Scheme.QSP, Scheme.UQSP],
        snr_db=-5.0,
        alpha=None,
    )


def _table1() -> dict:
    return dict(
        name="table1",
        measure="stats",
        sweep_variable="K",
        sweep_values=TABLE_K_VALUES,
    )


def _table2() -> dict:
    return dict(
        name="table2",
        measure="optimal_alpha",
        sweep_variable="M",
        sweep_values=[50, 200, 600, 1000],
        schemes=[Scheme.QSP, Scheme.UQSP],
        pilot_removal=[False, True],
        alpha=None,
    )


PRESETS: dict[str, Callable[[], dict]] = {
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "table1": _table1,
    "table2": _table2,
}


def preset(name: str, seed: int, publication: bool = False) -> ExperimentSpec:
    """Build a named experiment.

    Args:
        name: One of ``PRESETS``.
        seed: Root seed of every random stream in the run.
        publication: Use the large trial counts instead of desk scale.
    """
    builder = PRESETS.get(name)
    if builder is None:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}", fields=["preset"]
        )
    counts = PUBLICATION_COUNTS if publication else DESK_COUNTS
    logger.info(f"Preset {name} ({'publication' if publication else 'desk'} scale)")
    return ExperimentSpec(**builder(), **counts, seed=seed)
