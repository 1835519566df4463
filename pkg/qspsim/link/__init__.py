"""Link-level simulation of the uplink at BS 0."""

from .channel import (
    ChannelRealization,
    DropTask,
    SuperimposedBlock,
    draw_channel,
    draw_superimposed_block,
    received_block,
    rho_from_db,
)
from .config import SimConfig, config
from .detection import (
    DEFAULT_ALPHA_GRID,
    EffectiveGainFit,
    effective_sinr,
    estimate_rate,
    estimate_rates,
    mrc_combine,
    optimize_alpha_mc,
    optimize_alphas_mc,
    remove_pilots,
)
from .estimation import (
    ChannelEstimate,
    MseEstimate,
    estimate_channel,
    estimate_channel_qtp,
    estimate_mse_mc,
    lmmse_gain_qsp,
    mse_bound_multicell,
    mse_per_realization,
    mse_qsp_single,
    mse_uqsp_single,
)
from .exceptions import (
    ConfigError,
    DegenerateSinrError,
    ModelDomainError,
    NoFeasibleRootError,
    PilotSupplyError,
    QspSimError,
    ShapeMismatchError,
)
from .geometry import LargeScaleRealization, drop_users, estimate_zeta_stats
from .quantizer import QuantizerModel, bussgang_params, quantize
from .waveform import PilotBook, TxFrame, make_data, make_pilot_book, superimpose

__all__ = [
    "ChannelEstimate",
    "ChannelRealization",
    "ConfigError",
    "DEFAULT_ALPHA_GRID",
    "DegenerateSinrError",
    "DropTask",
    "EffectiveGainFit",
    "LargeScaleRealization",
    "ModelDomainError",
    "MseEstimate",
    "NoFeasibleRootError",
    "PilotBook",
    "PilotSupplyError",
    "QspSimError",
    "QuantizerModel",
    "ShapeMismatchError",
    "SimConfig",
    "SuperimposedBlock",
    "TxFrame",
    "bussgang_params",
    "config",
    "draw_channel",
    "draw_superimposed_block",
    "drop_users",
    "effective_sinr",
    "estimate_channel",
    "estimate_channel_qtp",
    "estimate_mse_mc",
    "estimate_rate",
    "estimate_rates",
    "estimate_zeta_stats",
    "lmmse_gain_qsp",
    "make_data",
    "make_pilot_book",
    "mrc_combine",
    "mse_bound_multicell",
    "mse_per_realization",
    "mse_qsp_single",
    "mse_uqsp_single",
    "optimize_alpha_mc",
    "optimize_alphas_mc",
    "quantize",
    "received_block",
    "remove_pilots",
    "rho_from_db",
    "superimpose",
]
