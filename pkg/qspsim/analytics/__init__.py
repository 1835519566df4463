"""Closed-form SINRs, optimal power splits and their limits."""

from .asymptotic import (
    asymptotic_rate_M,
    asymptotic_rate_rho,
    rate_from_sinr,
    sinr_limit_rho_qsp,
    sinr_limit_rho_uqsp,
)
from .expressions import CSV_COLUMNS, evaluate, resolve_alpha
from .multicell import (
    expected_sigma_eps_multicell,
    rate_per_drop_mean,
    sigma_eps_multicell,
    sigma_eps_multicell_closed_form,
    sinr_multicell,
    sinr_qsp_multicell,
    sinr_uqsp_multicell,
)
from .optimal_alpha import (
    grid_argmax,
    optimal_alpha_multicell,
    optimal_alpha_single,
    sinr_curve,
)
from .single_cell import (
    sigma_eps_qsp_single,
    sigma_eps_single_closed_form,
    sinr_qsp_single,
    sinr_single,
    sinr_uqsp_single,
)

__all__ = [
    "CSV_COLUMNS",
    "asymptotic_rate_M",
    "asymptotic_rate_rho",
    "evaluate",
    "expected_sigma_eps_multicell",
    "grid_argmax",
    "optimal_alpha_multicell",
    "optimal_alpha_single",
    "rate_from_sinr",
    "rate_per_drop_mean",
    "resolve_alpha",
    "sigma_eps_multicell",
    "sigma_eps_multicell_closed_form",
    "sigma_eps_qsp_single",
    "sigma_eps_single_closed_form",
    "sinr_curve",
    "sinr_limit_rho_qsp",
    "sinr_limit_rho_uqsp",
    "sinr_multicell",
    "sinr_qsp_multicell",
    "sinr_qsp_single",
    "sinr_single",
    "sinr_uqsp_multicell",
    "sinr_uqsp_single",
]
