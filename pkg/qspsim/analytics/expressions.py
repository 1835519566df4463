"""Named closed-form expressions as emitted by the CLI and the HTTP service."""

import logging
import math
from typing import Optional

from ..models import ClosedFormInputs, Expression
from .asymptotic import asymptotic_rate_M, asymptotic_rate_rho, rate_from_sinr
from .multicell import sinr_qsp_multicell, sinr_uqsp_multicell
from .optimal_alpha import optimal_alpha_multicell, optimal_alpha_single
from .single_cell import sinr_qsp_single, sinr_uqsp_single

logger = logging.getLogger(__name__)

SINR_EXPRESSIONS = {
    "sinr_qsp_single": (sinr_qsp_single, False, True),
    "sinr_uqsp_single": (sinr_uqsp_single, False, False),
    "sinr_qsp_multicell": (sinr_qsp_multicell, True, True),
    "sinr_uqsp_multicell": (sinr_uqsp_multicell, True, False),
}

CSV_COLUMNS = ["expr", "alpha", "rho", "M", "K", "T", "zeta1", "zeta2", "zeta3", "value_bits"]


def _row(expr: str, inputs: ClosedFormInputs, value_bits: float) -> dict:
    return {
        "expr": expr,
        "alpha": inputs.alpha,
        "rho": inputs.rho,
        "M": inputs.M,
        "K": inputs.K,
        "T": inputs.T,
        "zeta1": inputs.zeta1,
        "zeta2": inputs.zeta2,
        "zeta3": inputs.zeta3,
        "value_bits": value_bits,
    }


def resolve_alpha(expr: Expression, inputs: ClosedFormInputs) -> ClosedFormInputs:
    """Replace α by the closed-form optimum of the expression's SINR."""
    if expr in SINR_EXPRESSIONS:
        _, multicell, quantized = SINR_EXPRESSIONS[expr]
    else:
        multicell, quantized = inputs.zeta3 is not None, inputs.quantized
    optimum = optimal_alpha_multicell if multicell else optimal_alpha_single
    return inputs.with_alpha(optimum(inputs, quantized))


def evaluate(
    expr: Expression, inputs: ClosedFormInputs, optimize_alpha: bool = False
) -> list[dict]:
    """Rate in bits/s/Hz of one named expression.

    ``asymptote_M`` uses ζ₃ when given and K otherwise; ``asymptote_rho``
    yields one row per receiver.
    """
    if optimize_alpha:
        inputs = resolve_alpha(expr, inputs)
    if expr in SINR_EXPRESSIONS:
        fn, _, _ = SINR_EXPRESSIONS[expr]
        return [_row(expr, inputs, rate_from_sinr(fn(inputs)))]
    if expr == "asymptote_M":
        denom: Optional[float] = inputs.zeta3 if inputs.zeta3 is not None else inputs.K
        if denom is None:
            raise ValueError("asymptote_M needs zeta3 or K")
        return [_row(expr, inputs, asymptotic_rate_M(inputs.alpha, inputs.T, denom))]
    if expr == "asymptote_rho":
        qsp, uqsp = asymptotic_rate_rho(inputs)
        return [
            _row("asymptote_rho_qsp", inputs, qsp),
            _row("asymptote_rho_uqsp", inputs, uqsp),
        ]
    raise ValueError(f"unknown expression {expr!r}")


def nan_to_none(row: dict) -> dict:
    """JSON-safe copy of a row."""
    return {
        k: (None if isinstance(v, float) and not math.isfinite(v) else v)
        for k, v in row.items()
    }
