"""FastAPI service for the closed-form engine and the network statistics."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException

from . import __version__
from .analytics import evaluate, rate_from_sinr, sinr_multicell, sinr_single
from .analytics.expressions import nan_to_none
from .analytics.optimal_alpha import optimal_alpha_multicell, optimal_alpha_single
from .harness import ExperimentCoordinator
from .link.estimation import mse_bound_limit_rho, mse_bound_multicell
from .link.exceptions import ConfigError, ModelDomainError, NoFeasibleRootError
from .models import (
    AnalyticRequest,
    GeometryRequest,
    GeometryStats,
    MseBoundRequest,
    OptimalAlphaRequest,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan - set up the experiment coordinator."""
    logger.info(f"Starting qspsim service {__version__}...")
    ExperimentCoordinator.get_instance()
    yield
    logger.info("Shutting down...")


app = FastAPI(title="qspsim", version=__version__, lifespan=lifespan)


def _unprocessable(endpoint: str, e: Exception) -> HTTPException:
    logger.error(f"{endpoint} rejected: {e}")
    detail = {"error": type(e).__name__, "message": str(e)}
    if isinstance(e, ConfigError):
        detail["fields"] = e.fields
    if isinstance(e, NoFeasibleRootError):
        detail["roots"] = list(e.roots)
    elif isinstance(e, ModelDomainError) and e.value is not None:
        detail["value"] = e.value
    return HTTPException(status_code=422, detail=detail)


@app.get("/api/health")
async def health():
    """Health check endpoint with cache status."""
    info = ExperimentCoordinator.get_instance().get_health_info()
    return {"status": "ok", "version": __version__, **info}


@app.post("/api/analytic")
def api_analytic(request: AnalyticRequest):
    """Rate in bits/s/Hz of one closed-form expression."""
    try:
        rows = evaluate(request.expr, request.inputs)
    except (ModelDomainError, ValueError) as e:
        raise _unprocessable("/api/analytic", e)
    return {"rows": [nan_to_none(row) for row in rows]}


@app.post("/api/optimal-alpha")
def api_optimal_alpha(request: OptimalAlphaRequest):
    """Closed-form optimal power split and the rate it achieves."""
    inputs = request.inputs
    try:
        if request.multicell:
            alpha = optimal_alpha_multicell(inputs)
            sinr = sinr_multicell(inputs.with_alpha(alpha))
        else:
            alpha = optimal_alpha_single(inputs)
            sinr = sinr_single(inputs.with_alpha(alpha))
    except (ModelDomainError, ValueError) as e:
        raise _unprocessable("/api/optimal-alpha", e)
    return {
        "alpha": alpha,
        "sinr": sinr,
        "rate_bits": rate_from_sinr(sinr),
        "multicell": request.multicell,
        "quantized": inputs.quantized,
    }


@app.post("/api/geometry/stats", response_model=GeometryStats)
def api_geometry_stats(request: GeometryRequest):
    """Network statistics zeta1..zeta3 for a geometry, served from the cache when possible."""
    try:
        return ExperimentCoordinator.get_instance().zeta_stats(
            request.network, request.n_drops, request.seed
        )
    except (ConfigError, ValueError) as e:
        raise _unprocessable("/api/geometry/stats", e)


@app.post("/api/mse-bound")
def api_mse_bound(request: MseBoundRequest):
    """Upper bound on the drop-averaged estimation MSE and its high-SNR floor."""
    return {
        "bound": mse_bound_multicell(request.alpha, request.rho, request.T, request.zeta1),
        "limit_rho": mse_bound_limit_rho(request.alpha, request.T, request.zeta1),
    }
