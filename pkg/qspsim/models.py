"""Domain types shared by the simulator, the closed forms and the service."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)


class Scheme(str, Enum):
    QSP = "QSP"  # superimposed pilots, 1-bit receiver
    UQSP = "UQSP"  # superimposed pilots, infinite resolution
    QTP = "QTP"  # time-multiplexed pilots, 1-bit receiver

    @property
    def quantized(self) -> bool:
        return self is not Scheme.UQSP


# Number of hexagonal sites for zero, one and two tiers around BS 0.
SUPPORTED_CELL_COUNTS = (1, 7, 19)


class NetworkConfig(BaseModel):
    """Scenario parameters; defaults are the one-tier 7-cell network."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    L: int = 7
    K: int = Field(12, ge=1)
    M: int = Field(100, ge=1)
    T: int = Field(200, ge=1)
    rho: float = Field(0.1, gt=0)
    alpha: float = Field(0.5, ge=0, le=1)
    cell_radius: float = Field(1.8, gt=0)  # km
    forbidden_radius: float = Field(0.1, ge=0)  # km
    pathloss_exponent: float = Field(3.8, gt=0)
    # Allow K*L > T by reusing Fourier rows across cells (home cell stays orthogonal).
    pilot_reuse: bool = False

    @field_validator("L")
    @classmethod
    def _supported_layout(cls, value: int) -> int:
        if value not in SUPPORTED_CELL_COUNTS:
            raise ValueError(f"L must be one of {SUPPORTED_CELL_COUNTS}")
        return value

    @model_validator(mode="after")
    def _check_invariants(self) -> "NetworkConfig":
        if self.K > self.T:
            raise ValueError(f"K={self.K} orthogonal pilots do not fit in T={self.T}")
        if self.K * self.L > self.T and not self.pilot_reuse:
            raise ValueError(
                f"K*L={self.K * self.L} orthogonal pilots do not fit in T={self.T}"
            )
        if self.forbidden_radius >= self.cell_radius:
            raise ValueError("forbidden_radius must be smaller than cell_radius")
        return self

    @property
    def KL(self) -> int:
        return self.K * self.L

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.rho)

    def geometry_key(self) -> dict:
        """Fields that determine the large-scale statistics."""
        return {
            "L": self.L,
            "K": self.K,
            "cell_radius": self.cell_radius,
            "forbidden_radius": self.forbidden_radius,
            "pathloss_exponent": self.pathloss_exponent,
        }


class ClosedFormInputs(BaseModel):
    """Inputs of every closed-form SINR, root and limit expression.

    Single-cell expressions read ``K``; multicell expressions read the
    network statistics ``zeta1`` (E{κ₀}), ``zeta2`` (E{κ₀²}) and
    ``zeta3`` (E{κ₁}).
    """

    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(0.5, ge=0, le=1)
    rho: float = Field(gt=0)
    T: int = Field(ge=1)
    M: float = Field(ge=1)
    K: Optional[int] = Field(None, ge=1)
    zeta1: Optional[float] = Field(None, gt=0)
    zeta2: Optional[float] = Field(None, gt=0)
    zeta3: Optional[float] = Field(None, gt=0)
    quantized: bool = True

    @property
    def alpha_bar(self) -> float:
        return 1.0 - self.alpha

    def with_alpha(self, alpha: float) -> "ClosedFormInputs":
        return self.model_copy(update={"alpha": alpha})

    def require_single_cell(self) -> int:
        if self.K is None:
            raise ValueError("single-cell expression needs K")
        return self.K

    def require_multicell(self) -> tuple[float, float, float]:
        if self.zeta1 is None or self.zeta2 is None or self.zeta3 is None:
            raise ValueError("multicell expression needs zeta1, zeta2 and zeta3")
        return self.zeta1, self.zeta2, self.zeta3


class GeometryStats(BaseModel):
    K: int
    n_drops: int
    zeta1: float
    zeta2: float
    zeta3: float
    se1: float
    se2: float
    se3: float
    seed: int


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo achievable rate with its effective-SINR decomposition.

    ``a_hat`` and ``noise_var`` are averaged over large-scale drops; the
    rate itself is the mean of the per-drop rates.
    """

    rate_bits: float
    a_hat: complex
    noise_var: float
    n_trials: int
    stderr: float
    scheme: Scheme
    pilot_removal: bool
    alpha_used: float

    @property
    def sinr(self) -> float:
        return abs(self.a_hat) ** 2 / self.noise_var

    def as_row(self) -> dict:
        """Monte Carlo columns of a rate table row."""
        return {
            "scheme": self.scheme.value,
            "pilot_removal": self.pilot_removal,
            "alpha_mc": self.alpha_used,
            "rate_mc": self.rate_bits,
            "stderr": self.stderr,
            "sinr_mc": self.sinr,
            "n_trials": self.n_trials,
        }


SweepVariable = Literal["snr_db", "M", "K", "alpha"]
Measure = Literal["mse", "rate", "optimal_alpha", "stats", "asymptote"]


class ExperimentSpec(BaseModel):
    """A sweep over one scenario variable; every other field stays fixed."""

    model_config = ConfigDict(extra="forbid")

    name: str
    measure: Measure = "rate"
    sweep_variable: SweepVariable
    sweep_values: list[float]
    schemes: list[Scheme] = Field(default_factory=lambda: [Scheme.QSP])
    pilot_removal: list[bool] = Field(default_factory=lambda: [False])
    seed: int
    # Base scenario: the one-tier network defaults.
    L: int = 7
    K: int = 12
    M: int = 100
    T: int = 200
    snr_db: float = -10.0
    alpha: Optional[float] = Field(0.5, ge=0, le=1)  # None: optimize per drop
    cell_radius: float = 1.8
    forbidden_radius: float = 0.1
    pathloss_exponent: float = 3.8
    extra_T: list[int] = Field(default_factory=list)  # additional T curves (MSE)
    # Trial counts.
    n_outer: int = Field(200, ge=1)
    n_inner: int = Field(50, ge=1)
    zeta_drops: int = Field(20000, ge=1)
    redraw_pilots: bool = False
    pilot_reuse: bool = False
    sample_variance_gamma: bool = False
    output: Optional[str] = None

    @field_validator("sweep_values")
    @classmethod
    def _nonempty_finite(cls, values: list[float]) -> list[float]:
        if not values:
            raise ValueError("sweep_values must not be empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sweep_values must be finite")
        return values

    @model_validator(mode="after")
    def _check_scenarios(self) -> "ExperimentSpec":
        # Build every swept scenario once so that unsatisfiable points fail
        # before any compute starts.
        points = [(value, None) for value in self.sweep_values]
        points += [(self.sweep_values[0], T) for T in self.extra_T]
        for value, T in points:
            try:
                self.network_at(value, T=T)
            except ValidationError as e:
                reasons = "; ".join(err["msg"] for err in e.errors())
                raise ValueError(
                    f"{self.sweep_variable}={value:g}"
                    + (f", T={T}" if T is not None else "")
                    + f": {reasons}"
                ) from None
        return self

    @property
    def T_values(self) -> list[int]:
        return [self.T, *self.extra_T]

    def network_at(self, value: float, T: Optional[int] = None) -> NetworkConfig:
        """Scenario at one sweep point, optionally with another coherence length."""
        fields = {
            "L": self.L,
            "K": self.K,
            "M": self.M,
            "T": self.T if T is None else T,
            "rho": 10.0 ** (self.snr_db / 10.0),
            "alpha": 0.5 if self.alpha is None else self.alpha,
            "cell_radius": self.cell_radius,
            "forbidden_radius": self.forbidden_radius,
            "pathloss_exponent": self.pathloss_exponent,
            "pilot_reuse": self.pilot_reuse,
        }
        if self.sweep_variable == "snr_db":
            fields["rho"] = 10.0 ** (value / 10.0)
        elif self.sweep_variable == "alpha":
            fields["alpha"] = value
        else:
            if value != int(value):
                raise ValueError(f"{self.sweep_variable} sweep values must be integers")
            fields[self.sweep_variable] = int(value)
        return NetworkConfig(**fields)


# --- HTTP request bodies ---------------------------------------------------

Expression = Literal[
    "sinr_qsp_single",
    "sinr_uqsp_single",
    "sinr_qsp_multicell",
    "sinr_uqsp_multicell",
    "asymptote_M",
    "asymptote_rho",
]


class AnalyticRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    expr: Expression
    inputs: ClosedFormInputs


class OptimalAlphaRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    multicell: bool = True
    inputs: ClosedFormInputs


class GeometryRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    network: NetworkConfig = Field(default_factory=NetworkConfig)
    n_drops: int = Field(2000, ge=2, le=200000)
    seed: int


class MseBoundRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(ge=0, le=1)
    rho: float = Field(gt=0)
    T: int = Field(ge=1)
    zeta1: float = Field(gt=0)
