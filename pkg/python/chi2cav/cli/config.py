"""
Run configuration for the command-line tool.

A run configuration is a JSON object holding the flat cavity rates plus optional
command sections. Unknown keys are rejected.
"""

import json
import logging
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigError
from ..model import CavityConfig
from ..spectra import SpectrumModel

logger = logging.getLogger(__name__)


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SweepSection(_Section):
    """Pump power sweep (W)."""

    start: float = Field(ge=0, allow_inf_nan=False)
    stop: float = Field(ge=0, allow_inf_nan=False)
    steps: int = Field(ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _check_range(self) -> "SweepSection":
        if self.stop < self.start:
            raise ValueError(
                f"sweep.stop ({self.stop!r}) must not be below "
                f"sweep.start ({self.start!r})"
            )
        if self.spacing == "log" and self.start <= 0.0:
            raise ValueError("sweep.start must be > 0 for log spacing")
        return self


class SpectrumSection(_Section):
    model: SpectrumModel = SpectrumModel.EQ6
    n_scaled: float = Field(default=1.25, ge=0, allow_inf_nan=False)
    omega_max_over_gamma1: float = Field(default=20.0, gt=0, allow_inf_nan=False)
    points: int = Field(default=401, ge=2)


class OutputSection(_Section):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class SolverSection(_Section):
    tol: float = Field(default=1e-10, gt=0, le=1e-3)
    kick: float = Field(default=1e-3, gt=0)


class CascadeSection(_Section):
    delta_hz: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    order: int = Field(default=2, ge=1)


class RunConfig(_Section):
    """
    Flat cavity rates (s^-1, detunings rad/s), optical frequency (Hz) and optional
    command sections.
    """

    gamma1: float = Field(gt=0, allow_inf_nan=False)
    gamma1_c: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    gamma_s: float = Field(gt=0, allow_inf_nan=False)
    gamma_i: float = Field(gt=0, allow_inf_nan=False)
    delta1: float = Field(default=0.0, allow_inf_nan=False)
    delta_s: float = Field(default=0.0, allow_inf_nan=False)
    delta_i: float = Field(default=0.0, allow_inf_nan=False)
    mu1: float = Field(gt=0, allow_inf_nan=False)
    mu2: float = Field(gt=0, allow_inf_nan=False)
    nu_hz: float = Field(gt=0, allow_inf_nan=False)

    pump_power: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    sweep: Optional[SweepSection] = None
    spectrum: SpectrumSection = SpectrumSection()
    output: OutputSection = OutputSection()
    solver: SolverSection = SolverSection()
    cascade: CascadeSection = CascadeSection()

    @model_validator(mode="after")
    def _check_coupler(self) -> "RunConfig":
        if self.gamma1_c is not None and self.gamma1_c > self.gamma1:
            raise ValueError(
                f"gamma1_c ({self.gamma1_c!r}) must not exceed gamma1 ({self.gamma1!r})"
            )
        return self

    def cavity(self) -> CavityConfig:
        return CavityConfig.from_rates(
            gamma1=self.gamma1,
            gamma1_c=self.gamma1_c,
            gamma_s=self.gamma_s,
            gamma_i=self.gamma_i,
            delta1=self.delta1,
            delta_s=self.delta_s,
            delta_i=self.delta_i,
            mu1=self.mu1,
            mu2=self.mu2,
            nu=self.nu_hz,
        )


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(p) for p in error["loc"]) or "<config>"
        parts.append(f"{location}: {error['msg']}")
    return "; ".join(parts)


def parse_config(data: dict) -> RunConfig:
    """Validate an already-decoded configuration object."""
    try:
        run_config = RunConfig.model_validate(data)
        run_config.cavity()
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {_describe(exc)}") from exc
    return run_config


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Raises:
        ConfigError: If the file cannot be read, is not valid JSON, or fails
            validation. The message names the offending keys.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")

    run_config = parse_config(data)
    logger.debug("loaded config %s", path)
    return run_config
