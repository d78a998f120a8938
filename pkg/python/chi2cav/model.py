"""
Model core: physical constants, cavity configuration types, power/flux
conversions, derived scales and cascade-frequency bookkeeping.

Units throughout the package:
    decay rates, couplings mu1/mu2      s^-1
    detunings, analysis frequency omega rad s^-1
    optical frequencies nu              Hz
    powers                              W
    field amplitudes                    sqrt(photons/s)-compatible photon amplitudes
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import constants

from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed physical constants (CODATA exact values); not user-settable."""

    planck: float = field(default=constants.h, init=False)
    speed_of_light: float = field(default=constants.c, init=False)


CONSTANTS = PhysicalConstants()


# --- Configuration types ---

class ModeParams(BaseModel):
    """Decay, output coupling and detuning of one cavity mode."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_total: float = Field(gt=0, allow_inf_nan=False)
    gamma_coupling: float = Field(gt=0, allow_inf_nan=False)
    detuning: float = Field(default=0.0, allow_inf_nan=False)

    @model_validator(mode="before")
    @classmethod
    def _default_coupling(cls, data: Any) -> Any:
        # Signal and idler have no separate coupler; coupling defaults to the total.
        if isinstance(data, dict) and data.get("gamma_coupling") is None:
            data = {**data, "gamma_coupling": data.get("gamma_total")}
        return data

    @model_validator(mode="after")
    def _check_coupling(self) -> "ModeParams":
        if self.gamma_coupling > self.gamma_total:
            raise ValueError(
                f"gamma_coupling ({self.gamma_coupling!r}) must not exceed "
                f"gamma_total ({self.gamma_total!r})"
            )
        return self


class CavityConfig(BaseModel):
    """
    Complete description of the doubly-competing cavity.

    Attributes:
        fundamental: Mode at nu, driven through the coupler gamma1_c.
        signal: Mode at nu + delta.
        idler: Mode at nu - delta.
        mu1: Second-harmonic generation coupling rate (s^-1 per photon).
        mu2: Nondegenerate parametric coupling rate (s^-1 per photon).
        nu: Fundamental optical frequency (Hz).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    fundamental: ModeParams
    signal: ModeParams
    idler: ModeParams
    mu1: float = Field(gt=0, allow_inf_nan=False)
    mu2: float = Field(gt=0, allow_inf_nan=False)
    nu: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_signal_idler_coupling(self) -> "CavityConfig":
        for name, mode in (("signal", self.signal), ("idler", self.idler)):
            if mode.gamma_coupling != mode.gamma_total:
                raise ValueError(
                    f"{name}.gamma_coupling must equal {name}.gamma_total "
                    f"(no separate {name} output coupler)"
                )
        return self

    @classmethod
    def from_rates(
        cls,
        gamma1: float,
        gamma_s: float,
        gamma_i: float,
        mu1: float,
        mu2: float,
        nu: float,
        gamma1_c: Optional[float] = None,
        delta1: float = 0.0,
        delta_s: float = 0.0,
        delta_i: float = 0.0,
    ) -> "CavityConfig":
        """Build a configuration from flat rate values (gamma1_c defaults to gamma1)."""
        return cls(
            fundamental=ModeParams(
                gamma_total=gamma1,
                gamma_coupling=gamma1 if gamma1_c is None else gamma1_c,
                detuning=delta1,
            ),
            signal=ModeParams(gamma_total=gamma_s, detuning=delta_s),
            idler=ModeParams(gamma_total=gamma_i, detuning=delta_i),
            mu1=mu1,
            mu2=mu2,
            nu=nu,
        )

    def rates(self) -> Dict[str, float]:
        """Flat keyword form accepted by from_rates."""
        return {
            "gamma1": self.gamma1,
            "gamma1_c": self.gamma1_c,
            "gamma_s": self.gamma_s,
            "gamma_i": self.gamma_i,
            "delta1": self.delta1,
            "delta_s": self.delta_s,
            "delta_i": self.delta_i,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "nu": self.nu,
        }

    def replace(self, **changes: float) -> "CavityConfig":
        """Validated copy with some flat rate values changed."""
        unknown = set(changes) - set(self.rates())
        if unknown:
            raise TypeError(f"unknown rate keys: {sorted(unknown)}")
        return CavityConfig.from_rates(**{**self.rates(), **changes})

    def without_detuning(self) -> "CavityConfig":
        return self.replace(delta1=0.0, delta_s=0.0, delta_i=0.0)

    @property
    def gamma1(self) -> float:
        return self.fundamental.gamma_total

    @property
    def gamma1_c(self) -> float:
        return self.fundamental.gamma_coupling

    @property
    def gamma_s(self) -> float:
        return self.signal.gamma_total

    @property
    def gamma_i(self) -> float:
        return self.idler.gamma_total

    @property
    def delta1(self) -> float:
        return self.fundamental.detuning

    @property
    def delta_s(self) -> float:
        return self.signal.detuning

    @property
    def delta_i(self) -> float:
        return self.idler.detuning

    @property
    def has_detuning(self) -> bool:
        return any(d != 0.0 for d in (self.delta1, self.delta_s, self.delta_i))

    @property
    def gamma_bar(self) -> float:
        return math.sqrt(self.gamma_s * self.gamma_i)

    @property
    def r(self) -> float:
        return math.sqrt(self.mu1 / self.mu2)

    @property
    def eta(self) -> float:
        return self.gamma1_c / self.gamma1

    @property
    def coupling(self) -> float:
        """Cross coupling sqrt(mu1 mu2)."""
        return math.sqrt(self.mu1 * self.mu2)


# --- Value types ---

@dataclass(frozen=True)
class PumpDrive:
    """Pump power and the corresponding real, non-negative flux amplitude A1."""

    power: float
    amplitude: float
    nu: float


@dataclass(frozen=True)
class EffectiveDecay:
    """Complex effective decay rate gamma + i*delta and its magnitude."""

    value: complex
    magnitude: float


@dataclass(frozen=True)
class DerivedScales:
    gamma_bar: float
    r: float
    eta: float
    p1_thr: float
    p1_min: float
    n_scaled: float


@dataclass(frozen=True)
class CascadeLayout:
    """
    Line positions of the cascaded products around nu (infrared) and 2nu (visible).

    Both tuples are sorted ascending and symmetric about their centre.
    """

    nu: float
    delta: float
    order: int
    infrared_lines: Tuple[float, ...]
    visible_lines: Tuple[float, ...]

    def tagged(self) -> Iterator[Tuple[str, float, int]]:
        """Yield (band, frequency_hz, k) with signed offset index k, ascending."""
        if self.delta == 0.0:
            yield "ir", self.nu, 0
            yield "vis", 2.0 * self.nu, 0
            return
        for k in range(-self.order, self.order + 1):
            yield "ir", self.nu + k * self.delta, k
        for k in range(-2 * self.order, 2 * self.order + 1):
            yield "vis", 2.0 * self.nu + k * self.delta, k


# --- Operations ---

def effective_decay(mode: ModeParams) -> EffectiveDecay:
    """Effective decay rate gamma_x + i*delta_x of a mode."""
    value = complex(mode.gamma_total, mode.detuning)
    return EffectiveDecay(value=value, magnitude=abs(value))


def pump_drive(power: float, nu: float) -> PumpDrive:
    """
    Convert pump power to the flux amplitude A1 = sqrt(P / (h nu)).

    Raises:
        DomainError: If power is negative or nu is not positive.
    """
    if not power >= 0.0:
        raise DomainError(f"pump power must be >= 0, got {power!r}")
    if not nu > 0.0:
        raise DomainError(f"nu must be > 0, got {nu!r}")
    amplitude = math.sqrt(power / (CONSTANTS.planck * nu))
    return PumpDrive(power=power, amplitude=amplitude, nu=nu)


def power_of(amplitude: float, nu: float) -> float:
    """Inverse of pump_drive: power carried by a flux amplitude."""
    return amplitude * amplitude * CONSTANTS.planck * nu


def photon_energy(nu: float) -> float:
    return CONSTANTS.planck * nu


def derived_scales(config: CavityConfig, power: float) -> DerivedScales:
    """Scale quantities of a configuration at a given pump power."""
    from .thresholds import min_threshold_power, threshold_power

    p1_thr = threshold_power(config)
    return DerivedScales(
        gamma_bar=config.gamma_bar,
        r=config.r,
        eta=config.eta,
        p1_thr=p1_thr,
        p1_min=min_threshold_power(config),
        n_scaled=power / p1_thr,
    )


def frequency_of_wavelength(wavelength_m: float) -> float:
    return CONSTANTS.speed_of_light / wavelength_m


def wavelength_of_frequency(frequency_hz: float) -> float:
    return CONSTANTS.speed_of_light / frequency_hz


def delta_from_wavelengths(lambda_signal_m: float, lambda_idler_m: float) -> float:
    """Symmetric frequency offset that best matches a measured signal/idler pair."""
    signal = frequency_of_wavelength(lambda_signal_m)
    idler = frequency_of_wavelength(lambda_idler_m)
    return abs(signal - idler) / 2.0


def cascade_lines(nu: float, delta: float, order: int = 2) -> CascadeLayout:
    """
    Frequencies of the cascaded mixing products.

    Infrared lines are nu + k*delta for |k| <= order (signal/idler and the
    difference-frequency pairs). Visible lines are 2nu + k*delta for |k| <= 2*order,
    covering sum-frequency (+-delta) and doubled signal/idler (+-2delta) products.
    Kinematics only: no amplitudes.
    """
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order!r}")
    if not delta >= 0.0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")

    if delta == 0.0:
        infrared: Tuple[float, ...] = (nu,)
        visible: Tuple[float, ...] = (2.0 * nu,)
    else:
        k_ir = np.arange(-order, order + 1)
        k_vis = np.arange(-2 * order, 2 * order + 1)
        infrared = tuple(float(x) for x in nu + k_ir * delta)
        visible = tuple(float(x) for x in 2.0 * nu + k_vis * delta)

    logger.debug(
        "cascade order %d: %d ir, %d visible lines", order, len(infrared), len(visible)
    )
    return CascadeLayout(
        nu=nu, delta=delta, order=order, infrared_lines=infrared, visible_lines=visible
    )
