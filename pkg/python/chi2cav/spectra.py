"""
Amplitude-quadrature squeezing spectra of the second-harmonic output.

Three models are provided:

    eq4  no competition:
         V2 = 1 - [8 g_nl^2 - 8 g_nl gamma1_c (V1_in - 1)]
                  / [(3 g_nl + gamma1)^2 + omega^2]
    eq5  competition, general parameters (N > 1, V1_in = 1, gamma1_c = gamma1)
    eq6  competition at the symmetric optimum, in omega_hat = omega / (2 gamma1):
         V2 = 1 + 2(N - 1 - w^2) / [4 N^2 w^2 + (N - 1 - w^2)^2]

Spectra are relative to shot noise (V = 1). All evaluators accept scalars or arrays.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from .dynamics import SteadyStateReport, find_steady_state, steady_state_analytic
from .errors import DomainError, UnsupportedRegimeError
from .model import CavityConfig, PumpDrive
from .thresholds import threshold_power, trivial_intensity

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


class SpectrumModel(str, Enum):
    EQ4 = "eq4"
    EQ5 = "eq5"
    EQ6 = "eq6"


@dataclass(frozen=True)
class SpectrumParams:
    """
    Operating point entering the spectra.

    gamma_f = gamma1 + r * gamma_bar is derived, never passed in.
    """

    gamma_nl: float
    gamma1: float
    gamma1_c: float
    v1_in: float = 1.0
    n_scaled: float = 1.0
    r: float = 1.0
    gamma_bar: float = 1.0
    gamma_f: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.gamma_nl >= 0.0:
            raise DomainError(f"gamma_nl must be >= 0, got {self.gamma_nl!r}")
        if not self.v1_in >= 0.0:
            raise DomainError(f"v1_in must be >= 0, got {self.v1_in!r}")
        object.__setattr__(self, "gamma_f", self.gamma1 + self.r * self.gamma_bar)

    @classmethod
    def symmetric(cls, gamma1: float, n_scaled: float) -> "SpectrumParams":
        """Symmetric optimum: gamma_s = gamma_i = gamma1 = gamma1_c, mu1 = mu2."""
        return cls(gamma_nl=gamma1, gamma1=gamma1, gamma1_c=gamma1, v1_in=1.0,
                   n_scaled=n_scaled, r=1.0, gamma_bar=gamma1)


@dataclass(frozen=True)
class SqueezingSpectrum:
    """
    A sampled spectrum. For eq6 `omegas` holds omega_hat; otherwise rad/s.

    omega_min / v_min locate the spectrum minimum (grid scan refined by golden-section
    search).
    """

    model: SpectrumModel
    omegas: np.ndarray
    values: np.ndarray
    db: np.ndarray
    omega_min: float
    v_min: float
    gamma1: Optional[float] = None

    def angular_frequencies(self) -> np.ndarray:
        if self.model is SpectrumModel.EQ6:
            if self.gamma1 is None:
                raise DomainError("gamma1 is needed to convert omega_hat to rad/s")
            return 2.0 * self.gamma1 * self.omegas
        return self.omegas

    def frequencies_hz(self) -> np.ndarray:
        """Detection frequency f = omega / (2 pi)."""
        return self.angular_frequencies() / (2.0 * math.pi)


@dataclass(frozen=True)
class ModelComparison:
    """Outcome of evaluating eq5 and eq6 side by side in the symmetric regime."""

    zero_frequency_gap: float
    band_gap: float
    ratio_min: float
    ratio_max: float


def _out(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def to_db(values: ArrayLike):
    return _out(10.0 * np.log10(np.asarray(values, dtype=float)))


def v2_no_competition(omega: ArrayLike, params: SpectrumParams):
    """Second-harmonic spectrum without competition."""
    w = np.asarray(omega, dtype=float)
    g_nl = params.gamma_nl
    numerator = 8.0 * g_nl ** 2 - 8.0 * g_nl * params.gamma1_c * (params.v1_in - 1.0)
    return _out(1.0 - numerator / ((3.0 * g_nl + params.gamma1) ** 2 + w ** 2))


def v2_competition_general(omega: ArrayLike, params: SpectrumParams):
    """
    Second-harmonic spectrum with competition, general parameters, as printed.

    Raises:
        DomainError: If n_scaled <= 1.
    """
    n = params.n_scaled
    if not n > 1.0:
        raise DomainError(f"eq5 needs N > 1, got {n!r}")
    if params.v1_in != 1.0 or params.gamma1_c != params.gamma1:
        logger.warning("eq5 assumes v1_in = 1 and gamma1_c = gamma1; evaluating anyway")

    w = np.asarray(omega, dtype=float)
    r, g_bar, g_f = params.r, params.gamma_bar, params.gamma_f
    a = r ** 2 * w ** 2
    b = g_f ** 2 + w ** 2
    c_n = params.gamma1 / g_bar + r * (n + 1.0) + 2.0 * (n - 1.0)

    numerator = 2.0 * (n - 1.0) * b - 2.0 * n * a
    denominator = (
        (n - 1.0) ** 2 * b
        + w ** 2 * (g_f / (2.0 * g_bar)) ** 2
        + c_n * n * a / r
        + (w ** 2 / (2.0 * g_bar)) ** 2
    )
    return _out(1.0 + numerator / denominator)


def v2_competition_symmetric(omega_hat: ArrayLike, n_scaled: float):
    """
    Second-harmonic spectrum with competition at the symmetric optimum.

    At (N = 1, omega_hat = 0) the expression is 0/0; the omega_hat -> 0 limit 1/2 is
    returned there.

    Raises:
        DomainError: If n_scaled < 1.
    """
    n = n_scaled
    if not n >= 1.0:
        raise DomainError(f"eq6 needs N >= 1, got {n!r}")
    x = np.asarray(omega_hat, dtype=float) ** 2
    u = n - 1.0 - x
    denominator = 4.0 * n * n * x + u * u
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denominator == 0.0, 0.5, 1.0 + 2.0 * u / denominator)
    return _out(values)


def symmetric_minimum(n_scaled: float) -> Tuple[float, float]:
    """
    Closed-form minimum of eq6: omega_hat^2 = N - 1 + 2 N sqrt(N - 1).

    Returns:
        (omega_hat_min, V_min)
    """
    if not n_scaled >= 1.0:
        raise DomainError(f"eq6 needs N >= 1, got {n_scaled!r}")
    x = n_scaled - 1.0 + 2.0 * n_scaled * math.sqrt(n_scaled - 1.0)
    w = math.sqrt(x)
    return w, v2_competition_symmetric(w, n_scaled)


def gamma_nl_at(
    config: CavityConfig,
    drive: PumpDrive,
    report: Optional[SteadyStateReport] = None,
) -> float:
    """Nonlinear loss rate mu1 |alpha1|^2 at the operating point."""
    if report is None:
        if drive.amplitude == 0.0:
            return 0.0
        if config.has_detuning:
            report = find_steady_state(config, drive)
        else:
            report = steady_state_analytic(config, drive)
    return config.mu1 * abs(report.state.alpha1) ** 2


def spectrum_params(
    config: CavityConfig,
    drive: PumpDrive,
    v1_in: float = 1.0,
    competition: bool = True,
    report: Optional[SteadyStateReport] = None,
) -> SpectrumParams:
    """
    Spectrum parameters of a configuration at a pump drive.

    With competition=False gamma_nl is taken from the trivial (doubler-only) branch
    at every power, which is the operating point the no-competition spectrum
    describes.
    """
    if competition:
        g_nl = gamma_nl_at(config, drive, report)
    else:
        g_nl = config.mu1 * trivial_intensity(config, drive)
    return SpectrumParams(
        gamma_nl=g_nl,
        gamma1=config.gamma1,
        gamma1_c=config.gamma1_c,
        v1_in=v1_in,
        n_scaled=drive.power / threshold_power(config),
        r=config.r,
        gamma_bar=config.gamma_bar,
    )


def onset_squeezing(config: CavityConfig, v1_in: float = 1.0) -> float:
    """
    Zero-frequency no-competition spectrum at the onset of competition, where
    gamma_nl = r * gamma_bar: the best squeezing reachable before competition starts.
    """
    params = SpectrumParams(
        gamma_nl=config.r * config.gamma_bar,
        gamma1=config.gamma1,
        gamma1_c=config.gamma1_c,
        v1_in=v1_in,
        n_scaled=1.0,
        r=config.r,
        gamma_bar=config.gamma_bar,
    )
    return v2_no_competition(0.0, params)


def _is_symmetric_optimum(config: CavityConfig) -> bool:
    g1 = config.gamma1
    return (
        not config.has_detuning
        and all(
            math.isclose(g, g1, rel_tol=1e-12)
            for g in (config.gamma1_c, config.gamma_s, config.gamma_i)
        )
        and math.isclose(config.mu1, config.mu2, rel_tol=1e-12)
    )


def continuity_check(config: CavityConfig, points: int = 2001) -> float:
    """
    Largest gap between eq4 (gamma_nl = gamma1) and eq6 (N = 1) over
    omega in [1e-3, 1e3] * gamma1. Both reduce to 1 - 2 / (4 + omega_hat^2).

    Raises:
        UnsupportedRegimeError: If the configuration is not the symmetric optimum.
    """
    if not _is_symmetric_optimum(config):
        raise UnsupportedRegimeError(
            "continuity check needs gamma_s = gamma_i = gamma1 = gamma1_c, "
            "mu1 = mu2, zero detuning"
        )
    g1 = config.gamma1
    omegas = g1 * np.logspace(-3.0, 3.0, points)
    params = SpectrumParams.symmetric(g1, 1.0)
    doubler = v2_no_competition(omegas, params)
    competing = v2_competition_symmetric(omegas / (2.0 * g1), 1.0)
    gap = np.abs(doubler - competing)
    return float(np.max(gap))


def eq5_eq6_comparison(
    n_values: Sequence[float],
    omega_hats: Sequence[float],
    gamma1: float = 1.0,
) -> ModelComparison:
    """
    Evaluate eq5 with symmetric parameters next to eq6.

    Returns the largest zero-frequency gap, the largest gap over omega_hats, and the
    range of (V5 - 1) / (V6 - 1) where V6 differs from 1.
    """
    w_hat = np.asarray(omega_hats, dtype=float)
    zero_gap = 0.0
    band_gap = 0.0
    ratios = []
    for n in n_values:
        params = SpectrumParams.symmetric(gamma1, n)
        v5_zero = v2_competition_general(0.0, params)
        zero_gap = max(zero_gap, abs(v5_zero - v2_competition_symmetric(0.0, n)))
        v5 = np.asarray(v2_competition_general(2.0 * gamma1 * w_hat, params))
        v6 = np.asarray(v2_competition_symmetric(w_hat, n))
        band_gap = max(band_gap, float(np.max(np.abs(v5 - v6))))
        away = np.abs(v6 - 1.0) > 1e-9
        if np.any(away):
            ratios.append((v5[away] - 1.0) / (v6[away] - 1.0))
    all_ratios = np.concatenate(ratios) if ratios else np.array([1.0])
    return ModelComparison(
        zero_frequency_gap=zero_gap,
        band_gap=band_gap,
        ratio_min=float(np.min(all_ratios)),
        ratio_max=float(np.max(all_ratios)),
    )


def _evaluate(model: SpectrumModel, params: SpectrumParams, omegas: ArrayLike):
    if model is SpectrumModel.EQ4:
        return v2_no_competition(omegas, params)
    if model is SpectrumModel.EQ5:
        return v2_competition_general(omegas, params)
    return v2_competition_symmetric(omegas, params.n_scaled)


def spectrum_sweep(
    model: SpectrumModel,
    params: SpectrumParams,
    omega_grid: Sequence[float],
) -> SqueezingSpectrum:
    """
    Evaluate one spectrum model on an ascending grid and locate its minimum.

    For eq6 the grid is omega_hat and only params.n_scaled (and gamma1 for the Hz
    conversion) is used.

    Raises:
        DomainError: If the grid is not ascending, or from the model's own domain.
    """
    model = SpectrumModel(model)
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("omega grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("omega grid must be strictly ascending")

    values = np.atleast_1d(np.asarray(_evaluate(model, params, grid), dtype=float))
    k = int(np.argmin(values))
    omega_min, v_min = float(grid[k]), float(values[k])

    if 0 < k < grid.size - 1:
        def objective(w: float) -> float:
            return float(_evaluate(model, params, w))

        try:
            refined = optimize.minimize_scalar(
                objective, bracket=(grid[k - 1], grid[k], grid[k + 1]), method="golden"
            )
            if refined.fun < v_min:
                omega_min, v_min = float(refined.x), float(refined.fun)
        except ValueError as exc:
            logger.debug("golden refinement skipped: %s", exc)

    return SqueezingSpectrum(
        model=model,
        omegas=grid,
        values=values,
        db=10.0 * np.log10(values),
        omega_min=omega_min,
        v_min=v_min,
        gamma1=params.gamma1,
    )
