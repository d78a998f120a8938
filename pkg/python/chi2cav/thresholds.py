"""
Competition threshold, second-harmonic clamping and conversion efficiency.

Closed forms hold at zero detuning. With detunings set, the threshold comes either
from substituting |gamma + i*delta| for the decay rates (a rule that is exact only
when gamma_s == gamma_i and delta_s == delta_i) or from the numeric bifurcation of
the trivial branch, and clamped powers come from the dynamics module.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from scipy import optimize

from .errors import (
    Chi2CavError,
    DomainError,
    NonConvergenceError,
    UnsupportedRegimeError,
)
from .model import CavityConfig, PumpDrive, photon_energy, pump_drive

logger = logging.getLogger(__name__)

# Bracket for the numeric bifurcation search, in units of the zero-detuning threshold.
BIFURCATION_BRACKET = (1e-3, 1e3)
BIFURCATION_RTOL = 1e-10


class ThresholdMode(str, Enum):
    ZERO_DETUNING = "zero_detuning"
    EFFECTIVE_DECAY_SUBSTITUTION = "effective_decay_substitution"
    NUMERIC_BIFURCATION = "numeric_bifurcation"


class Regime(str, Enum):
    BELOW = "below"
    CLAMPED = "clamped"
    FAILED = "failed"


@dataclass(frozen=True)
class ThresholdReport:
    p1_thr: float
    p1_min: float
    eta: float
    clamped_p2: float
    efficiency_at_threshold: float
    mode: ThresholdMode


@dataclass(frozen=True)
class EfficiencyPoint:
    """One point of a second-harmonic versus pump power curve."""

    p1: float
    p2: float
    efficiency: float
    regime: Regime
    error: Optional[str] = None


def _threshold_formula(config: CavityConfig, gamma1: float, gamma_bar: float) -> float:
    # The coupler rate gamma1_c is a mirror property and is never substituted.
    return (
        2.0 * photon_energy(config.nu)
        * (gamma_bar / config.gamma1_c)
        * (gamma1 ** 2 / config.coupling)
        * 0.25
        * (1.0 + config.r * gamma_bar / gamma1) ** 2
    )


def threshold_power(config: CavityConfig) -> float:
    """Zero-detuning competition threshold P1_thr. Detunings are ignored."""
    return _threshold_formula(config, config.gamma1, config.gamma_bar)


def detuned_threshold_power(config: CavityConfig) -> float:
    """Threshold with |gamma_x + i*delta_x| substituted for each decay rate."""
    gamma1_eff = abs(complex(config.gamma1, config.delta1))
    gamma_s_eff = abs(complex(config.gamma_s, config.delta_s))
    gamma_i_eff = abs(complex(config.gamma_i, config.delta_i))
    gamma_bar_eff = math.sqrt(gamma_s_eff * gamma_i_eff)
    return _threshold_formula(config, gamma1_eff, gamma_bar_eff)


def min_threshold_power(config: CavityConfig) -> float:
    """P1_min = h (2 nu) gamma1^2 / (eta mu1), the symmetric-optimum threshold."""
    h2nu = 2.0 * photon_energy(config.nu)
    return h2nu * config.gamma1 ** 2 / (config.eta * config.mu1)


def clamped_sh_power(config: CavityConfig) -> float:
    """Second-harmonic plateau h (2 nu) gamma_bar^2 / mu2 above threshold."""
    return 2.0 * photon_energy(config.nu) * config.gamma_bar ** 2 / config.mu2


def min_threshold_scale(p1_min: float, nu: float) -> float:
    """
    Invert P1_min for the combination gamma1^2 / (eta mu1) (units of s).

    Useful when only a measured minimum threshold is known.
    """
    return p1_min / (2.0 * photon_energy(nu))


# --- Trivial branch ---

def _solve_doubler_cubic(gamma1: float, mu1: float, drive_term: float) -> float:
    """Real positive root of mu1 x^3 + gamma1 x = drive_term."""
    if drive_term <= 0.0:
        return 0.0
    # Depressed cubic x^3 + p x + q = 0 with p > 0 has one real root (hyperbolic form).
    p = gamma1 / mu1
    q = -drive_term / mu1
    s = math.sqrt(p / 3.0)
    x = -2.0 * s * math.sinh(math.asinh(3.0 * q / (2.0 * p * s)) / 3.0)
    for _ in range(3):
        f = mu1 * x ** 3 + gamma1 * x - drive_term
        x -= f / (3.0 * mu1 * x ** 2 + gamma1)
    return x


def below_threshold_alpha1(config: CavityConfig, power: float) -> float:
    """
    Real fundamental amplitude on the trivial branch at zero detuning.

    Solves gamma1 x + mu1 x^3 = sqrt(2 gamma1_c) A1.

    Raises:
        UnsupportedRegimeError: If any detuning is nonzero.
    """
    if config.has_detuning:
        raise UnsupportedRegimeError(
            "below_threshold_alpha1 needs zero detunings; use trivial_alpha1"
        )
    drive = pump_drive(power, config.nu)
    return _solve_doubler_cubic(
        config.gamma1, config.mu1, math.sqrt(2.0 * config.gamma1_c) * drive.amplitude
    )


def trivial_intensity(config: CavityConfig, drive: PumpDrive) -> float:
    """
    Intracavity fundamental photon number |alpha1|^2 on the trivial branch.

    Root of n((gamma1 + mu1 n)^2 + delta1^2) = 2 gamma1_c A1^2, which is monotone in n.
    """
    if drive.amplitude == 0.0:
        return 0.0
    if config.delta1 == 0.0:
        coupled = math.sqrt(2.0 * config.gamma1_c) * drive.amplitude
        x = _solve_doubler_cubic(config.gamma1, config.mu1, coupled)
        return x * x

    target = 2.0 * config.gamma1_c * drive.amplitude ** 2
    g1, m1, d1 = config.gamma1, config.mu1, config.delta1

    def residual(n: float) -> float:
        return n * ((g1 + m1 * n) ** 2 + d1 ** 2) - target

    upper = target / (g1 ** 2 + d1 ** 2)
    return optimize.brentq(residual, 0.0, upper, xtol=1e-300, rtol=1e-15, maxiter=200)


def trivial_alpha1(config: CavityConfig, drive: PumpDrive) -> complex:
    """Complex fundamental amplitude on the trivial branch, any fundamental detuning."""
    n = trivial_intensity(config, drive)
    return (
        math.sqrt(2.0 * config.gamma1_c) * drive.amplitude
        / complex(config.gamma1 + config.mu1 * n, config.delta1)
    )


# --- Reports ---

def numeric_threshold_power(config: CavityConfig) -> float:
    """
    Threshold where the trivial branch loses stability, found by bisecting the sign
    of the signal/idler growth rate on N in BIFURCATION_BRACKET.

    Raises:
        NonConvergenceError: If the growth rate does not change sign in the bracket.
    """
    from .dynamics import trivial_branch_growth_rate

    reference = threshold_power(config)

    def growth(n_scaled: float) -> float:
        drive = pump_drive(n_scaled * reference, config.nu)
        return trivial_branch_growth_rate(config, trivial_alpha1(config, drive))

    lo, hi = BIFURCATION_BRACKET
    g_lo, g_hi = growth(lo), growth(hi)
    if not (g_lo < 0.0 < g_hi):
        raise NonConvergenceError(
            f"growth rate does not change sign on N in [{lo}, {hi}] "
            f"(rates {g_lo:.3e}, {g_hi:.3e})"
        )
    n_star = optimize.bisect(
        growth, lo, hi, xtol=lo * BIFURCATION_RTOL, rtol=BIFURCATION_RTOL
    )
    logger.debug(
        "numeric bifurcation at N=%.12g of the zero-detuning threshold", n_star
    )
    return n_star * reference


def threshold_report(
    config: CavityConfig, mode: ThresholdMode = ThresholdMode.ZERO_DETUNING
) -> ThresholdReport:
    """Threshold, minimum threshold, clamp and efficiency at threshold for one mode."""
    mode = ThresholdMode(mode)
    h2nu = 2.0 * photon_energy(config.nu)

    if mode is ThresholdMode.ZERO_DETUNING:
        p1_thr = threshold_power(config)
        clamped = clamped_sh_power(config)
    elif mode is ThresholdMode.EFFECTIVE_DECAY_SUBSTITUTION:
        p1_thr = detuned_threshold_power(config)
        # Same substitution applied to the plateau; exact in the symmetric subcase.
        clamped = h2nu * (
            abs(complex(config.gamma_s, config.delta_s))
            * abs(complex(config.gamma_i, config.delta_i))
        ) / config.mu2
    else:
        p1_thr = numeric_threshold_power(config)
        n_star = trivial_intensity(config, pump_drive(p1_thr, config.nu))
        clamped = h2nu * config.mu1 * n_star ** 2

    return ThresholdReport(
        p1_thr=p1_thr,
        p1_min=min_threshold_power(config),
        eta=config.eta,
        clamped_p2=clamped,
        efficiency_at_threshold=clamped / p1_thr,
        mode=mode,
    )


def impedance_matching_power(config: CavityConfig) -> Optional[float]:
    """
    Pump power at which the reflected fundamental vanishes, or None if it never does.

    Below threshold this needs |alpha1|^2 = (2 gamma1_c - gamma1) / mu1 to be reached
    before competition starts; above threshold the reflection is zero for every power
    exactly when 2 gamma1_c == gamma1 + r gamma_bar, and the first such power
    (the threshold) is returned.

    Raises:
        UnsupportedRegimeError: If any detuning is nonzero.
    """
    if config.has_detuning:
        raise UnsupportedRegimeError(
            "impedance matching is evaluated at zero detuning only"
        )
    excess = 2.0 * config.gamma1_c - config.gamma1
    if excess <= 0.0:
        return None
    onset = config.r * config.gamma_bar
    if excess > onset * (1.0 + 1e-12):
        return None
    n = excess / config.mu1
    amplitude_sq = n * (config.gamma1 + config.mu1 * n) ** 2 / (2.0 * config.gamma1_c)
    return amplitude_sq * photon_energy(config.nu)


def suppression_detuning(config: CavityConfig, power: float) -> float:
    """
    Equal signal/idler detuning that lifts the substituted threshold to `power`.

    Returns 0.0 when `power` is already at or below the threshold.
    """
    if not power >= 0.0:
        raise DomainError(f"power must be >= 0, got {power!r}")

    def excess(d: float) -> float:
        return detuned_threshold_power(config.replace(delta_s=d, delta_i=d)) - power

    if excess(0.0) >= 0.0:
        return 0.0
    hi = config.gamma_bar
    while excess(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12 * config.gamma_bar:
            raise NonConvergenceError(
                "no finite detuning suppresses competition at this power"
            )
    return optimize.brentq(excess, 0.0, hi, rtol=1e-14, maxiter=200)


# --- Power curves ---

def _curve_point(
    config: CavityConfig,
    p1: float,
    boundary: float,
    competition: bool,
    tol: float,
    kick: float,
) -> EfficiencyPoint:
    h2nu = 2.0 * photon_energy(config.nu)
    try:
        drive = pump_drive(p1, config.nu)
        if not competition or p1 <= boundary:
            n = trivial_intensity(config, drive)
            p2 = h2nu * config.mu1 * n * n
            regime = Regime.BELOW
        elif not config.has_detuning:
            p2 = clamped_sh_power(config)
            regime = Regime.CLAMPED
        else:
            from .dynamics import Branch, find_steady_state

            report = find_steady_state(config, drive, tol=tol, kick=kick)
            p2 = h2nu * report.fluxes.sh_flux
            regime = Regime.CLAMPED if report.branch is Branch.NDOPO else Regime.BELOW
    except Chi2CavError as exc:
        logger.warning("power curve point P1=%.6g W failed: %s", p1, exc)
        return EfficiencyPoint(p1=p1, p2=math.nan, efficiency=math.nan,
                               regime=Regime.FAILED, error=str(exc))

    efficiency = p2 / p1 if p1 > 0.0 else 0.0
    return EfficiencyPoint(p1=p1, p2=p2, efficiency=efficiency, regime=regime)


def power_curve(
    config: CavityConfig,
    p1_grid: Sequence[float],
    competition: bool = True,
    workers: int = 1,
    tol: float = 1e-10,
    kick: float = 1e-3,
) -> List[EfficiencyPoint]:
    """
    Second-harmonic power versus pump power.

    Below threshold the trivial branch gives P2 = h 2nu mu1 |alpha1|^4; above it the
    clamped plateau applies at zero detuning, and detuned configurations take P2 from
    a numerical steady state. With competition=False the trivial branch is used at
    every power (a doubler with the parametric process suppressed).

    Args:
        config: Cavity configuration.
        p1_grid: Non-negative, ascending pump powers (W).
        competition: Whether the parametric process may switch on.
        workers: Thread count for evaluating points; output order is preserved.
        tol: Steady-state tolerance for detuned points above threshold.
        kick: Signal/idler seed for detuned points above threshold.

    Raises:
        DomainError: If the grid is negative or not ascending.
    """
    grid = [float(p) for p in p1_grid]
    if any(p < 0.0 for p in grid):
        raise DomainError("power grid must be non-negative")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("power grid must be ascending")

    if config.has_detuning:
        boundary = detuned_threshold_power(config)
    else:
        boundary = threshold_power(config)

    def point(p1: float) -> EfficiencyPoint:
        return _curve_point(config, p1, boundary, competition, tol, kick)

    if workers <= 1 or len(grid) <= 1:
        return [point(p) for p in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, grid))
