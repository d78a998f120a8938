"""
chi2cav - Competing second-order nonlinearities in an optical cavity

This package simulates a cavity in which intracavity second-harmonic generation
competes with nondegenerate optical parametric oscillation. It integrates the
coupled-mode equations, locates thresholds and steady-state branches, and computes
the classical (second-harmonic clamping, new frequency lines) and quantum
(second-harmonic squeezing spectra) signatures of the competition.

Example usage:
    >>> import chi2cav
    >>>
    >>> # Symmetric cavity: all decay rates 1e7 /s, equal couplings, 1064 nm pump
    >>> config = chi2cav.CavityConfig.from_rates(
    ...     gamma1=1e7, gamma_s=1e7, gamma_i=1e7, mu1=1.0, mu2=1.0, nu=2.818e14)
    >>>
    >>> # Competition threshold and second-harmonic plateau (W)
    >>> p_thr = chi2cav.threshold_power(config)
    >>> p_clamp = chi2cav.clamped_sh_power(config)
    >>>
    >>> # Steady state at twice threshold
    >>> drive = chi2cav.pump_drive(2 * p_thr, config.nu)
    >>> report = chi2cav.find_steady_state(config, drive)
    >>> report.branch
    <Branch.NDOPO: 'ndopo'>
"""

from .dynamics import (
    Branch,
    FieldState,
    OutputFluxes,
    Stability,
    SteadyStateReport,
    Trajectory,
    conservation_audit,
    find_steady_state,
    integrate,
    jacobian,
    output_fluxes,
    rhs,
    sh_output_flux,
    steady_state_analytic,
    trivial_branch_growth_rate,
    trivial_state,
)
from .errors import (
    AmbiguousBranchError,
    Chi2CavError,
    ConfigError,
    DomainError,
    NonConvergenceError,
    UnsupportedRegimeError,
)
from .model import (
    CONSTANTS,
    CascadeLayout,
    CavityConfig,
    DerivedScales,
    EffectiveDecay,
    ModeParams,
    PhysicalConstants,
    PumpDrive,
    cascade_lines,
    delta_from_wavelengths,
    derived_scales,
    effective_decay,
    power_of,
    pump_drive,
)
from .spectra import (
    SpectrumModel,
    SpectrumParams,
    SqueezingSpectrum,
    continuity_check,
    gamma_nl_at,
    spectrum_params,
    spectrum_sweep,
    v2_competition_general,
    v2_competition_symmetric,
    v2_no_competition,
)
from .thresholds import (
    EfficiencyPoint,
    ThresholdMode,
    ThresholdReport,
    below_threshold_alpha1,
    clamped_sh_power,
    detuned_threshold_power,
    impedance_matching_power,
    min_threshold_power,
    numeric_threshold_power,
    power_curve,
    suppression_detuning,
    threshold_power,
    threshold_report,
)

__version__ = "1.0.0"
__all__ = [
    "AmbiguousBranchError",
    "Branch",
    "CONSTANTS",
    "CascadeLayout",
    "CavityConfig",
    "Chi2CavError",
    "ConfigError",
    "DerivedScales",
    "DomainError",
    "EffectiveDecay",
    "EfficiencyPoint",
    "FieldState",
    "ModeParams",
    "NonConvergenceError",
    "OutputFluxes",
    "PhysicalConstants",
    "PumpDrive",
    "SpectrumModel",
    "SpectrumParams",
    "SqueezingSpectrum",
    "Stability",
    "SteadyStateReport",
    "ThresholdMode",
    "ThresholdReport",
    "Trajectory",
    "UnsupportedRegimeError",
    "below_threshold_alpha1",
    "cascade_lines",
    "clamped_sh_power",
    "conservation_audit",
    "continuity_check",
    "delta_from_wavelengths",
    "derived_scales",
    "detuned_threshold_power",
    "effective_decay",
    "find_steady_state",
    "gamma_nl_at",
    "impedance_matching_power",
    "integrate",
    "jacobian",
    "min_threshold_power",
    "numeric_threshold_power",
    "output_fluxes",
    "power_curve",
    "power_of",
    "pump_drive",
    "rhs",
    "sh_output_flux",
    "spectrum_params",
    "spectrum_sweep",
    "steady_state_analytic",
    "suppression_detuning",
    "threshold_power",
    "threshold_report",
    "trivial_branch_growth_rate",
    "trivial_state",
    "v2_competition_general",
    "v2_competition_symmetric",
    "v2_no_competition",
    "version",
]


def version() -> str:
    """Get the chi2cav version string."""
    return __version__
