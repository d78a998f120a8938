"""
Command implementations behind the chi2cav subcommands.

Each command turns a RunConfig plus parsed flags into one table and returns an exit
code. Exceptions other than non-convergence propagate to the entry point.
"""

import argparse
import dataclasses
import logging
import math
import os
from typing import Callable, Dict, List, Optional

import numpy as np

from ..dynamics import FieldState, find_steady_state, steady_state_analytic
from ..errors import AmbiguousBranchError, ConfigError, NonConvergenceError
from ..model import (
    CavityConfig,
    cascade_lines,
    photon_energy,
    pump_drive,
    wavelength_of_frequency,
)
from ..spectra import (
    SpectrumModel,
    SpectrumParams,
    spectrum_params,
    spectrum_sweep,
    to_db,
)
from ..thresholds import (
    Regime,
    ThresholdMode,
    impedance_matching_power,
    numeric_threshold_power,
    power_curve,
    threshold_power,
    threshold_report,
)
from .config import RunConfig
from .tables import Table, emit, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3

THREADS_ENV = "CHI2CAV_THREADS"
DEFAULT_SEED = 20240601


def worker_count(requested: Optional[int] = None) -> int:
    """Sweep thread count: --threads, else CHI2CAV_THREADS, else the CPU count."""
    if requested is not None:
        if requested < 1:
            raise ConfigError(f"threads must be >= 1, got {requested!r}")
        return requested
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
            if value > 0:
                return value
        except ValueError:
            pass
        logger.warning("ignoring invalid %s=%r", THREADS_ENV, raw)
    return os.cpu_count() or 1


def _output(run_config: RunConfig, args: argparse.Namespace):
    path = _flag(args, "output", run_config.output.path)
    return path, _flag(args, "format", run_config.output.format)


def _flag(args: argparse.Namespace, name: str, default=None):
    """A command-line value, or `default` when the flag was not given."""
    value = getattr(args, name, None)
    return default if value is None else value


# --- threshold ---

THRESHOLD_COLUMNS = (
    "p1_thr_w",
    "p1_min_w",
    "eta",
    "clamped_p2_w",
    "efficiency_at_threshold",
    "mode",
    "impedance_matching_w",
    "p1_thr_numeric_w",
)


def run_threshold(run_config: RunConfig, args: argparse.Namespace) -> int:
    config = run_config.cavity()
    if _flag(args, "numeric"):
        mode = ThresholdMode.NUMERIC_BIFURCATION
    elif _flag(args, "detuned"):
        mode = ThresholdMode.EFFECTIVE_DECAY_SUBSTITUTION
    else:
        mode = ThresholdMode.ZERO_DETUNING
    report = threshold_report(config, mode)

    matching = math.nan
    if not config.has_detuning:
        value = impedance_matching_power(config)
        matching = math.nan if value is None else value
    try:
        if mode is ThresholdMode.NUMERIC_BIFURCATION:
            numeric = report.p1_thr
        else:
            numeric = numeric_threshold_power(config)
    except NonConvergenceError as exc:
        logger.warning("numeric threshold unavailable: %s", exc)
        numeric = math.nan

    table = Table(columns=THRESHOLD_COLUMNS)
    table.add(
        report.p1_thr,
        report.p1_min,
        report.eta,
        report.clamped_p2,
        report.efficiency_at_threshold,
        report.mode,
        matching,
        numeric,
    )
    emit(table, *_output(run_config, args))
    return EXIT_OK


# --- steady ---

STEADY_COLUMNS = (
    "alpha1_re",
    "alpha1_im",
    "alpha_s_re",
    "alpha_s_im",
    "alpha_i_re",
    "alpha_i_im",
    "branch",
    "sh_flux",
    "p2_w",
    "fundamental_out_flux",
    "conservation_residual",
    "max_re_eigenvalue",
    "stability",
    "phase_drift",
)


def _amplitudes(state: FieldState) -> List[float]:
    return [
        state.alpha1.real,
        state.alpha1.imag,
        state.alpha_s.real,
        state.alpha_s.imag,
        state.alpha_i.real,
        state.alpha_i.imag,
    ]


def run_steady(run_config: RunConfig, args: argparse.Namespace) -> int:
    config = run_config.cavity()
    power = _flag(args, "power")
    if power is None:
        power = run_config.pump_power
    if power is None:
        raise ConfigError("steady needs --power or pump_power in the config")
    drive = pump_drive(power, config.nu)
    path, fmt = _output(run_config, args)
    table = Table(columns=STEADY_COLUMNS)

    try:
        if _flag(args, "analytic"):
            report = steady_state_analytic(config, drive)
        else:
            solver = run_config.solver
            report = find_steady_state(config, drive, tol=solver.tol, kick=solver.kick)
    except (NonConvergenceError, AmbiguousBranchError) as exc:
        logger.error("steady state failed: %s", exc)
        if isinstance(exc, AmbiguousBranchError):
            state = exc.state
        else:
            state = exc.partial.final if exc.partial is not None else None
        amplitudes = [math.nan] * 6 if state is None else _amplitudes(state)
        label = "ambiguous" if isinstance(exc, AmbiguousBranchError) else "failed"
        table.add(*amplitudes, label, *([math.nan] * 5), label, math.nan)
        emit(table, path, fmt)
        return EXIT_NONCONVERGENCE

    sh_flux = report.fluxes.sh_flux
    table.add(
        *_amplitudes(report.state),
        report.branch,
        sh_flux,
        2.0 * photon_energy(config.nu) * sh_flux,
        report.fluxes.fundamental_out_flux,
        report.conservation_residual,
        report.max_re_eigenvalue,
        report.stability,
        report.phase_drift,
    )
    emit(table, path, fmt)
    return EXIT_OK


# --- clamp-curve ---

def _power_grid(run_config: RunConfig, args: argparse.Namespace) -> np.ndarray:
    sweep = run_config.sweep
    start = _flag(args, "pmin")
    stop = _flag(args, "pmax")
    steps = _flag(args, "steps")
    spacing = _flag(args, "spacing")
    if sweep is not None:
        start = sweep.start if start is None else start
        stop = sweep.stop if stop is None else stop
        steps = sweep.steps if steps is None else steps
        spacing = sweep.spacing if spacing is None else spacing
    spacing = spacing or "linear"
    if start is None or stop is None or steps is None:
        raise ConfigError(
            "clamp-curve needs --pmin, --pmax and --steps (or a sweep section)"
        )
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps!r}")
    if start < 0.0 or stop < start:
        raise ConfigError(f"need 0 <= pmin <= pmax, got pmin={start!r}, pmax={stop!r}")
    if spacing == "log":
        if start <= 0.0:
            raise ConfigError("log spacing needs pmin > 0")
        return np.geomspace(start, stop, steps)
    return np.linspace(start, stop, steps)


def run_clamp_curve(run_config: RunConfig, args: argparse.Namespace) -> int:
    config = run_config.cavity()
    grid = _power_grid(run_config, args)
    points = power_curve(
        config,
        grid,
        competition=not _flag(args, "no_competition"),
        workers=worker_count(_flag(args, "threads")),
        tol=run_config.solver.tol,
        kick=run_config.solver.kick,
    )
    table = Table(columns=("p1_w", "p2_w", "efficiency", "regime"))
    for point in points:
        table.add(point.p1, point.p2, point.efficiency, point.regime)
    emit(table, *_output(run_config, args))

    failed = sum(1 for p in points if p.regime is Regime.FAILED)
    if failed:
        logger.error("%d of %d curve points failed to converge", failed, len(points))
        return EXIT_NONCONVERGENCE
    return EXIT_OK


# --- spectrum ---

def _spectrum_inputs(config: CavityConfig, n_scaled: float) -> SpectrumParams:
    drive = pump_drive(n_scaled * threshold_power(config), config.nu)
    # Only eq4 reads gamma_nl, and it describes the doubler-only operating point.
    params = spectrum_params(config, drive, competition=False)
    return dataclasses.replace(params, n_scaled=n_scaled)


def run_spectrum(run_config: RunConfig, args: argparse.Namespace) -> int:
    config = run_config.cavity()
    section = run_config.spectrum
    model = SpectrumModel(_flag(args, "model", section.model))
    n_scaled = _flag(args, "n", section.n_scaled)
    omega_max = _flag(args, "omega_max", section.omega_max_over_gamma1)
    points = _flag(args, "points", section.points)
    if points < 2:
        raise ConfigError(f"points must be >= 2, got {points!r}")
    if not omega_max > 0.0:
        raise ConfigError(f"omega-max must be > 0, got {omega_max!r}")

    params = _spectrum_inputs(config, n_scaled)
    omegas = np.linspace(0.0, omega_max * config.gamma1, points)
    if model is SpectrumModel.EQ6:
        grid = omegas / (2.0 * config.gamma1)
        axis = "omega_hat"
    else:
        grid = omegas
        axis = "omega_rad_s"

    spectrum = spectrum_sweep(model, params, grid)
    hz = spectrum.frequencies_hz()
    table = Table(columns=(axis, "f_hz", "v2", "v2_db"))
    for w, f, v, db in zip(spectrum.omegas, hz, spectrum.values, spectrum.db):
        table.add(float(w), float(f), float(v), float(db))
    to_rad = 2.0 * config.gamma1 if model is SpectrumModel.EQ6 else 1.0
    omega_min_rad = spectrum.omega_min * to_rad
    table.notes["minimum"] = {
        axis: spectrum.omega_min,
        "f_hz": omega_min_rad / (2.0 * math.pi),
        "v2": spectrum.v_min,
        "v2_db": to_db(spectrum.v_min) if spectrum.v_min > 0.0 else -math.inf,
    }
    emit(table, *_output(run_config, args))
    return EXIT_OK


# --- cascade ---

def run_cascade(run_config: RunConfig, args: argparse.Namespace) -> int:
    delta = _flag(args, "delta", run_config.cascade.delta_hz)
    if delta is None:
        raise ConfigError("cascade needs --delta or cascade.delta_hz in the config")
    order = _flag(args, "order", run_config.cascade.order)

    layout = cascade_lines(run_config.nu_hz, delta, order)
    table = Table(columns=("band", "frequency_hz", "wavelength_nm", "order_k"))
    for band, frequency, k in layout.tagged():
        table.add(band, frequency, wavelength_of_frequency(frequency) * 1e9, k)
    emit(table, *_output(run_config, args))
    return EXIT_OK


# --- verify ---

def run_verify(run_config: RunConfig, args: argparse.Namespace) -> int:
    from .verify import run_checks

    report = run_checks(run_config.cavity(), seed=_flag(args, "seed", DEFAULT_SEED))
    path, _ = _output(run_config, args)
    if path is None:
        write_text(report.render_text() + "\n" + report.to_json(), None)
    else:
        write_text(report.render_text(), None)
        write_text(report.to_json(), path)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "threshold": run_threshold,
    "steady": run_steady,
    "clamp-curve": run_clamp_curve,
    "spectrum": run_spectrum,
    "cascade": run_cascade,
    "verify": run_verify,
}


def run_command(name: str, run_config: RunConfig, args: argparse.Namespace) -> int:
    """Dispatch one subcommand and return its exit code."""
    try:
        command = COMMANDS[name]
    except KeyError:
        raise ConfigError(f"unknown command {name!r}") from None
    logger.info("running %s (nu=%.6g Hz)", name, run_config.nu_hz)
    return command(run_config, args)
