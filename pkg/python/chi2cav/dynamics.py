"""
Equations of motion for the fundamental, signal and idler amplitudes.

    d(alpha1)/dt = -(gamma1 + i delta1) alpha1 - 2 sqrt(mu1 mu2) alpha1* alpha_s alpha_i
                   - mu1 |alpha1|^2 alpha1 + sqrt(2 gamma1_c) A1
    d(alpha_s)/dt = -(gamma_s + i delta_s) alpha_s - sqrt(mu1 mu2) alpha1^2 alpha_i*
                    - 2 mu2 |alpha_i|^2 alpha_s
    d(alpha_i)/dt = (same with s <-> i)

The state is handled as a 6-vector [Re a1, Im a1, Re as, Im as, Re ai, Im ai] for
integration, Newton refinement and linear stability.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import integrate as sp_integrate

from .errors import (
    AmbiguousBranchError,
    DomainError,
    NonConvergenceError,
    UnsupportedRegimeError,
)
from .model import CavityConfig, PumpDrive

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_KICK = 1e-3
MARCH_TOL = 1e-8
FIRST_STEP_FRACTION = 1e-3
# |alpha_s alpha_i| below DEAD_BAND * gamma_bar / sqrt(mu1 mu2) counts as zero.
DEAD_BAND = 1e-6
# Eigenvalues with |Re| below STABILITY_MARGIN * gamma1 are marginal.
STABILITY_MARGIN = 1e-9
NEWTON_MAX_ITER = 50
MARCH_CHUNK_DECAY_TIMES = 20.0
MARCH_MAX_CHUNKS = 250

# Generator of the neutral phase rotation alpha_s -> alpha_s e^{i phi},
# alpha_i -> alpha_i e^{-i phi}, acting on the 6-vector.
PHASE_GENERATOR = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
    ]
)


class Branch(str, Enum):
    TRIVIAL = "trivial"
    NDOPO = "ndopo"


class Stability(str, Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class FieldState:
    """Intracavity amplitudes; |alpha|^2 is the photon number of that mode."""

    alpha1: complex
    alpha_s: complex
    alpha_i: complex

    @classmethod
    def zero(cls) -> "FieldState":
        return cls(0j, 0j, 0j)

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "FieldState":
        return cls(complex(y[0], y[1]), complex(y[2], y[3]), complex(y[4], y[5]))

    def as_vector(self) -> np.ndarray:
        return np.array(
            [
                self.alpha1.real, self.alpha1.imag,
                self.alpha_s.real, self.alpha_s.imag,
                self.alpha_i.real, self.alpha_i.imag,
            ]
        )

    def rotated(self, phi: float) -> "FieldState":
        """Apply the neutral signal/idler phase rotation by phi."""
        turn = complex(math.cos(phi), math.sin(phi))
        return FieldState(
            self.alpha1, self.alpha_s * turn, self.alpha_i * turn.conjugate()
        )

    @property
    def pair_product(self) -> complex:
        return self.alpha_s * self.alpha_i

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_vector())))


@dataclass(frozen=True)
class StepStats:
    accepted: int
    rejected: int
    nfev: int
    last_step: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: Tuple[FieldState, ...]
    step_stats: StepStats

    @property
    def final(self) -> FieldState:
        return self.states[-1]


@dataclass(frozen=True)
class OutputFluxes:
    """Photon fluxes (photons/s) leaving the cavity, and the input flux."""

    sh_flux: float
    fundamental_out_flux: float
    internal_loss_flux: float
    signal_flux: float
    idler_flux: float
    input_flux: float


@dataclass(frozen=True)
class SteadyStateReport:
    """
    A converged steady state and its diagnostics.

    Attributes:
        state: Field amplitudes.
        branch: trivial or ndopo, decided against the dead-band.
        residual: Largest |d(alpha)/dt| over modes, in the co-rotating frame.
        max_re_eigenvalue: Largest real part of the linearization, the neutral phase
            eigenvalue of the ndopo branch excluded.
        stable: True when max_re_eigenvalue < -STABILITY_MARGIN * gamma1.
        stability: stable, marginal or unstable.
        fluxes: Output photon fluxes.
        conservation_residual: Relative photon-number bookkeeping error.
        phase_drift: Counter-rotation rate of signal and idler (rad/s); zero unless
            the signal and idler detunings are unbalanced.
        neutral_eigenvalue: The excluded phase eigenvalue (ndopo branch only).
    """

    state: FieldState
    branch: Branch
    residual: float
    max_re_eigenvalue: float
    stable: bool
    stability: Stability
    fluxes: OutputFluxes
    conservation_residual: float
    phase_drift: float = 0.0
    neutral_eigenvalue: Optional[complex] = None


class _Coefficients(NamedTuple):
    g1: complex
    gs: complex
    gi: complex
    cross: float
    mu1: float
    mu2: float
    drive: float


def _coefficients(config: CavityConfig, drive: PumpDrive) -> _Coefficients:
    return _Coefficients(
        g1=complex(config.gamma1, config.delta1),
        gs=complex(config.gamma_s, config.delta_s),
        gi=complex(config.gamma_i, config.delta_i),
        cross=config.coupling,
        mu1=config.mu1,
        mu2=config.mu2,
        # Drive term reads sqrt(2 gamma1_c) * A1.
        drive=math.sqrt(2.0 * config.gamma1_c) * drive.amplitude,
    )


def _derivatives(
    a1: complex, s: complex, i: complex, c: _Coefficients
) -> Tuple[complex, complex, complex]:
    pair = s * i
    d1 = (
        -c.g1 * a1
        - 2.0 * c.cross * a1.conjugate() * pair
        - c.mu1 * abs(a1) ** 2 * a1
        + c.drive
    )
    ds = -c.gs * s - c.cross * a1 * a1 * i.conjugate() - 2.0 * c.mu2 * abs(i) ** 2 * s
    di = -c.gi * i - c.cross * a1 * a1 * s.conjugate() - 2.0 * c.mu2 * abs(s) ** 2 * i
    return d1, ds, di


def _rhs_vector(y: np.ndarray, c: _Coefficients) -> np.ndarray:
    a1, s, i = complex(y[0], y[1]), complex(y[2], y[3]), complex(y[4], y[5])
    d1, ds, di = _derivatives(a1, s, i, c)
    return np.array([d1.real, d1.imag, ds.real, ds.imag, di.real, di.imag])


def _rhs_vector_unbounded(y: np.ndarray, c: _Coefficients) -> np.ndarray:
    """
    _rhs_vector on numpy scalars, so an overflowing trial stage yields inf instead of
    raising; the stepper then rejects the step.
    """
    a1, s, i = y[0] + 1j * y[1], y[2] + 1j * y[3], y[4] + 1j * y[5]
    with np.errstate(over="ignore", invalid="ignore"):
        d1, ds, di = _derivatives(a1, s, i, c)
        return np.array([d1.real, d1.imag, ds.real, ds.imag, di.real, di.imag])


def _mode_norm(v: np.ndarray) -> float:
    """Largest complex magnitude among the three mode components of a 6-vector."""
    return float(np.max(np.hypot(v[0::2], v[1::2])))


def rhs(state: FieldState, config: CavityConfig, drive: PumpDrive) -> FieldState:
    """Time derivative of the amplitudes, returned in FieldState form."""
    c = _coefficients(config, drive)
    d1, ds, di = _derivatives(state.alpha1, state.alpha_s, state.alpha_i, c)
    return FieldState(d1, ds, di)


def _jacobian(state: FieldState, c: _Coefficients) -> np.ndarray:
    a1, s, i = state.alpha1, state.alpha_s, state.alpha_i
    g = c.cross
    # Wirtinger derivatives: A = d f / d z, B = d f / d z*.
    A = np.zeros((3, 3), dtype=complex)
    B = np.zeros((3, 3), dtype=complex)

    A[0, 0] = -c.g1 - 2.0 * c.mu1 * abs(a1) ** 2
    B[0, 0] = -2.0 * g * s * i - c.mu1 * a1 * a1
    A[0, 1] = -2.0 * g * a1.conjugate() * i
    A[0, 2] = -2.0 * g * a1.conjugate() * s

    A[1, 0] = -2.0 * g * a1 * i.conjugate()
    A[1, 1] = -c.gs - 2.0 * c.mu2 * abs(i) ** 2
    A[1, 2] = -2.0 * c.mu2 * i.conjugate() * s
    B[1, 2] = -g * a1 * a1 - 2.0 * c.mu2 * s * i

    A[2, 0] = -2.0 * g * a1 * s.conjugate()
    A[2, 2] = -c.gi - 2.0 * c.mu2 * abs(s) ** 2
    A[2, 1] = -2.0 * c.mu2 * s.conjugate() * i
    B[2, 1] = -g * a1 * a1 - 2.0 * c.mu2 * s * i

    plus, minus = A + B, A - B
    J = np.empty((6, 6))
    J[0::2, 0::2] = plus.real
    J[0::2, 1::2] = -minus.imag
    J[1::2, 0::2] = plus.imag
    J[1::2, 1::2] = minus.real
    return J


def jacobian(state: FieldState, config: CavityConfig, drive: PumpDrive) -> np.ndarray:
    """Analytic 6x6 real Jacobian of the equations of motion."""
    return _jacobian(state, _coefficients(config, drive))


def trivial_branch_growth_rate(config: CavityConfig, alpha1: complex) -> float:
    """
    Largest growth rate of the signal/idler fluctuation pair (d alpha_s, d alpha_i*)
    about the trivial branch. Zero crossing marks the exact threshold.
    """
    gs = complex(config.gamma_s, config.delta_s)
    gi_conj = complex(config.gamma_i, -config.delta_i)
    gain_sq = config.mu1 * config.mu2 * abs(alpha1) ** 4
    root = np.sqrt(((gs - gi_conj) / 2.0) ** 2 + gain_sq + 0j)
    centre = -(gs + gi_conj) / 2.0
    return float(max((centre + root).real, (centre - root).real))


def sh_output_flux(state: FieldState, config: CavityConfig) -> float:
    """Second-harmonic flux |sqrt(mu1) alpha1^2 + 2 sqrt(mu2) alpha_s alpha_i|^2."""
    field = (
        math.sqrt(config.mu1) * state.alpha1 ** 2
        + 2.0 * math.sqrt(config.mu2) * state.pair_product
    )
    return abs(field) ** 2


def output_fluxes(
    state: FieldState, config: CavityConfig, drive: PumpDrive
) -> OutputFluxes:
    """Output photon fluxes; the reflected pump is sqrt(2 gamma1_c) alpha1 - A1."""
    reflected = math.sqrt(2.0 * config.gamma1_c) * state.alpha1 - drive.amplitude
    internal_rate = 2.0 * (config.gamma1 - config.gamma1_c)
    return OutputFluxes(
        sh_flux=sh_output_flux(state, config),
        fundamental_out_flux=abs(reflected) ** 2,
        internal_loss_flux=internal_rate * abs(state.alpha1) ** 2,
        signal_flux=2.0 * config.gamma_s * abs(state.alpha_s) ** 2,
        idler_flux=2.0 * config.gamma_i * abs(state.alpha_i) ** 2,
        input_flux=drive.amplitude ** 2,
    )


def _conservation_residual(fluxes: OutputFluxes) -> float:
    # Each second-harmonic photon carries two fundamental quanta.
    out = (
        fluxes.fundamental_out_flux
        + fluxes.internal_loss_flux
        + 2.0 * fluxes.sh_flux
        + fluxes.signal_flux
        + fluxes.idler_flux
    )
    if fluxes.input_flux == 0.0:
        return 0.0 if out == 0.0 else math.inf
    return abs(fluxes.input_flux - out) / fluxes.input_flux


def conservation_audit(
    report: SteadyStateReport, config: CavityConfig, drive: PumpDrive, tol: float = 1e-6
) -> float:
    """
    Relative photon-number bookkeeping residual at a steady state.

    Raises:
        DomainError: If the report's residual exceeds tol * gamma1 * max(1, |alpha1|),
            i.e. the state is not stationary and the bookkeeping does not apply.
    """
    limit = tol * config.gamma1 * max(1.0, abs(report.state.alpha1))
    if not report.residual <= limit:
        raise DomainError(
            "conservation audit needs a steady state "
            f"(residual {report.residual:.3e} > {limit:.3e})"
        )
    return _conservation_residual(output_fluxes(report.state, config, drive))


# --- Integration ---

def integrate(
    state0: FieldState,
    config: CavityConfig,
    drive: PumpDrive,
    t_end: float,
    tol: float = MARCH_TOL,
) -> Trajectory:
    """
    Integrate the equations of motion with the Dormand-Prince 5(4) embedded pair.

    Args:
        state0: Initial amplitudes.
        config: Cavity configuration.
        drive: Pump drive.
        t_end: Final time (s), > 0.
        tol: Relative local error per step, in [1e-12, 1e-3]. The absolute tolerance
            is tol times the natural amplitude scale of the problem.

    Raises:
        DomainError: On invalid t_end or tol.
        NonConvergenceError: On step-size underflow or non-finite state; carries the
            partial trajectory.
    """
    if not t_end > 0.0:
        raise DomainError(f"t_end must be > 0, got {t_end!r}")
    if not 1e-12 <= tol <= 1e-3:
        raise DomainError(f"tol must lie in [1e-12, 1e-3], got {tol!r}")

    c = _coefficients(config, drive)
    y0 = state0.as_vector()
    scale = max(
        float(np.max(np.abs(y0))),
        math.sqrt(config.gamma_bar / config.coupling),
        c.drive / config.gamma1,
    )
    # Fastest linear or nonlinear rate at the amplitude scale bounds the first step.
    nonlinear = (c.mu1 + 2.0 * c.cross + 2.0 * c.mu2) * scale * scale
    fastest = max(abs(c.g1), abs(c.gs), abs(c.gi), nonlinear)
    solver = sp_integrate.RK45(
        lambda t, y: _rhs_vector_unbounded(y, c),
        0.0,
        y0,
        t_end,
        rtol=tol,
        atol=tol * scale,
        first_step=min(t_end, FIRST_STEP_FRACTION / fastest),
    )

    times: List[float] = [0.0]
    states: List[FieldState] = [state0]

    def build() -> Trajectory:
        # scipy's RK45 spends 2 evaluations on start-up and 6 per attempted step.
        attempts = max(0, (solver.nfev - 2) // 6)
        stats = StepStats(
            accepted=len(times) - 1,
            rejected=max(0, attempts - (len(times) - 1)),
            nfev=solver.nfev,
            last_step=float(solver.step_size or 0.0),
        )
        return Trajectory(
            times=np.asarray(times), states=tuple(states), step_stats=stats
        )

    while solver.status == "running":
        try:
            message = solver.step()
        except (OverflowError, FloatingPointError) as exc:
            raise NonConvergenceError(
                f"overflow in trial step at t={solver.t:.6e}: {exc}", partial=build()
            ) from exc
        if solver.status == "failed":
            raise NonConvergenceError(
                f"integrator failed at t={solver.t:.6e}: {message}", partial=build()
            )
        if not np.all(np.isfinite(solver.y)):
            raise NonConvergenceError(
                f"non-finite state at t={solver.t:.6e}", partial=build()
            )
        times.append(float(solver.t))
        states.append(FieldState.from_vector(solver.y))

    trajectory = build()
    logger.debug(
        "integrated to t=%.3e in %d steps (%d rejected)",
        t_end, trajectory.step_stats.accepted, trajectory.step_stats.rejected,
    )
    return trajectory


# --- Steady states ---

def _dead_band(config: CavityConfig) -> float:
    return DEAD_BAND * config.gamma_bar / config.coupling


def _residual_limit(config: CavityConfig, state: FieldState, tol: float) -> float:
    return tol * config.gamma1 * max(1.0, abs(state.alpha1))


def _newton_trivial(
    state: FieldState, config: CavityConfig, c: _Coefficients, tol: float
) -> Optional[FieldState]:
    """Newton on alpha1 alone with alpha_s = alpha_i = 0 exactly."""
    y = np.array([state.alpha1.real, state.alpha1.imag, 0.0, 0.0, 0.0, 0.0])
    for iteration in range(NEWTON_MAX_ITER):
        f = _rhs_vector(y, c)[:2]
        candidate = FieldState.from_vector(y)
        if math.hypot(f[0], f[1]) <= _residual_limit(config, candidate, tol):
            logger.debug("trivial Newton converged in %d iterations", iteration)
            return candidate
        J = _jacobian(candidate, c)[:2, :2]
        try:
            y[:2] -= np.linalg.solve(J, f)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(y)):
            return None
    return None


def _newton_bordered(
    state: FieldState, config: CavityConfig, c: _Coefficients, tol: float
) -> Optional[Tuple[FieldState, float]]:
    """
    Newton on (state, drift) for F(y) = drift * R y with the phase fixed by
    (R y0) . (y - y0) = 0. The phase condition removes the neutral direction.
    """
    y0 = state.as_vector()
    direction = PHASE_GENERATOR @ y0
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        return None
    direction = direction / norm

    y = y0.copy()
    f = _rhs_vector(y, c)
    ry = PHASE_GENERATOR @ y
    drift = float(ry @ f / (ry @ ry))

    for iteration in range(NEWTON_MAX_ITER):
        ry = PHASE_GENERATOR @ y
        g = _rhs_vector(y, c) - drift * ry
        candidate = FieldState.from_vector(y)
        if _mode_norm(g) <= _residual_limit(config, candidate, tol):
            logger.debug(
                "bordered Newton converged in %d iterations (drift %.3e)",
                iteration,
                drift,
            )
            return candidate, drift
        system = np.zeros((7, 7))
        system[:6, :6] = _jacobian(candidate, c) - drift * PHASE_GENERATOR
        system[:6, 6] = -ry
        system[6, :6] = direction
        rhs_vec = np.concatenate([-g, [-(direction @ (y - y0))]])
        try:
            step = np.linalg.solve(system, rhs_vec)
        except np.linalg.LinAlgError:
            return None
        y = y + step[:6]
        drift += step[6]
        if not (np.all(np.isfinite(y)) and math.isfinite(drift)):
            return None
    return None


def _assemble_report(
    state: FieldState,
    drift: float,
    config: CavityConfig,
    drive: PumpDrive,
    c: _Coefficients,
) -> SteadyStateReport:
    ry = PHASE_GENERATOR @ state.as_vector()
    residual = _mode_norm(_rhs_vector(state.as_vector(), c) - drift * ry)
    competing = abs(state.pair_product) >= _dead_band(config)
    branch = Branch.NDOPO if competing else Branch.TRIVIAL

    eigenvalues = np.linalg.eigvals(_jacobian(state, c) - drift * PHASE_GENERATOR)
    neutral: Optional[complex] = None
    if branch is Branch.NDOPO:
        k = int(np.argmin(np.abs(eigenvalues)))
        neutral = complex(eigenvalues[k])
        eigenvalues = np.delete(eigenvalues, k)
    max_re = float(np.max(eigenvalues.real))

    margin = STABILITY_MARGIN * config.gamma1
    if max_re < -margin:
        stability = Stability.STABLE
    elif max_re <= margin:
        stability = Stability.MARGINAL
    else:
        stability = Stability.UNSTABLE

    fluxes = output_fluxes(state, config, drive)
    return SteadyStateReport(
        state=state,
        branch=branch,
        residual=residual,
        max_re_eigenvalue=max_re,
        stable=stability is Stability.STABLE,
        stability=stability,
        fluxes=fluxes,
        conservation_residual=_conservation_residual(fluxes),
        phase_drift=drift,
        neutral_eigenvalue=neutral,
    )


def find_steady_state(
    config: CavityConfig,
    drive: PumpDrive,
    tol: float = DEFAULT_TOL,
    kick: float = DEFAULT_KICK,
) -> SteadyStateReport:
    """
    Locate the attracting steady state reached from a seeded signal/idler pair.

    The system is marched in time from alpha1 = 0, alpha_s = alpha_i =
    kick * sqrt(gamma_bar / sqrt(mu1 mu2)); after each chunk a Newton refinement is
    attempted (on alpha1 alone inside the dead-band, otherwise on the full state with
    the neutral phase direction bordered out). Unstable fixed points found along the
    way are skipped and marching continues.

    Args:
        config: Cavity configuration (detunings allowed).
        drive: Pump drive.
        tol: Newton stops at residual <= tol * gamma1 * max(1, |alpha1|).
        kick: Relative signal/idler seed, > 0.

    Raises:
        DomainError: If kick is not positive.
        NonConvergenceError: If no steady state is found within the march budget.
        AmbiguousBranchError: If the converged state lies in the dead-band while the
            trivial branch is not strictly stable.
    """
    if not kick > 0.0:
        raise DomainError(f"kick must be > 0, got {kick!r}")
    c = _coefficients(config, drive)

    if drive.amplitude == 0.0:
        return _assemble_report(FieldState.zero(), 0.0, config, drive, c)

    seed = kick * math.sqrt(config.gamma_bar / config.coupling)
    state = FieldState(0j, complex(seed), complex(seed))
    chunk = MARCH_CHUNK_DECAY_TIMES / min(config.gamma1, config.gamma_s, config.gamma_i)
    dead_band = _dead_band(config)
    trajectory: Optional[Trajectory] = None

    for index in range(MARCH_MAX_CHUNKS):
        trajectory = integrate(state, config, drive, chunk, MARCH_TOL)
        state = trajectory.final

        if abs(state.pair_product) < dead_band:
            polished = _newton_trivial(state, config, c, tol)
            found = None if polished is None else (polished, 0.0)
        else:
            found = _newton_bordered(state, config, c, tol)
        if found is None:
            continue

        report = _assemble_report(found[0], found[1], config, drive, c)
        if report.stability is Stability.UNSTABLE:
            logger.debug(
                "chunk %d: skipping unstable %s fixed point", index, report.branch.value
            )
            continue
        if report.stability is Stability.MARGINAL and report.branch is Branch.TRIVIAL:
            raise AmbiguousBranchError(
                "trivial branch is marginal at this power; branch cannot be decided",
                state=report.state,
            )
        if report.branch is Branch.TRIVIAL and abs(found[0].pair_product) > 0.0:
            raise AmbiguousBranchError(
                "signal/idler product inside the dead-band", state=report.state
            )
        logger.debug(
            "steady state after %d chunks: %s, residual %.3e",
            index + 1,
            report.branch.value,
            report.residual,
        )
        return report

    raise NonConvergenceError(
        f"no steady state within {MARCH_MAX_CHUNKS} march chunks of {chunk:.3e} s",
        partial=trajectory,
    )


def steady_state_analytic(config: CavityConfig, drive: PumpDrive) -> SteadyStateReport:
    """
    Closed-form steady state at zero detuning.

    Below threshold alpha1 is the real root of gamma1 x + mu1 x^3 = sqrt(2 gamma1_c) A1
    with no signal or idler. Above threshold alpha1 = sqrt(2 gamma1_c) A1 /
    (gamma1 + r gamma_bar) and alpha_s alpha_i = -(sqrt(mu1) alpha1^2 -
    gamma_bar / sqrt(mu2)) / (2 sqrt(mu2)), reported with theta_s = theta_i = pi/2.

    Raises:
        UnsupportedRegimeError: If any detuning is nonzero.
    """
    from .thresholds import below_threshold_alpha1, threshold_power

    if config.has_detuning:
        raise UnsupportedRegimeError(
            "closed-form steady state needs zero detunings; use find_steady_state"
        )
    c = _coefficients(config, drive)

    if drive.power <= threshold_power(config):
        state = FieldState(complex(below_threshold_alpha1(config, drive.power)), 0j, 0j)
    else:
        a1 = c.drive / (config.gamma1 + config.r * config.gamma_bar)
        root_mu2 = math.sqrt(config.mu2)
        pair = -(math.sqrt(config.mu1) * a1 * a1 - config.gamma_bar / root_mu2) / (
            2.0 * root_mu2
        )
        ratio = (config.gamma_i / config.gamma_s) ** 0.25
        size = math.sqrt(abs(pair))
        state = FieldState(complex(a1), 1j * ratio * size, 1j * size / ratio)
    return _assemble_report(state, 0.0, config, drive, c)


def trivial_state(config: CavityConfig, drive: PumpDrive) -> FieldState:
    """
    Trivial-branch fixed point (no signal or idler) for any fundamental detuning.

    |alpha1|^2 is the root of n((gamma1 + mu1 n)^2 + delta1^2) = 2 gamma1_c A1^2.
    """
    from .thresholds import trivial_alpha1

    return FieldState(trivial_alpha1(config, drive), 0j, 0j)
