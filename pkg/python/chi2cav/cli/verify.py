"""
Self-verification suite run by `chi2cav verify`.

Every check compares a computed quantity against a closed form, an independent
numerical route, or a conservation law. Checks that need zero detuning or the
symmetric optimum are run on the corresponding projection of the configuration.
"""

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, List, Tuple

import numpy as np

from ..dynamics import (
    Branch,
    FieldState,
    SteadyStateReport,
    find_steady_state,
    integrate,
    jacobian,
    rhs,
    sh_output_flux,
)
from ..errors import AmbiguousBranchError, Chi2CavError, NonConvergenceError
from ..model import CavityConfig, photon_energy, pump_drive
from ..spectra import (
    SpectrumModel,
    SpectrumParams,
    continuity_check,
    eq5_eq6_comparison,
    spectrum_sweep,
    symmetric_minimum,
    to_db,
    v2_competition_symmetric,
    v2_no_competition,
)
from ..thresholds import (
    Regime,
    clamped_sh_power,
    detuned_threshold_power,
    min_threshold_power,
    numeric_threshold_power,
    power_curve,
    threshold_power,
)

logger = logging.getLogger(__name__)

STEADY_SAMPLES = 500
MIN_CONVERGED_FRACTION = 0.95


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    DOCUMENTED_DISCREPANCY = "documented-discrepancy"


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    measured: float
    expected: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass
class VerifyReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status is not CheckStatus.FAIL for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "overall": "pass" if self.passed else "fail",
            "checks": [
                {
                    **{k: v for k, v in asdict(c).items() if k != "seconds"},
                    "status": c.status.value,
                    "measured": c.measured if math.isfinite(c.measured) else None,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def render_text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=10)
        lines = []
        for c in self.checks:
            lines.append(
                f"{c.status.value.upper():<24} {c.name:<{width}}  "
                f"measured={c.measured:.6e} "
                f"expected={c.expected:.6e} tol={c.tolerance:.1e}  ({c.seconds:.2f} s)"
            )
            if c.detail:
                lines.append(f"{'':<24} {'':<{width}}  {c.detail}")
        lines.append(f"overall: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _result(
    name: str, measured: float, expected: float, tolerance: float, detail: str = ""
) -> CheckResult:
    ok = math.isfinite(measured) and abs(measured - expected) <= tolerance
    status = CheckStatus.PASS if ok else CheckStatus.FAIL
    return CheckResult(name, status, measured, expected, tolerance, detail)


def _symmetric(config: CavityConfig, eta: float = 1.0) -> CavityConfig:
    g = config.gamma1
    return CavityConfig.from_rates(
        gamma1=g,
        gamma1_c=eta * g,
        gamma_s=g,
        gamma_i=g,
        mu1=config.mu1,
        mu2=config.mu1,
        nu=config.nu,
    )


def _random_config(
    rng: np.random.Generator, nu: float, decades: float, eta_low: float
) -> CavityConfig:
    base = 1e7
    g1, gs, gi = base * 10.0 ** rng.uniform(-decades / 2, decades / 2, size=3)
    mu1, mu2 = 10.0 ** rng.uniform(-1.0, 1.0, size=2)
    eta = rng.uniform(eta_low, 1.0)
    return CavityConfig.from_rates(
        gamma1=g1, gamma1_c=eta * g1, gamma_s=gs, gamma_i=gi, mu1=mu1, mu2=mu2, nu=nu
    )


# --- Checks ---

def check_threshold_oracle(
    config: CavityConfig, rng: np.random.Generator, samples: int = 200
) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        cfg = _random_config(rng, config.nu, decades=3.0, eta_low=0.3)
        ratio = numeric_threshold_power(cfg) / threshold_power(cfg)
        worst = max(worst, abs(ratio - 1.0))
    detail = f"{samples} random zero-detuning configs"
    return _result("threshold_oracle", worst, 0.0, 1e-3, detail)


def check_clamping(config: CavityConfig) -> CheckResult:
    cfg = config.without_detuning()
    clamp = clamped_sh_power(cfg)
    h2nu = 2.0 * photon_energy(cfg.nu)
    p_thr = threshold_power(cfg)
    t_end = 3000.0 / min(cfg.gamma1, cfg.gamma_s, cfg.gamma_i)
    seed = 1e-3 * math.sqrt(cfg.gamma_bar / cfg.coupling)

    worst = 0.0
    for n in (1.2, 2.0, 5.0):
        drive = pump_drive(n * p_thr, cfg.nu)
        newton = find_steady_state(cfg, drive)
        worst = max(worst, abs(h2nu * newton.fluxes.sh_flux / clamp - 1.0))
        start = FieldState(0j, complex(seed), complex(seed))
        final = integrate(start, cfg, drive, t_end, tol=1e-10).final
        worst = max(worst, abs(h2nu * sh_output_flux(final, cfg) / clamp - 1.0))

    below = power_curve(cfg, p_thr * np.linspace(0.05, 1.0, 20))
    increasing = all(b.p2 > a.p2 for a, b in zip(below, below[1:])) and all(
        p.regime is Regime.BELOW for p in below
    )
    detail = "N in {1.2, 2, 5}, Newton and long-time integration"
    result = _result("clamping", worst, 0.0, 1e-6, detail)
    if not increasing:
        result.status = CheckStatus.FAIL
        result.detail += "; below-threshold P2 not strictly increasing"
    return result


def check_efficiency_identity(config: CavityConfig) -> CheckResult:
    worst = 0.0
    for eta in (0.5, 0.9, 1.0):
        cfg = _symmetric(config, eta)
        worst = max(worst, abs(clamped_sh_power(cfg) / min_threshold_power(cfg) - eta))
    return _result("efficiency_identity", worst, 0.0, 1e-12, "eta in {0.5, 0.9, 1.0}")


def check_squeezing_limits(config: CavityConfig) -> CheckResult:
    g1 = config.gamma1
    strong = SpectrumParams(gamma_nl=1e3 * g1, gamma1=g1, gamma1_c=g1, v1_in=1.0)
    v = float(v2_no_competition(0.0, strong))
    db_gap = abs(float(to_db(v)) - 10.0 * math.log10(1.0 / 9.0))
    limit = float(v2_competition_symmetric(0.0, 1.0))
    detail = f"dB gap {db_gap:.3e}; eq6(N=1, 0) = {limit!r}"
    result = _result("squeezing_limits", v, 1.0 / 9.0, 1e-3, detail)
    if db_gap > 0.05 or limit != 0.5:
        result.status = CheckStatus.FAIL
    return result


def check_continuity(config: CavityConfig) -> CheckResult:
    return _result(
        "continuity",
        continuity_check(_symmetric(config)),
        0.0,
        1e-12,
        "eq4 (gamma_nl = gamma1) against eq6 (N = 1)",
    )


def check_symmetric_spectrum_shape(config: CavityConfig) -> CheckResult:
    problems = []
    grid = np.linspace(0.0, 10.0, 4001)
    zero_values = []
    for n in (1.001, 1.25, 3.0):
        v0 = float(v2_competition_symmetric(0.0, n))
        zero_values.append(v0)
        if abs(v0 / (1.0 + 2.0 / (n - 1.0)) - 1.0) > 1e-9:
            problems.append(f"V(0) at N={n}")
        values = np.asarray(v2_competition_symmetric(grid, n))
        away = np.abs(grid ** 2 - (n - 1.0)) > 1e-9
        if np.any((values[away] < 1.0) != (grid[away] ** 2 > n - 1.0)):
            problems.append(f"squeezing band at N={n}")
    if not all(b < a for a, b in zip(zero_values, zero_values[1:])):
        problems.append("zero-frequency excess not decreasing in N")

    params = SpectrumParams.symmetric(config.gamma1, 3.0)
    spectrum = spectrum_sweep(SpectrumModel.EQ6, params, np.linspace(0.0, 10.0, 2001))
    w_star, v_star = symmetric_minimum(3.0)
    gap = max(abs(spectrum.omega_min - w_star), abs(spectrum.v_min - v_star))
    if abs(spectrum.omega_min - 3.238) > 1e-3 or abs(spectrum.v_min - 0.9622) > 1e-3:
        problems.append("N=3 minimum off (3.238, 0.9622)")
    detail = (
        f"N=3 minimum at omega_hat={spectrum.omega_min:.6f}, V={spectrum.v_min:.6f}"
    )
    result = _result("symmetric_spectrum_shape", gap, 0.0, 1e-3, detail)
    if problems:
        result.status = CheckStatus.FAIL
        result.detail += "; " + ", ".join(problems)
    return result


def _sample_steady_states(
    config: CavityConfig, rng: np.random.Generator, count: int = STEADY_SAMPLES
) -> List[Tuple[CavityConfig, SteadyStateReport]]:
    """Solve `count` random configurations and powers; failures are logged."""
    samples = []
    for _ in range(count):
        cfg = _random_config(rng, config.nu, decades=2.0, eta_low=0.3)
        n = rng.uniform(0.05, 8.0)
        try:
            drive = pump_drive(n * threshold_power(cfg), cfg.nu)
            samples.append((cfg, find_steady_state(cfg, drive)))
        except (NonConvergenceError, AmbiguousBranchError) as exc:
            logger.warning("skipping steady state at N=%.3f: %s", n, exc)
    return samples


def check_conservation(
    samples: List[Tuple[CavityConfig, SteadyStateReport]],
    attempted: int = STEADY_SAMPLES,
) -> CheckResult:
    residuals = (report.conservation_residual for _, report in samples)
    worst = max(residuals, default=math.nan)
    detail = f"{len(samples)} of {attempted} steady states converged"
    result = _result("conservation", worst, 0.0, 1e-9, detail)
    if len(samples) < MIN_CONVERGED_FRACTION * attempted:
        result.status = CheckStatus.FAIL
    return result


def check_balanced_rates(
    samples: List[Tuple[CavityConfig, SteadyStateReport]],
) -> CheckResult:
    worst = 0.0
    count = 0
    for cfg, report in samples:
        if report.branch is not Branch.NDOPO:
            continue
        count += 1
        s = cfg.gamma_s * abs(report.state.alpha_s) ** 2
        i = cfg.gamma_i * abs(report.state.alpha_i) ** 2
        worst = max(worst, abs(s - i) / s)
    return _result("balanced_rates", worst, 0.0, 1e-8, f"{count} ndopo states")


def finite_difference_jacobian(
    state: FieldState, config: CavityConfig, drive, step: float
) -> np.ndarray:
    y = state.as_vector()
    J = np.empty((6, 6))
    for k in range(6):
        e = np.zeros(6)
        e[k] = step
        plus = rhs(FieldState.from_vector(y + e), config, drive).as_vector()
        minus = rhs(FieldState.from_vector(y - e), config, drive).as_vector()
        J[:, k] = (plus - minus) / (2.0 * step)
    return J


def check_jacobian(
    config: CavityConfig, rng: np.random.Generator, samples: int = 100
) -> CheckResult:
    scale = math.sqrt(config.gamma1 / config.mu1)
    worst = 0.0
    for _ in range(samples):
        state = FieldState.from_vector(3.0 * scale * rng.uniform(-1.0, 1.0, size=6))
        drive = pump_drive(rng.uniform(0.0, 5.0) * threshold_power(config), config.nu)
        analytic = jacobian(state, config, drive)
        numeric = finite_difference_jacobian(state, config, drive, 1e-6 * scale)
        error = np.max(np.abs(analytic - numeric)) / np.max(np.abs(analytic))
        worst = max(worst, float(error))
    return _result("jacobian", worst, 0.0, 1e-6, f"{samples} random states")


def check_eq5_eq6(config: CavityConfig) -> CheckResult:
    comparison = eq5_eq6_comparison(
        np.linspace(1.01, 10.0, 50), np.logspace(-2.0, 2.0, 200), config.gamma1
    )
    detail = (
        f"zero-frequency gap {comparison.zero_frequency_gap:.3e}; "
        f"band gap {comparison.band_gap:.3e}; "
        f"(V5-1)/(V6-1) in [{comparison.ratio_min:.12g}, {comparison.ratio_max:.12g}]"
    )
    if comparison.zero_frequency_gap > 1e-12:
        gap = comparison.zero_frequency_gap
        return CheckResult("eq5_vs_eq6", CheckStatus.FAIL, gap, 0.0, 1e-12, detail)
    if comparison.band_gap <= 1e-9:
        status = CheckStatus.PASS
    else:
        status = CheckStatus.DOCUMENTED_DISCREPANCY
    return CheckResult("eq5_vs_eq6", status, comparison.band_gap, 0.0, 1e-9, detail)


def check_detuned_rule(config: CavityConfig) -> CheckResult:
    rule = detuned_threshold_power(config)
    try:
        numeric = numeric_threshold_power(config)
    except NonConvergenceError as exc:
        return CheckResult(
            "detuned_rule", CheckStatus.FAIL, math.nan, rule, 1e-6, str(exc)
        )
    gap = abs(rule / numeric - 1.0)
    exact = (
        config.delta1 == 0.0
        and config.gamma_s == config.gamma_i
        and config.delta_s == config.delta_i
    ) or not config.has_detuning
    if exact:
        detail = "substitution rule is exact for this configuration"
        return _result("detuned_rule", gap, 0.0, 1e-6, detail)
    status = CheckStatus.PASS if gap <= 1e-6 else CheckStatus.DOCUMENTED_DISCREPANCY
    detail = (
        "substitution rule against numeric bifurcation "
        "(heuristic outside the symmetric subcase)"
    )
    return CheckResult("detuned_rule", status, gap, 0.0, 1e-6, detail)


def run_checks(config: CavityConfig, seed: int = 20240601) -> VerifyReport:
    """Run every check on `config` and collect the results in order."""
    rng = np.random.default_rng(seed)
    report = VerifyReport()
    samples: List[Tuple[CavityConfig, SteadyStateReport]] = []

    def sampled() -> List[Tuple[CavityConfig, SteadyStateReport]]:
        if not samples:
            samples.extend(_sample_steady_states(config, rng))
        return samples

    steps: List[Tuple[str, Callable[[], CheckResult]]] = [
        ("threshold_oracle", lambda: check_threshold_oracle(config, rng)),
        ("clamping", lambda: check_clamping(config)),
        ("efficiency_identity", lambda: check_efficiency_identity(config)),
        ("squeezing_limits", lambda: check_squeezing_limits(config)),
        ("continuity", lambda: check_continuity(config)),
        ("symmetric_spectrum_shape", lambda: check_symmetric_spectrum_shape(config)),
        ("conservation", lambda: check_conservation(sampled())),
        ("jacobian", lambda: check_jacobian(config, rng)),
        ("balanced_rates", lambda: check_balanced_rates(sampled())),
        ("eq5_vs_eq6", lambda: check_eq5_eq6(config)),
        ("detuned_rule", lambda: check_detuned_rule(config)),
    ]
    for name, step in steps:
        started = time.perf_counter()
        try:
            result = step()
        except Chi2CavError as exc:
            logger.error("check %s raised: %s", name, exc)
            detail = f"{type(exc).__name__}: {exc}"
            result = CheckResult(name, CheckStatus.FAIL, math.nan, 0.0, 0.0, detail)
        result.seconds = time.perf_counter() - started
        logger.info("%s: %s", name, result.status.value)
        report.checks.append(result)
    return report
