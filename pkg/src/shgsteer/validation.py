"""Cross-checks tying the nonlinear simulation to the linearized analysis.

The agreement chain verified here closes the loop between the three
independent routes through the model:

  * ensemble means from the nonlinear integration vs. the deterministic
    steady state (3 standard errors),
  * ensemble fluctuation covariance vs. the Lyapunov stationary
    covariance (3 standard errors entrywise),
  * frequency integral of the analytic spectral matrix vs. the same
    Lyapunov covariance (1e-3 relative),
  * finite-window stochastic spectrum vs. the analytic spectral matrix
    at selected frequencies (3 standard errors),
  * discarded-trajectory fraction at most 5%.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .linear import (
    build_fluctuation_system,
    intracavity_spectra,
    lyapunov_covariance,
    spectral_integral,
)
from .model import SystemParams, solve_steady_state
from .stochastic import IntegrationConfig, _simulate

DEFAULT_CHECK_OMEGAS = (0.0, 2.0, 5.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    params: SystemParams
    config: IntegrationConfig
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _sigma_check(name, estimate, target, se, n_sigma=3.0):
    """Pass iff every entry of ``estimate`` is within n_sigma*se of ``target``."""
    estimate = np.asarray(estimate, dtype=float)
    target = np.asarray(target, dtype=float)
    se = np.asarray(se, dtype=float)
    dev = np.abs(estimate - target)
    with np.errstate(invalid="ignore", divide="ignore"):
        sigmas = np.where(dev == 0.0, 0.0, dev / se)
    worst = float(np.nanmax(sigmas)) if sigmas.size else 0.0
    return CheckResult(name=name, passed=bool(worst <= n_sigma),
                       detail=f"max deviation {worst:.2f} standard errors "
                              f"(limit {n_sigma:g})")


def run_validation(params: SystemParams, cfg: IntegrationConfig | None = None,
                   omegas=DEFAULT_CHECK_OMEGAS,
                   drift_hook=None) -> ValidationReport:
    """Run the full agreement chain at one operating point.

    ``drift_hook``, if given, maps the drift matrix to a modified one
    before the analytic references are computed; it exists so tests can
    verify that a corrupted model is actually caught (negative control).
    """
    if cfg is None:
        cfg = IntegrationConfig()
    checks: list[CheckResult] = []

    ss = solve_steady_state(params)
    sys = build_fluctuation_system(params, ss)
    if drift_hook is not None:
        from dataclasses import replace
        sys = replace(sys, drift=drift_hook(np.array(sys.drift)))

    lyap = lyapunov_covariance(sys)
    integral = spectral_integral(sys)
    scale = max(np.abs(lyap).max(), 1e-30)
    rel = np.abs(integral - lyap).max() / scale
    checks.append(CheckResult(
        name="spectral-integral-vs-lyapunov", passed=bool(rel <= 1e-3),
        detail=f"max relative deviation {rel:.2e} (limit 1e-3)"))

    try:
        stats, spectrum = _simulate(params, cfg, omegas=np.asarray(omegas, float))
        divergence_ok = True
        div_detail = (f"{stats.n_discarded}/{cfg.n_trajectories} trajectories "
                      "discarded")
    except DivergenceError as exc:
        stats, spectrum = exc.partial, None
        divergence_ok = False
        div_detail = str(exc)
    checks.append(CheckResult(name="divergence-fraction", passed=divergence_ok,
                              detail=div_detail))

    if stats is not None:
        means = np.array([stats.mean_alpha, stats.mean_alpha_dag,
                          stats.mean_beta, stats.mean_beta_dag])
        target = np.array([ss.alpha_ss, ss.alpha_ss, ss.beta_ss, ss.beta_ss])
        checks.append(_sigma_check("means-vs-steady-state", np.abs(means - target),
                                   0.0, stats.mean_standard_errors))
        checks.append(_sigma_check("covariance-vs-lyapunov", stats.covariance,
                                   lyap, stats.standard_errors))
    if spectrum is not None:
        analytic = intracavity_spectra(sys, spectrum.omegas).real
        checks.append(_sigma_check("stochastic-spectrum-vs-analytic",
                                   spectrum.values, analytic,
                                   spectrum.standard_errors))

    return ValidationReport(params=params, config=cfg, checks=checks)


def corrupt_drift_sign(drift: np.ndarray) -> np.ndarray:
    """Negative-control hook: flip the sign of the mode-coupling entries."""
    bad = np.array(drift)
    bad[0, 2] *= -1.0
    bad[1, 3] *= -1.0
    bad[2, 0] *= -1.0
    bad[3, 1] *= -1.0
    return bad
