import numpy as np

from shgsteer import IntegrationConfig, SystemParams, critical_pump, run_validation
from shgsteer.validation import corrupt_drift_sign

SMALL = IntegrationConfig(n_trajectories=150, t_sample=40.0, t_transient=15.0,
                          seed=11)


def fig_params():
    base = SystemParams()
    return SystemParams(epsilon=0.6 * critical_pump(base))


def check_names(report):
    return {c.name: c for c in report.checks}


class TestRunValidation:
    def test_zero_pump_trivially_passes(self):
        cfg = IntegrationConfig(n_trajectories=20, t_sample=5.0, t_transient=1.0,
                                seed=3)
        report = run_validation(SystemParams(), cfg)
        assert report.passed

    def test_small_budget_checks_present(self):
        report = run_validation(fig_params(), SMALL)
        names = check_names(report)
        assert "spectral-integral-vs-lyapunov" in names
        assert "divergence-fraction" in names
        assert "means-vs-steady-state" in names
        assert "covariance-vs-lyapunov" in names
        assert "stochastic-spectrum-vs-analytic" in names
        assert names["spectral-integral-vs-lyapunov"].passed
        assert names["divergence-fraction"].passed

    def test_corrupted_drift_is_caught(self):
        report = run_validation(fig_params(), SMALL,
                                drift_hook=corrupt_drift_sign)
        names = check_names(report)
        # The corrupted analytic reference disagrees with the (honest)
        # simulation far beyond statistical noise.
        assert not names["covariance-vs-lyapunov"].passed
        assert not report.passed

    def test_corruption_changes_covariance_strongly(self):
        p = fig_params()
        from shgsteer import build_fluctuation_system, lyapunov_covariance, \
            solve_steady_state
        from dataclasses import replace
        sys = build_fluctuation_system(p, solve_steady_state(p))
        bad = replace(sys, drift=corrupt_drift_sign(np.array(sys.drift)))
        C, Cb = lyapunov_covariance(sys), lyapunov_covariance(bad)
        assert np.abs(C - Cb).max() > 0.1 * np.abs(C).max()
