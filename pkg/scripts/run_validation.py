#!/usr/bin/env python3
"""Run the stochastic/analytic agreement chain at the standard operating point.

Usage: run_validation.py [n_trajectories] [t_sample]

Smaller budgets finish in seconds and are useful while iterating; the
full default budget (10000 trajectories, 200 time units) is what the
acceptance checks use and takes minutes on one core.
"""

import sys

from shgsteer import IntegrationConfig, SystemParams, critical_pump, run_validation

if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
    t_sample = float(sys.argv[2]) if len(sys.argv) > 2 else 200.0

    base = SystemParams(gamma_a=1.0, gamma_b=1.0, kappa=0.01)
    params = SystemParams(gamma_a=1.0, gamma_b=1.0, kappa=0.01,
                          epsilon=0.6 * critical_pump(base))
    cfg = IntegrationConfig(n_trajectories=n, t_sample=t_sample, seed=0)
    report = run_validation(params, cfg)
    for check in report.checks:
        print(f"[{'PASS' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
    sys.exit(0 if report.passed else 1)
