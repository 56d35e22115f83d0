import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shgsteer import (
    ParameterError,
    SteadyState,
    SystemParams,
    critical_pump,
    solve_steady_state,
    steady_state_residual,
)

rates = st.floats(min_value=0.05, max_value=20.0,
                  allow_nan=False, allow_infinity=False)


class TestSystemParams:
    def test_defaults(self):
        p = SystemParams()
        assert (p.gamma_a, p.gamma_b, p.kappa, p.epsilon) == (1.0, 1.0, 0.01, 0.0)

    @pytest.mark.parametrize("bad", [
        dict(gamma_a=0.0), dict(gamma_a=-1.0), dict(gamma_b=0.0),
        dict(kappa=-0.01), dict(epsilon=-1.0), dict(gamma_a=float("nan")),
        dict(epsilon=float("inf")),
    ])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ParameterError):
            SystemParams(**bad)

    def test_pump_fraction(self):
        p = SystemParams(epsilon=300.0)
        assert p.pump_fraction == pytest.approx(0.5)


class TestCriticalPump:
    def test_reference_values(self):
        assert critical_pump(SystemParams()) == pytest.approx(600.0, rel=1e-12)
        assert critical_pump(SystemParams(gamma_b=0.25)) == pytest.approx(
            177.87811838447135, rel=1e-12)

    def test_inverse_in_kappa(self):
        p1 = critical_pump(SystemParams(kappa=0.01))
        p2 = critical_pump(SystemParams(kappa=0.02))
        assert p1 == pytest.approx(2.0 * p2, rel=1e-14)


class TestSteadyState:
    def test_zero_pump(self):
        ss = solve_steady_state(SystemParams())
        assert ss.alpha_ss == 0.0 and ss.beta_ss == 0.0 and ss.residual == 0.0

    def test_reference_point(self):
        # Independent oracle: plain bisection on the monotone cubic.
        p = SystemParams(epsilon=360.0)
        lo, hi = 0.0, 360.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid + 5e-5 * mid**3 < 360.0:
                lo = mid
            else:
                hi = mid
        ss = solve_steady_state(p)
        assert ss.alpha_ss == pytest.approx(lo, abs=1e-10)
        assert ss.alpha_ss == pytest.approx(159.003, abs=1e-2)
        assert ss.beta_ss == pytest.approx(-126.410, abs=1e-2)
        assert ss.residual <= 1e-10

    def test_empty_cavity_limit(self):
        p = SystemParams(kappa=1e-9, epsilon=2.5)
        ss = solve_steady_state(p)
        assert ss.alpha_ss == pytest.approx(2.5, rel=1e-9)

    def test_monotone_in_pump(self):
        eps_grid = np.linspace(1.0, 550.0, 25)
        alphas = [solve_steady_state(SystemParams(epsilon=e)).alpha_ss
                  for e in eps_grid]
        assert all(a1 < a2 for a1, a2 in zip(alphas, alphas[1:]))

    @settings(max_examples=50, deadline=None)
    @given(ga=rates, gb=rates, k=st.floats(min_value=1e-3, max_value=1.0),
           frac=st.floats(min_value=0.0, max_value=0.95))
    def test_elimination_identity_and_residual(self, ga, gb, k, frac):
        p = SystemParams(gamma_a=ga, gamma_b=gb, kappa=k,
                         epsilon=frac * critical_pump(
                             SystemParams(gamma_a=ga, gamma_b=gb, kappa=k)))
        ss = solve_steady_state(p)
        assert ss.alpha_ss >= 0.0
        assert ss.beta_ss == pytest.approx(
            -p.kappa / (2 * p.gamma_b) * ss.alpha_ss**2, rel=1e-12, abs=1e-300)
        assert ss.beta_ss <= 0.0
        assert steady_state_residual(p, ss) <= 1e-12 * max(1.0, p.epsilon)

    def test_scaling_covariance(self):
        s = 3.0
        p = SystemParams(gamma_a=1.0, gamma_b=0.5, kappa=0.01, epsilon=100.0)
        scaled = SystemParams(gamma_a=s * p.gamma_a, gamma_b=s * p.gamma_b,
                              kappa=p.kappa, epsilon=s * p.epsilon)
        ss = solve_steady_state(scaled)
        assert steady_state_residual(scaled, ss) <= 1e-12 * max(1.0, scaled.epsilon)


class TestResidual:
    def test_at_origin(self):
        p = SystemParams(epsilon=360.0)
        assert steady_state_residual(
            p, SteadyState(alpha_ss=0.0, beta_ss=0.0, residual=0.0)) == 360.0

    def test_first_order_growth(self):
        p = SystemParams(epsilon=360.0)
        ss = solve_steady_state(p)
        delta = 1e-6
        slope = p.gamma_a + 3 * p.kappa**2 * ss.alpha_ss**2 / (2 * p.gamma_b)
        perturbed = SteadyState(alpha_ss=ss.alpha_ss + delta,
                                beta_ss=ss.beta_ss, residual=0.0)
        assert steady_state_residual(p, perturbed) == pytest.approx(
            slope * delta, rel=1e-4)
