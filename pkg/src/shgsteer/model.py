"""Mean-field model of driven intracavity second harmonic generation.

Two cavity modes, the fundamental (loss rate gamma_a) and the harmonic
(loss rate gamma_b), are coupled by an effective chi(2) rate kappa and the
fundamental is driven by a classical pump of amplitude epsilon.  With the
noise removed, the mode amplitudes obey

    d(alpha)/dt = epsilon - gamma_a*alpha + kappa*conj_pair(alpha)*beta
    d(beta)/dt  = -gamma_b*beta - (kappa/2)*alpha**2

Eliminating beta at the fixed point gives the cubic

    epsilon = gamma_a*alpha + (kappa**2 / (2*gamma_b)) * alpha**3

whose left side is strictly increasing in alpha, so the non-negative root
is unique.  The below-threshold steady state loses stability in a Hopf
bifurcation at the critical pump

    eps_c = (1/kappa) * (gamma_b + 2*gamma_a) * sqrt(2*gamma_b*(gamma_a + gamma_b))

All rates are measured in units of gamma_a = 1 unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import ParameterError, SolverError


@dataclass(frozen=True)
class SystemParams:
    """One operating point: the four physical rates.

    The pump amplitude is taken real and non-negative (a global pump phase
    is unobservable in the reported correlations), which makes both
    steady-state amplitudes real.
    """

    gamma_a: float = 1.0
    gamma_b: float = 1.0
    kappa: float = 0.01
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("gamma_a", "gamma_b", "kappa"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a finite positive number, got {value!r}")
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon)
                and self.epsilon >= 0):
            raise ParameterError(f"epsilon must be finite and >= 0, got {self.epsilon!r}")

    @property
    def pump_fraction(self) -> float:
        """epsilon expressed as a fraction of the critical pump."""
        return self.epsilon / critical_pump(self)


@dataclass(frozen=True)
class SteadyState:
    """Classical below-threshold fixed point of the noise-free equations."""

    alpha_ss: float
    beta_ss: float
    residual: float


def critical_pump(params: SystemParams) -> float:
    """Pump amplitude at which the steady state undergoes a Hopf bifurcation."""
    ga, gb = params.gamma_a, params.gamma_b
    return (gb + 2.0 * ga) * math.sqrt(2.0 * gb * (ga + gb)) / params.kappa


def default_tolerance(params: SystemParams) -> float:
    return 1e-12 * max(1.0, params.epsilon)


def steady_state_residual(params: SystemParams, ss: SteadyState) -> float:
    """|epsilon - gamma_a*alpha - kappa^2/(2 gamma_b) * alpha^3| at the given state."""
    a = ss.alpha_ss
    cubic = params.gamma_a * a + params.kappa**2 / (2.0 * params.gamma_b) * a**3
    return abs(params.epsilon - cubic)


def solve_steady_state(params: SystemParams, tol: float | None = None) -> SteadyState:
    """Solve the steady-state cubic for the unique non-negative root.

    Bracketed root finding on [0, epsilon/gamma_a] (the cubic is increasing
    and already exceeds epsilon at the upper end), followed by a Newton
    polish.  Raises SolverError if the residual cannot be pushed below
    ``tol`` (default 1e-12 * max(1, epsilon)).
    """
    if tol is None:
        tol = default_tolerance(params)
    if tol <= 0:
        raise ParameterError(f"tol must be > 0, got {tol!r}")

    ga, gb, k, eps = params.gamma_a, params.gamma_b, params.kappa, params.epsilon
    c3 = k**2 / (2.0 * gb)

    if eps == 0.0:
        return SteadyState(alpha_ss=0.0, beta_ss=0.0, residual=0.0)

    def f(a):
        return ga * a + c3 * a**3 - eps

    alpha = brentq(f, 0.0, eps / ga, xtol=1e-15, rtol=8.881784197001252e-16)
    # Newton polish; the derivative is bounded below by gamma_a.
    for _ in range(3):
        alpha -= f(alpha) / (ga + 3.0 * c3 * alpha * alpha)
    alpha = max(alpha, 0.0)

    beta = -k / (2.0 * gb) * alpha * alpha
    ss = SteadyState(alpha_ss=alpha, beta_ss=beta, residual=abs(f(alpha)))
    if ss.residual > tol:
        raise SolverError(
            f"steady-state residual {ss.residual:.3e} exceeds tolerance {tol:.3e}",
            best=ss, residual=ss.residual)
    return ss
