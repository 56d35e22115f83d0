"""Linearized fluctuation analysis around the classical steady state.

Writing each phase-space variable as its steady-state value plus a
fluctuation, delta_x = (d_alpha, d_alpha+, d_beta, d_beta+), the dynamics
below threshold reduce to an Ornstein-Uhlenbeck process

    d(delta_x)/dt = -A . delta_x + B . dW,      D = B B^T,

with constant drift A and diffusion D evaluated at the steady state.  The
stationary spectral matrix is

    S(w) = (A + i w I)^-1  D  (A^T - i w I)^-1,

which integrates to the Lyapunov covariance, (1/2pi) Int S dw = C with
A C + C A^T = D.

Measured homodyne spectra live in the quadrature basis
(X_a, Y_a, X_b, Y_b) with X = a + a+ and Y = -i(a - a+).  Because the
phase-space moments here are normally ordered, the quadrature-basis
spectrum picks up the vacuum floor and the cavity out-coupling rates:

    v(w) = I + 2 G^(1/2) Re[sym(Q S(w) Q^T)] G^(1/2),

G = diag(gamma_a, gamma_a, gamma_b, gamma_b).  The transform uses the
plain transpose of Q: the quadrature rows already carry the correct
coefficients for both phase-space columns, and conjugating them would
flip the sign of the Y-sector noise contribution, producing negative
spectral variances.  With the transpose, every diagonal entry is a
physical spectrum and v[X]*v[Y] >= 1 holds at all frequencies.

The diffusion matrix is negative (normal ordering), so squeezing shows up
as diagonal entries below 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, NumericalError, ParameterError, RegimeError
from .model import SteadyState, SystemParams, steady_state_residual

# Basis indices in phase space and in the quadrature basis.
ALPHA, ALPHA_DAG, BETA, BETA_DAG = range(4)
XA, YA, XB, YB = range(4)

# Map from (d_alpha, d_alpha+, d_beta, d_beta+) to (X_a, Y_a, X_b, Y_b).
QUADRATURE_MAP = np.array([
    [1.0, 1.0, 0.0, 0.0],
    [-1.0j, 1.0j, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0],
    [0.0, 0.0, -1.0j, 1.0j],
])

_IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class FluctuationSystem:
    """Drift and diffusion of the linearized process at one operating point."""

    drift: np.ndarray
    diffusion: np.ndarray
    params: SystemParams
    ss: SteadyState


@dataclass(frozen=True)
class SpectralMatrix:
    """Intracavity spectral matrix S(w) in the phase-space basis."""

    omega: float
    values: np.ndarray


@dataclass(frozen=True)
class OutputSpectra:
    """Real symmetric 4x4 output quadrature spectral matrix, vacuum = identity."""

    omega: float
    values: np.ndarray


def build_fluctuation_system(params: SystemParams, ss: SteadyState,
                             residual_tol: float | None = None) -> FluctuationSystem:
    """Assemble A and D from the steady state.

    Rejects a steady state whose residual exceeds ``residual_tol``
    (default 1e-10 * max(1, epsilon)).
    """
    if residual_tol is None:
        residual_tol = 1e-10 * max(1.0, params.epsilon)
    res = steady_state_residual(params, ss)
    if res > residual_tol:
        raise ParameterError(
            f"steady state residual {res:.3e} exceeds tolerance {residual_tol:.3e}")

    ga, gb, k = params.gamma_a, params.gamma_b, params.kappa
    a, b = ss.alpha_ss, ss.beta_ss
    drift = np.zeros((4, 4))
    drift[ALPHA, ALPHA] = drift[ALPHA_DAG, ALPHA_DAG] = ga
    drift[BETA, BETA] = drift[BETA_DAG, BETA_DAG] = gb
    drift[ALPHA, ALPHA_DAG] = drift[ALPHA_DAG, ALPHA] = -k * b
    drift[ALPHA, BETA] = drift[ALPHA_DAG, BETA_DAG] = -k * a
    drift[BETA, ALPHA] = drift[BETA_DAG, ALPHA_DAG] = k * a
    diffusion = np.diag([k * b, k * b, 0.0, 0.0])
    drift.setflags(write=False)
    diffusion.setflags(write=False)
    return FluctuationSystem(drift=drift, diffusion=diffusion, params=params, ss=ss)


def stability_eigenvalues(sys: FluctuationSystem):
    """Eigenvalues of A and the stability flag (all real parts positive)."""
    try:
        eigvals = np.linalg.eigvals(sys.drift)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed for drift matrix:\n{sys.drift}") from exc
    return eigvals, bool(eigvals.real.min() > 0.0)


def _require_stable(sys: FluctuationSystem):
    eigvals, stable = stability_eigenvalues(sys)
    if not stable:
        raise RegimeError(
            "operating point is not below the self-pulsing threshold "
            f"(min Re eigenvalue = {eigvals.real.min():.6g})")


def intracavity_spectra(sys: FluctuationSystem, omegas) -> np.ndarray:
    """Batched S(w) for an array of frequencies, shape (n, 4, 4) complex.

    Evaluated with two linear solves per frequency, never an explicit
    inverse.
    """
    _require_stable(sys)
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    A = sys.drift
    D = sys.diffusion
    eye = np.eye(4)
    lhs = A[None, :, :] + 1j * omegas[:, None, None] * eye
    try:
        half = np.linalg.solve(lhs, np.broadcast_to(D + 0j, (len(omegas), 4, 4)))
        # Right-solve against (A^T - i w): transpose, solve, transpose back.
        rhs = np.transpose(half, (0, 2, 1))
        full = np.linalg.solve(A[None, :, :] - 1j * omegas[:, None, None] * eye, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular spectral system matrix") from exc
    return np.transpose(full, (0, 2, 1))


def intracavity_spectrum(sys: FluctuationSystem, omega: float) -> SpectralMatrix:
    """Intracavity spectral matrix at one frequency."""
    values = intracavity_spectra(sys, [omega])[0]
    values.setflags(write=False)
    return SpectralMatrix(omega=float(omega), values=values)


def lyapunov_covariance(sys: FluctuationSystem) -> np.ndarray:
    """Stationary covariance C solving A C + C A^T = D.

    Solved as the vectorized 16x16 linear system
    (A (x) I + I (x) A) vec(C) = vec(D).
    """
    A = sys.drift
    eye = np.eye(4)
    kron = np.kron(A, eye) + np.kron(eye, A)
    try:
        vec = np.linalg.solve(kron, sys.diffusion.flatten())
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular Lyapunov system (marginally stable drift)") from exc
    return vec.reshape(4, 4)


def spectral_integral(sys: FluctuationSystem, omega_max: float = 200.0) -> np.ndarray:
    """(1/2pi) Int S(w) dw, adaptive quadrature on [-omega_max, omega_max].

    The truncated Lorentzian tails fall off as D/w^2; their closed-form
    integral D/(pi*omega_max) is added so the result matches the Lyapunov
    covariance to well below 1e-3 relative.
    """
    from scipy.integrate import quad

    _require_stable(sys)

    def entry(i, j):
        def f(w):
            return intracavity_spectra(sys, [w])[0, i, j].real
        val, _ = quad(f, -omega_max, omega_max, limit=400)
        return val

    out = np.array([[entry(i, j) for j in range(4)] for i in range(4)]) / (2.0 * np.pi)
    return out + sys.diffusion / (np.pi * omega_max)


def output_spectra_values(sys: FluctuationSystem, spectra: np.ndarray) -> np.ndarray:
    """Quadrature-basis output transform for a batch of S(w), shape (n, 4, 4)."""
    ga, gb = sys.params.gamma_a, sys.params.gamma_b
    sqrt_g = np.sqrt(np.diag([ga, ga, gb, gb]))
    m = QUADRATURE_MAP[None] @ spectra @ QUADRATURE_MAP.T[None]
    m = (m + np.transpose(m, (0, 2, 1))) / 2.0
    scale = max(np.abs(m.real).max(), 1.0)
    if np.abs(m.imag).max() > _IMAG_RESIDUE_TOL * scale:
        raise ConsistencyError(
            f"imaginary residue {np.abs(m.imag).max():.3e} exceeds "
            f"{_IMAG_RESIDUE_TOL:g} relative")
    return np.eye(4)[None] + 2.0 * sqrt_g[None] @ m.real @ sqrt_g[None]


def output_quadrature_spectra(sys: FluctuationSystem, s: SpectralMatrix) -> OutputSpectra:
    """Measured output quadrature spectra at the frequency of ``s``."""
    values = output_spectra_values(sys, s.values[None])[0]
    values.setflags(write=False)
    return OutputSpectra(omega=s.omega, values=values)
