"""Nonlinear stochastic phase-space integration as an independent oracle.

The doubled phase-space variables (alpha, alpha+, beta, beta+) obey

    d(alpha)/dt  = eps - gamma_a*alpha  + kappa*alpha_dag*beta  + sqrt(kappa*beta)     * eta_1
    d(alpha+)/dt = eps - gamma_a*alpha+ + kappa*alpha*beta_dag  + sqrt(kappa*beta_dag) * eta_2
    d(beta)/dt   = -gamma_b*beta  - (kappa/2)*alpha**2
    d(beta+)/dt  = -gamma_b*beta+ - (kappa/2)*alpha_dag**2

with independent real white noises eta_1, eta_2 of unit spectral density.
The noise amplitudes use the principal complex square root; since beta is
negative real at the operating point, they are predominantly imaginary.
alpha+ is conjugate to alpha only in the ensemble mean.

Integration uses a fixed-step semi-implicit midpoint scheme (three
fixed-point iterations per step), which is far more stable than explicit
Euler for these equations.  Trajectories whose fields exceed a divergence
radius are discarded; their statistics never enter the reported moments.
Results are bitwise deterministic for a given seed: each trajectory draws
from its own counter-seeded substream and reductions run in trajectory
order.

Fluctuation moments and spectra are measured around the deterministic
steady state, so they are directly comparable with the stationary
covariance and the analytic spectral matrix from the linearized analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError, RegimeError
from .linear import build_fluctuation_system, stability_eigenvalues
from .model import SystemParams, solve_steady_state


@dataclass(frozen=True)
class IntegrationConfig:
    """Budget and reproducibility knobs for the ensemble integration.

    Times are in units of 1/gamma_a.  ``sample_stride`` sets how many
    steps pass between moment/spectrum samples inside the sampling
    window.
    """

    dt: float = 1e-3
    t_transient: float = 20.0
    t_sample: float = 200.0
    n_trajectories: int = 10_000
    seed: int = 0
    divergence_radius: float = 1e6
    sample_stride: int = 50

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError(f"dt must be a finite positive number, got {self.dt!r}")
        if not self.t_sample > 0:
            raise ParameterError(f"t_sample must be > 0, got {self.t_sample!r}")
        if self.t_transient < 0:
            raise ParameterError(f"t_transient must be >= 0, got {self.t_transient!r}")
        if not (isinstance(self.n_trajectories, int) and self.n_trajectories > 0):
            raise ParameterError(
                f"n_trajectories must be a positive integer, got {self.n_trajectories!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not self.divergence_radius > 0:
            raise ParameterError(
                f"divergence_radius must be > 0, got {self.divergence_radius!r}")
        if not (isinstance(self.sample_stride, int) and self.sample_stride > 0):
            raise ParameterError(
                f"sample_stride must be a positive integer, got {self.sample_stride!r}")


@dataclass(frozen=True)
class EnsembleStats:
    """Time-and-ensemble averaged moments of the surviving trajectories.

    ``covariance`` holds fluctuation moments <d_i d_j> around the
    deterministic steady state in the (d_alpha, d_alpha+, d_beta,
    d_beta+) basis; ``standard_errors`` are the matching across-trajectory
    standard errors.  ``mean_standard_errors`` are the standard errors of
    the four field means (modulus of the complex per-trajectory spread).
    """

    mean_alpha: complex
    mean_alpha_dag: complex
    mean_beta: complex
    mean_beta_dag: complex
    mean_standard_errors: np.ndarray
    covariance: np.ndarray
    standard_errors: np.ndarray
    n_kept: int
    n_discarded: int


@dataclass(frozen=True)
class SpectrumEstimate:
    """Finite-window estimates of the spectral matrix at selected frequencies."""

    omegas: np.ndarray
    values: np.ndarray
    standard_errors: np.ndarray
    n_kept: int
    n_discarded: int


_MAX_DISCARD_FRACTION = 0.05
_NOISE_BLOCK_STEPS = 256


def _validate_run(params: SystemParams, cfg: IntegrationConfig):
    max_rate = max(params.gamma_a, params.gamma_b)
    if cfg.dt > 0.01 / max_rate:
        raise ParameterError(
            f"dt={cfg.dt:g} too coarse for max rate {max_rate:g} "
            f"(require dt <= {0.01 / max_rate:g})")
    ss = solve_steady_state(params)
    if cfg.divergence_radius <= 10.0 * abs(ss.alpha_ss):
        raise ParameterError(
            f"divergence_radius={cfg.divergence_radius:g} must exceed "
            f"10*|alpha_ss|={10.0 * abs(ss.alpha_ss):g}")
    return ss


def _drift(z: np.ndarray, params: SystemParams, out: np.ndarray) -> np.ndarray:
    ga, gb, k, eps = params.gamma_a, params.gamma_b, params.kappa, params.epsilon
    a, ad, b, bd = z[:, 0], z[:, 1], z[:, 2], z[:, 3]
    out[:, 0] = eps - ga * a + k * ad * b
    out[:, 1] = eps - ga * ad + k * a * bd
    out[:, 2] = -gb * b - 0.5 * k * a * a
    out[:, 3] = -gb * bd - 0.5 * k * ad * ad
    return out


def _lag_window_spectra(series: np.ndarray, dt_spec: float, omegas: np.ndarray,
                        n_lags: int) -> np.ndarray:
    """Per-trajectory spectral matrices from a lag-window estimator.

    For each trajectory the two-time covariance C_ij(l*dt) is estimated
    at every lag l in [0, n_lags] from the stored fluctuation series
    (unbiased: each lag divides by its own sample count), then Fourier
    transformed:

        S_ij(w) = dt * sum_l C_ij(l) e^{i w l dt} + C_ji(l) e^{-i w l dt}

    with the l=0 term counted once.  Unlike a raw periodogram this has no
    O(correlation_time / window) bias, only the exponentially small lag
    truncation.  Returns the real parts, shape (m, n_omegas, 4, 4).
    """
    m, n_samples, _ = series.shape
    if n_lags >= n_samples:
        raise ParameterError("lag cutoff exceeds the stored series length")
    size = 1
    while size < n_samples + n_lags + 1:
        size *= 2
    fwd = np.fft.fft(series, n=size, axis=1)
    rev = np.conj(np.fft.fft(np.conj(series), n=size, axis=1))
    counts = (n_samples - np.arange(n_lags + 1)).astype(np.float64)
    lags = dt_spec * np.arange(n_lags + 1)
    phase_pos = np.exp(1j * np.outer(omegas, lags))
    phase_neg = np.conj(phase_pos)
    phase_pos[:, 0] *= 0.5
    phase_neg[:, 0] *= 0.5

    out = np.zeros((m, len(omegas), 4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            corr = np.fft.ifft(rev[:, :, i] * fwd[:, :, j], axis=1)[:, :n_lags + 1]
            cov = corr.astype(complex) / counts
            out[:, :, i, j] += dt_spec * (cov @ phase_pos.T)
            out[:, :, j, i] += dt_spec * (cov @ phase_neg.T)
    return out.real


def _simulate(params: SystemParams, cfg: IntegrationConfig, omegas=None):
    """Shared integration core for ensemble moments and spectrum estimates."""
    ss = _validate_run(params, cfg)
    z_ss = np.array([ss.alpha_ss, ss.alpha_ss, ss.beta_ss, ss.beta_ss],
                    dtype=complex)

    n = cfg.n_trajectories
    dt = cfg.dt
    sqrt_dt = math.sqrt(dt)
    k = params.kappa
    n_transient = int(round(cfg.t_transient / dt))
    n_sampling = int(round(cfg.t_sample / dt))
    total_steps = n_transient + n_sampling
    stride = cfg.sample_stride
    dt_sample = stride * dt

    want_spectrum = omegas is not None
    if want_spectrum:
        omegas = np.asarray(omegas, dtype=float)
        sys_lin = build_fluctuation_system(params, ss)
        eigvals, stable = stability_eigenvalues(sys_lin)
        if not stable:
            raise RegimeError("spectrum estimation requires a stable operating point")
        t_corr = 1.0 / eigvals.real.min()

    # Per-trajectory substreams: counter-based, independent of execution
    # order and worker count.
    gens = [np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(i,))))
        for i in range(n)]

    z = np.tile(z_ss, (n, 1))
    alive = np.ones(n, dtype=bool)

    # Per-trajectory accumulators over the sampling window.
    n_samples = 0
    sum_z = np.zeros((n, 4), dtype=complex)
    sum_outer = np.zeros((n, 4, 4), dtype=complex)
    if want_spectrum:
        # Fluctuation series for the lag-window spectral estimator, kept
        # at half the moment-sampling rate (single precision suffices for
        # the ensemble statistics and halves the footprint).
        spec_every = 2
        n_spec = int(round(cfg.t_sample / dt)) // (stride * spec_every)
        series = np.zeros((n, n_spec, 4), dtype=np.complex64)
        spec_count = 0

    drift_buf = np.empty((n, 4), dtype=complex)
    mid = np.empty_like(z)
    amp = np.empty((n, 2), dtype=complex)

    step = 0
    while step < total_steps:
        block = min(_NOISE_BLOCK_STEPS, total_steps - step)
        noise = np.empty((n, block, 2))
        for i, g in enumerate(gens):
            noise[i] = g.standard_normal((block, 2))
        for j in range(block):
            dw = noise[:, j, :] * sqrt_dt
            mid[...] = z
            for _ in range(3):
                _drift(mid, params, drift_buf)
                amp[:, 0] = np.sqrt(k * mid[:, 2].astype(complex))
                amp[:, 1] = np.sqrt(k * mid[:, 3].astype(complex))
                mid[...] = z + 0.5 * dt * drift_buf
                mid[:, :2] += 0.5 * amp * dw
            z[...] = 2.0 * mid - z
            step += 1
            if step > n_transient and (step - n_transient) % stride == 0:
                delta = z - z_ss
                sum_z += delta
                sum_outer += np.einsum('ni,nj->nij', delta, delta)
                n_samples += 1
                if want_spectrum and n_samples % spec_every == 0 \
                        and spec_count < n_spec:
                    series[:, spec_count, :] = delta
                    spec_count += 1
        # Divergence screening once per block: escaped trajectories are
        # parked at the steady state and excluded from every reduction.
        escaped = alive & (np.abs(z).max(axis=1) > cfg.divergence_radius)
        escaped |= alive & ~np.isfinite(z).all(axis=1)
        if escaped.any():
            alive &= ~escaped
            z[escaped] = z_ss

    n_kept = int(alive.sum())
    n_discarded = n - n_kept
    fraction = n_discarded / n

    kept = np.flatnonzero(alive)
    if n_kept == 0:
        raise DivergenceError("every trajectory diverged", partial=None,
                              fraction=fraction)

    # Absolute means from the fluctuation means plus the steady state.
    traj_mean = sum_z[kept] / n_samples + z_ss
    means = traj_mean.mean(axis=0)
    if n_kept > 1:
        # Complex scatter: Var(Re) + Var(Im) per field, so |mean - target|
        # is directly comparable with mean_se.
        dev = traj_mean - means
        mean_se = np.sqrt((np.abs(dev) ** 2).sum(axis=0)
                          / (n_kept - 1)) / math.sqrt(n_kept)
    else:
        mean_se = np.full(4, np.inf)

    traj_cov = sum_outer[kept].real / n_samples
    covariance = traj_cov.mean(axis=0)
    cov_se = traj_cov.std(axis=0, ddof=1) / math.sqrt(n_kept) \
        if n_kept > 1 else np.full((4, 4), np.inf)

    stats = EnsembleStats(
        mean_alpha=complex(means[0]), mean_alpha_dag=complex(means[1]),
        mean_beta=complex(means[2]), mean_beta_dag=complex(means[3]),
        mean_standard_errors=mean_se, covariance=covariance,
        standard_errors=cov_se, n_kept=n_kept, n_discarded=n_discarded)

    spectrum = None
    if want_spectrum:
        dt_spec = spec_every * dt_sample
        # Lag cutoff: ten correlation times kills the truncation bias
        # (exp(-10) relative) while keeping the estimator variance low.
        lag_time = min(10.0 * t_corr, cfg.t_sample / 5.0)
        n_lags = max(1, int(round(lag_time / dt_spec)))
        traj_s = np.empty((n_kept, len(omegas), 4, 4))
        chunk = 256
        for start in range(0, n_kept, chunk):
            idx = kept[start:start + chunk]
            traj_s[start:start + len(idx)] = _lag_window_spectra(
                series[idx, :spec_count], dt_spec, omegas, n_lags)
        values = traj_s.mean(axis=0)
        spec_se = traj_s.std(axis=0, ddof=1) / math.sqrt(n_kept) \
            if n_kept > 1 else np.full_like(values, np.inf)
        spectrum = SpectrumEstimate(omegas=omegas, values=values,
                                    standard_errors=spec_se,
                                    n_kept=n_kept, n_discarded=n_discarded)

    if fraction > _MAX_DISCARD_FRACTION:
        raise DivergenceError(
            f"{n_discarded}/{n} trajectories diverged "
            f"({100 * fraction:.1f}% > {100 * _MAX_DISCARD_FRACTION:.0f}%)",
            partial=stats, fraction=fraction)

    return stats, spectrum


def integrate_ensemble(params: SystemParams, cfg: IntegrationConfig) -> EnsembleStats:
    """Ensemble means and fluctuation covariance over the sampling window."""
    stats, _ = _simulate(params, cfg, omegas=None)
    return stats


def stochastic_spectrum(params: SystemParams, cfg: IntegrationConfig,
                        omegas) -> SpectrumEstimate:
    """Finite-window spectral-matrix estimate at the requested frequencies.

    Requires a stable operating point and a sampling window of at least
    50 correlation times (the inverse of the slowest decay rate).
    """
    ss = solve_steady_state(params)
    sys = build_fluctuation_system(params, ss)
    eigvals, stable = stability_eigenvalues(sys)
    if not stable:
        raise RegimeError("stochastic spectrum requires a stable operating point")
    t_corr = 1.0 / eigvals.real.min()
    if cfg.t_sample < 50.0 * t_corr:
        raise ParameterError(
            f"t_sample={cfg.t_sample:g} shorter than 50 correlation times "
            f"({50.0 * t_corr:g})")
    _, spectrum = _simulate(params, cfg, omegas=omegas)
    return spectrum
