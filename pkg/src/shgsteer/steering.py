"""Directional Gaussian steering from output quadrature spectra.

For a pair of modes a (fundamental) and b (harmonic), measuring one mode
lets an observer infer the quadratures of the other.  The optimal Gaussian
inference leaves the conditional variance

    vinf(X_b) = v[X_b] - v[X_a, X_b]^2 / v[X_a]

and analogously for Y and for inference in the opposite direction.  A mode
is steerable when the product of its two inferred variances drops below
the vacuum limit:

    epr_b_given_a = vinf(X_b) * vinf(Y_b) < 1   (b steered by measuring a)
    epr_a_given_b = vinf(X_a) * vinf(Y_a) < 1   (a steered by measuring b)

Both thresholds are strict; equality counts as no steering.  Everything
here operates frequency-by-frequency on spectral (co)variances, so the
scan types carry one classification per analysis frequency.

A structural note on the model behind these spectra: the linearized
output state of this two-mode system is exactly pure at every frequency
(its symplectic eigenvalues are 1), because the output transform is a
frequency-wise Bogoliubov map of the vacuum.  For a pure two-mode
Gaussian state the two reduced determinants coincide, which forces
epr_b_given_a == epr_a_given_b identically.  The classification therefore
lands on Symmetric or NoSteering up to round-off; the asymmetric labels
are kept for completeness and for use on externally supplied spectra.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ParameterError, RegimeError, ShgSteerError
from .linear import (
    XA, XB, YA, YB,
    OutputSpectra,
    build_fluctuation_system,
    intracavity_spectra,
    output_spectra_values,
)
from .model import SystemParams, critical_pump, solve_steady_state

DEFAULT_OMEGAS = np.linspace(-20.0, 20.0, 1001)
DEFAULT_GAMMA_RATIOS = np.round(np.arange(1, 41) * 0.05, 10)
DEFAULT_PUMP_FRACTIONS = np.round(np.arange(1, 20) * 0.05, 10)


class Classification(enum.Enum):
    """Which directions of steering the strict product thresholds allow."""

    NO_STEERING = "NoSteering"
    ONLY_B_STEERABLE = "OnlyBSteerable"
    ONLY_A_STEERABLE = "OnlyASteerable"
    SYMMETRIC = "Symmetric"


@dataclass(frozen=True)
class SteeringPoint:
    """Inferred variances, directed products and classification at one frequency."""

    omega: float
    vinf_xa: float
    vinf_ya: float
    vinf_xb: float
    vinf_yb: float
    epr_b_given_a: float
    epr_a_given_b: float
    classification: Classification


@dataclass(frozen=True)
class SteeringScan:
    """Frequency-resolved steering analysis at a fixed operating point."""

    params: SystemParams
    omegas: np.ndarray
    points: list[SteeringPoint]

    @property
    def min_epr_b_given_a(self) -> float:
        return min(p.epr_b_given_a for p in self.points)

    @property
    def min_epr_a_given_b(self) -> float:
        return min(p.epr_a_given_b for p in self.points)


@dataclass(frozen=True)
class AsymmetryCell:
    """One cell of the parameter-plane map.

    ``indicator`` is 1 when some scanned frequency classifies Symmetric,
    0 when none does, and -1 when the cell's computation failed (the
    reason is then kept in ``error``).
    """

    gamma_ratio: float
    pump_fraction: float
    indicator: int
    min_epr_b_given_a: float = field(default=float("nan"))
    min_epr_a_given_b: float = field(default=float("nan"))
    error: str | None = None


def inferred_variances(v: OutputSpectra) -> tuple[float, float, float, float]:
    """Conditional variances (vinf_xa, vinf_ya, vinf_xb, vinf_yb)."""
    m = v.values
    for idx in (XA, YA, XB, YB):
        if not m[idx, idx] > 0.0:
            raise NumericalError(
                f"non-positive spectral variance {m[idx, idx]!r} on the diagonal")
    vinf_xb = m[XB, XB] - m[XA, XB] ** 2 / m[XA, XA]
    vinf_yb = m[YB, YB] - m[YA, YB] ** 2 / m[YA, YA]
    vinf_xa = m[XA, XA] - m[XA, XB] ** 2 / m[XB, XB]
    vinf_ya = m[YA, YA] - m[YA, YB] ** 2 / m[YB, YB]
    return vinf_xa, vinf_ya, vinf_xb, vinf_yb


def epr_products(vinf_xa: float, vinf_ya: float,
                 vinf_xb: float, vinf_yb: float) -> tuple[float, float]:
    """(epr_b_given_a, epr_a_given_b) from the four conditional variances."""
    return vinf_xb * vinf_yb, vinf_xa * vinf_ya


def classify(epr_b_given_a: float, epr_a_given_b: float) -> Classification:
    """Strict-threshold classification; equality with 1 means no steering."""
    b = epr_b_given_a < 1.0
    a = epr_a_given_b < 1.0
    if a and b:
        return Classification.SYMMETRIC
    if b:
        return Classification.ONLY_B_STEERABLE
    if a:
        return Classification.ONLY_A_STEERABLE
    return Classification.NO_STEERING


def _point_from_values(omega: float, values: np.ndarray) -> SteeringPoint:
    vinf = inferred_variances(OutputSpectra(omega=omega, values=values))
    eb, ea = epr_products(*vinf)
    return SteeringPoint(
        omega=float(omega),
        vinf_xa=vinf[0], vinf_ya=vinf[1], vinf_xb=vinf[2], vinf_yb=vinf[3],
        epr_b_given_a=eb, epr_a_given_b=ea,
        classification=classify(eb, ea))


def output_scan_values(params: SystemParams, omegas) -> np.ndarray:
    """Batched output quadrature spectral matrices, shape (n, 4, 4)."""
    ss = solve_steady_state(params)
    sys = build_fluctuation_system(params, ss)
    return output_spectra_values(sys, intracavity_spectra(sys, omegas))


def frequency_scan(params: SystemParams, omegas=None) -> SteeringScan:
    """Steady state -> linearized spectra -> steering, over a frequency grid."""
    if omegas is None:
        omegas = DEFAULT_OMEGAS
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or len(omegas) == 0:
        raise ParameterError("omegas must be a non-empty 1-d grid")
    if np.any(np.diff(omegas) <= 0):
        raise ParameterError("omegas must be strictly increasing")
    values = output_scan_values(params, omegas)
    points = [_point_from_values(w, values[i]) for i, w in enumerate(omegas)]
    return SteeringScan(params=params, omegas=omegas, points=points)


def asymmetry_map(gamma_ratios=None, pump_fractions=None, omegas=None, *,
                  gamma_a: float = 1.0, kappa: float = 0.01) -> list[AsymmetryCell]:
    """Symmetric-steering indicator over the (gamma_b/gamma_a, pump) plane.

    Cells are evaluated independently; a failing cell is recorded with
    indicator -1 rather than aborting the map.
    """
    if gamma_ratios is None:
        gamma_ratios = DEFAULT_GAMMA_RATIOS
    if pump_fractions is None:
        pump_fractions = DEFAULT_PUMP_FRACTIONS
    if omegas is None:
        omegas = DEFAULT_OMEGAS
    gamma_ratios = np.asarray(gamma_ratios, dtype=float)
    pump_fractions = np.asarray(pump_fractions, dtype=float)
    if len(gamma_ratios) == 0 or len(pump_fractions) == 0:
        raise ParameterError("grids must be non-empty")
    if np.any(pump_fractions >= 1.0):
        raise ParameterError("pump fractions must be < 1 (below the Hopf point)")

    cells = []
    for ratio in gamma_ratios:
        for frac in pump_fractions:
            try:
                params = SystemParams(gamma_a=gamma_a, gamma_b=ratio * gamma_a,
                                      kappa=kappa,
                                      epsilon=frac * critical_pump(
                                          SystemParams(gamma_a=gamma_a,
                                                       gamma_b=ratio * gamma_a,
                                                       kappa=kappa)))
                scan = frequency_scan(params, omegas)
            except (ShgSteerError, RegimeError) as exc:
                cells.append(AsymmetryCell(
                    gamma_ratio=float(ratio), pump_fraction=float(frac),
                    indicator=-1, error=f"{type(exc).__name__}: {exc}"))
                continue
            symmetric = any(p.classification is Classification.SYMMETRIC
                            for p in scan.points)
            cells.append(AsymmetryCell(
                gamma_ratio=float(ratio), pump_fraction=float(frac),
                indicator=1 if symmetric else 0,
                min_epr_b_given_a=scan.min_epr_b_given_a,
                min_epr_a_given_b=scan.min_epr_a_given_b))
    return cells
