"""Diagnostics: modified frequencies and masses, linear stability, energy errors.

The stability tools build one-step propagation matrices by applying the
actual steppers to basis states, so they exercise production code rather
than re-derived formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import spectral_radius_2x2, sym_matrix
from .steppers import BLOWUP, Trajectory, step_imex, step_respa
from .systems import State, coupled_oscillator_build

ENERGY_ERROR_CAP = 1e12
STABILITY_TOL = 1e-12


class DegenerateInput(ValueError):
    """Input leaves the requested quantity undefined."""


def modified_frequency(h: float, omega: float) -> float:
    """Frequency w~ with tan(w~*h/2) = omega*h/2, in [0, pi/h).

    Evaluated as 2*atan(omega*h/2)/h, which stays accurate for large
    omega*h; the equivalent arccos form loses digits there.
    """
    if not h > 0.0:
        raise ValueError("h must be positive")
    if omega < 0.0:
        raise ValueError("omega must be nonnegative")
    return 2.0 * math.atan(0.5 * h * omega) / h


def modified_mass(h: float, omega2) -> np.ndarray:
    """M~ = I + (h^2/4) Omega^2, the mass that makes the endpoint-quadrature
    step reproduce the midpoint treatment of the fast force."""
    omega2 = sym_matrix(omega2)
    return np.eye(omega2.shape[0]) + 0.25 * h * h * omega2


def propagation_matrix(step: Callable[[State], State]) -> np.ndarray:
    """2x2 one-step matrix of a linear scalar stepper, from its action on basis states."""
    e1 = step(State(0.0, [1.0], [0.0]))
    e2 = step(State(0.0, [0.0], [1.0]))
    return np.array([[e1.q[0], e2.q[0]], [e1.p[0], e2.p[0]]])


def imex_propagation_matrix(h: float, omega: float) -> np.ndarray:
    """One-step matrix of the IMEX splitting on the scalar model problem."""
    sys = coupled_oscillator_build(omega)
    return propagation_matrix(lambda s: step_imex(sys, s, h))


def respa_propagation_matrix(h: float, omega: float, substeps: int) -> np.ndarray:
    """One-step matrix of the impulse method on the scalar model problem."""
    sys = coupled_oscillator_build(omega)
    return propagation_matrix(lambda s: step_respa(sys, s, h, substeps))


@dataclass(frozen=True)
class StabilityReport:
    method: str
    h: float
    omega: float
    spectral_radius: float
    stable: bool


def imex_stability(h: float, omega: float) -> StabilityReport:
    """Linear stability of the IMEX step on the model problem; stable means
    spectral radius <= 1 + STABILITY_TOL."""
    rho = spectral_radius_2x2(imex_propagation_matrix(h, omega))
    return StabilityReport("imex", h, omega, rho, rho <= 1.0 + STABILITY_TOL)


def max_energy_error(traj: Trajectory, energy_fn: Callable | None = None) -> float:
    """Largest |H - H0| over the recorded samples, capped at ENERGY_ERROR_CAP.

    A blown-up run reports the cap.  energy_fn(q, p) overrides the stored
    per-sample energies when given.
    """
    if traj.status == BLOWUP:
        return ENERGY_ERROR_CAP
    if energy_fn is None:
        energies = traj.energies
    else:
        energies = np.array([energy_fn(traj.qs[i], traj.ps[i]) for i in range(len(traj.times))])
    err = float(np.max(np.abs(energies - energies[0])))
    if not math.isfinite(err):
        return ENERGY_ERROR_CAP
    return min(err, ENERGY_ERROR_CAP)


def windowed_mean(times, values, window: float) -> np.ndarray:
    """Mean over a centered window [t - w/2, t + w/2], truncated at the ends.

    Returns the averaged values at the input times.  Windows narrower than
    the sample spacing reduce to the identity.
    """
    if not window > 0.0:
        raise ValueError("window must be positive")
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != v.shape:
        raise ValueError("times and values must be equal-length vectors")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("times must be strictly increasing")
    lo = np.searchsorted(t, t - 0.5 * window, side="left")
    hi = np.searchsorted(t, t + 0.5 * window, side="right")
    csum = np.concatenate([[0.0], np.cumsum(v)])
    return (csum[hi] - csum[lo]) / (hi - lo)


def convergence_order(errors: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log error against log step size."""
    if len(errors) < 2:
        raise ValueError("need at least two (h, error) pairs")
    h = np.array([e[0] for e in errors], dtype=float)
    err = np.array([e[1] for e in errors], dtype=float)
    if np.any(~np.isfinite(err)) or np.any(err <= 0.0):
        raise DegenerateInput("errors must be finite and positive")
    slope, _ = np.polyfit(np.log(h), np.log(err), 1)
    return float(slope)
