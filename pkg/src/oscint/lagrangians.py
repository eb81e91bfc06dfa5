"""Discrete Lagrangians on position pairs and their exact partial derivatives.

Three quadrature choices for the potential term share the same kinetic term
(h/2) v' M v with v = (q1 - q0)/h:

  TRAPEZOIDAL  endpoint average of the full potential (slow + fast),
  MIDPOINT     full potential at the interval midpoint,
  IMEX         endpoint average of the slow potential, midpoint fast term.

The discrete Euler-Lagrange residual and the two discrete Legendre
transforms are assembled from the analytic partials.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import spd_factor, sym_matrix
from .systems import OscillatorySystem


class Quadrature(enum.Enum):
    TRAPEZOIDAL = "trapezoidal"
    MIDPOINT = "midpoint"
    IMEX = "imex"


@dataclass(frozen=True, eq=False)
class DiscreteLagrangian:
    """A quadrature variant bound to a system, step size and mass matrix.

    mass=None means the identity; a symmetric positive definite override is
    accepted (checked once here via a factorization probe).
    """

    system: OscillatorySystem
    h: float
    variant: Quadrature
    mass: np.ndarray | None = None

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("h must be positive")
        if self.mass is not None:
            mass = sym_matrix(self.mass)
            if mass.shape != (self.system.d, self.system.d):
                raise ValueError("mass shape does not match the system")
            spd_factor(mass)
            object.__setattr__(self, "mass", mass)


def _mass_apply(ld: DiscreteLagrangian, v: np.ndarray) -> np.ndarray:
    if ld.mass is None:
        return v
    return ld.mass @ v


def _grad_slow(sys: OscillatorySystem, q: np.ndarray) -> np.ndarray:
    return -np.asarray(sys.slow_force(q), dtype=float)


def ld_value(ld: DiscreteLagrangian, q0, q1) -> float:
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    h, sys = ld.h, ld.system
    v = (q1 - q0) / h
    kinetic = 0.5 * h * float(v @ _mass_apply(ld, v))
    mid = 0.5 * (q0 + q1)
    if ld.variant is Quadrature.TRAPEZOIDAL:
        pot = 0.5 * h * (
            sys.slow_potential(q0) + sys.fast_potential(q0)
            + sys.slow_potential(q1) + sys.fast_potential(q1)
        )
    elif ld.variant is Quadrature.MIDPOINT:
        pot = h * (sys.slow_potential(mid) + sys.fast_potential(mid))
    else:
        pot = 0.5 * h * (sys.slow_potential(q0) + sys.slow_potential(q1))
        pot += h * sys.fast_potential(mid)
    return kinetic - pot


def ld_d1(ld: DiscreteLagrangian, q0, q1) -> np.ndarray:
    """Exact gradient of ld_value with respect to the first endpoint."""
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    h, sys = ld.h, ld.system
    mv = _mass_apply(ld, (q1 - q0) / h)
    mid = 0.5 * (q0 + q1)
    if ld.variant is Quadrature.TRAPEZOIDAL:
        grad = _grad_slow(sys, q0) + sys.omega2 @ q0
    elif ld.variant is Quadrature.MIDPOINT:
        grad = _grad_slow(sys, mid) + sys.omega2 @ mid
    else:
        grad = _grad_slow(sys, q0) + sys.omega2 @ mid
    return -mv - 0.5 * h * grad


def ld_d2(ld: DiscreteLagrangian, q0, q1) -> np.ndarray:
    """Exact gradient of ld_value with respect to the second endpoint."""
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    h, sys = ld.h, ld.system
    mv = _mass_apply(ld, (q1 - q0) / h)
    mid = 0.5 * (q0 + q1)
    if ld.variant is Quadrature.TRAPEZOIDAL:
        grad = _grad_slow(sys, q1) + sys.omega2 @ q1
    elif ld.variant is Quadrature.MIDPOINT:
        grad = _grad_slow(sys, mid) + sys.omega2 @ mid
    else:
        grad = _grad_slow(sys, q1) + sys.omega2 @ mid
    return mv - 0.5 * h * grad


def del_residual(ld: DiscreteLagrangian, q_prev, q, q_next) -> np.ndarray:
    """Discrete Euler-Lagrange residual D1(q, q_next) + D2(q_prev, q)."""
    return ld_d1(ld, q, q_next) + ld_d2(ld, q_prev, q)


def legendre_minus(ld: DiscreteLagrangian, q0, q1) -> np.ndarray:
    """Momentum at the left endpoint: p0 = -D1(q0, q1)."""
    return -ld_d1(ld, q0, q1)


def legendre_plus(ld: DiscreteLagrangian, q0, q1) -> np.ndarray:
    """Momentum at the right endpoint: p1 = D2(q0, q1)."""
    return ld_d2(ld, q0, q1)
