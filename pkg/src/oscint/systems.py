"""Mechanical systems with a stiff quadratic force and a soft anharmonic one.

A system is the data of q'' = -Omega^2 q + g(q) with unit mass matrix: a
symmetric positive semidefinite Omega^2 driving the fast oscillation and a
slow potential U with analytic negative gradient g.  Two concrete builders
are provided: a scalar pair of superposed soft/stiff springs, and the
Fermi-Pasta-Ulam alternating spring lattice in averaged/extension
coordinates together with its energy diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import sym_matrix

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class State:
    """Phase-space point: time, positions, momenta."""

    t: float
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.atleast_1d(np.asarray(self.q, dtype=float)))
        object.__setattr__(self, "p", np.atleast_1d(np.asarray(self.p, dtype=float)))
        if self.q.ndim != 1 or self.q.shape != self.p.shape:
            raise ValueError("q and p must be vectors of equal length")


@dataclass(frozen=True, eq=False)
class OscillatorySystem:
    """System q'' + Omega^2 q = g(q) with unit mass matrix.

    slow_force must be the negative gradient of slow_potential.  omega_diag
    is set when Omega is diagonal, which unlocks the per-axis closed-form
    fast rotation; ell marks lattice systems that carry stiff-spring energy
    diagnostics.
    """

    d: int
    omega2: np.ndarray
    slow_potential: Callable[[np.ndarray], float]
    slow_force: Callable[[np.ndarray], np.ndarray]
    label: str
    omega_diag: np.ndarray | None = None
    ell: int | None = None

    def __post_init__(self):
        omega2 = sym_matrix(self.omega2)
        if omega2.shape != (self.d, self.d):
            raise ValueError(f"omega2 must be {self.d}x{self.d}")
        object.__setattr__(self, "omega2", omega2)
        if self.omega_diag is not None:
            w = np.asarray(self.omega_diag, dtype=float)
            if w.shape != (self.d,) or np.any(w < 0.0):
                raise ValueError("omega_diag must be d nonnegative frequencies")
            if not np.array_equal(omega2, np.diag(w * w)):
                raise ValueError("omega_diag inconsistent with omega2")
            object.__setattr__(self, "omega_diag", w)

    def fast_potential(self, q) -> float:
        return 0.5 * float(q @ (self.omega2 @ q))

    def total_energy(self, q, p) -> float:
        return 0.5 * float(p @ p) + self.fast_potential(q) + float(self.slow_potential(q))


@dataclass(frozen=True)
class FpuParams:
    """Lattice size (ell stiff springs, 2*ell masses) and stiff frequency."""

    ell: int
    omega: float

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")


def coupled_oscillator_build(omega: float) -> OscillatorySystem:
    """Scalar model problem: unit soft spring superposed with a stiff one.

    Total potential is q^2/2 + omega^2 q^2 / 2; omega = 0 degenerates to the
    plain unit harmonic oscillator, which is allowed for reduction checks.
    """
    omega = float(omega)
    if omega < 0.0:
        raise ValueError("omega must be nonnegative")

    def slow_potential(q):
        return 0.5 * float(q @ q)

    def slow_force(q):
        return -np.asarray(q, dtype=float)

    return OscillatorySystem(
        d=1,
        omega2=np.array([[omega * omega]]),
        slow_potential=slow_potential,
        slow_force=slow_force,
        label="model",
        omega_diag=np.array([omega]),
    )


def _fpu_slow_potential(ell: int) -> Callable[[np.ndarray], float]:
    def slow_potential(x):
        x0, x1 = x[:ell], x[ell:]
        end_l = x0[0] - x1[0]
        end_r = x0[-1] + x1[-1]
        mid = x0[1:] - x1[1:] - x0[:-1] - x1[:-1]
        return 0.25 * (end_l ** 4 + float(np.sum(mid ** 4)) + end_r ** 4)

    return slow_potential


def _fpu_slow_force(ell: int) -> Callable[[np.ndarray], np.ndarray]:
    def slow_force(x):
        x0, x1 = x[:ell], x[ell:]
        g0 = np.zeros(ell)
        g1 = np.zeros(ell)
        end_l = (x0[0] - x1[0]) ** 3
        g0[0] += end_l
        g1[0] -= end_l
        end_r = (x0[-1] + x1[-1]) ** 3
        g0[-1] += end_r
        g1[-1] += end_r
        mid = (x0[1:] - x1[1:] - x0[:-1] - x1[:-1]) ** 3
        g0[1:] += mid
        g1[1:] -= mid
        g0[:-1] -= mid
        g1[:-1] -= mid
        return -np.concatenate([g0, g1])

    return slow_force


def fpu_build(params: FpuParams) -> OscillatorySystem:
    """FPU lattice in averaged/extension coordinates.

    Positions are ordered (x_{0,1..ell}, x_{1,1..ell}): first the averaged
    (soft) block, then the extension (stiff) block, so Omega^2 is
    diag(0,...,0, omega^2,...,omega^2).
    """
    ell, omega = params.ell, float(params.omega)
    omega_diag = np.concatenate([np.zeros(ell), np.full(ell, omega)])
    return OscillatorySystem(
        d=2 * ell,
        omega2=np.diag(omega_diag * omega_diag),
        slow_potential=_fpu_slow_potential(ell),
        slow_force=_fpu_slow_force(ell),
        label="fpu",
        omega_diag=omega_diag,
        ell=ell,
    )


def fpu_transform(q, p) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal change from per-mass coordinates to averaged/extension ones.

    x_{0,i} = (q_{2i} + q_{2i-1}) / sqrt(2), x_{1,i} = (q_{2i} - q_{2i-1}) / sqrt(2)
    (1-based mass indices), and identically for momenta.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.ndim != 1 or q.shape != p.shape or q.size % 2:
        raise ValueError("expected equal-length even-dimensional q and p")
    even, odd = q[0::2], q[1::2]
    x = np.concatenate([(odd + even) / _SQRT2, (odd - even) / _SQRT2])
    even, odd = p[0::2], p[1::2]
    y = np.concatenate([(odd + even) / _SQRT2, (odd - even) / _SQRT2])
    return x, y


def fpu_inverse_transform(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of fpu_transform."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size % 2:
        raise ValueError("expected equal-length even-dimensional x and y")
    ell = x.size // 2
    q = np.empty(2 * ell)
    q[0::2] = (x[:ell] - x[ell:]) / _SQRT2
    q[1::2] = (x[:ell] + x[ell:]) / _SQRT2
    p = np.empty(2 * ell)
    p[0::2] = (y[:ell] - y[ell:]) / _SQRT2
    p[1::2] = (y[:ell] + y[ell:]) / _SQRT2
    return q, p


def fpu_hamiltonian(sys: OscillatorySystem, state: State) -> float:
    """Total lattice energy in averaged/extension coordinates."""
    if sys.ell is None:
        raise ValueError("fpu_hamiltonian needs a lattice system")
    ell = sys.ell
    omega = sys.omega_diag[-1]
    x1 = state.q[ell:]
    kinetic = 0.5 * float(state.p @ state.p)
    stiff = 0.5 * omega * omega * float(x1 @ x1)
    return kinetic + stiff + float(sys.slow_potential(state.q))


def stiff_energies(sys: OscillatorySystem, state: State) -> tuple[np.ndarray, float]:
    """Per-spring stiff energies I_j = (y_{1,j}^2 + omega^2 x_{1,j}^2) / 2 and their sum."""
    if sys.ell is None:
        raise ValueError("stiff_energies needs a lattice system")
    ell = sys.ell
    w = sys.omega_diag[ell:]
    x1 = state.q[ell:]
    y1 = state.p[ell:]
    per_spring = 0.5 * (y1 * y1 + (w * x1) ** 2)
    return per_spring, float(per_spring.sum())


def fpu_initial_state(sys: OscillatorySystem) -> State:
    """Canonical lattice start: unit energy in the first soft and first stiff mode."""
    if sys.ell is None:
        raise ValueError("fpu_initial_state needs a lattice system")
    ell = sys.ell
    omega = sys.omega_diag[-1]
    q = np.zeros(2 * ell)
    p = np.zeros(2 * ell)
    q[0] = 1.0
    p[0] = 1.0
    q[ell] = 1.0 / omega
    p[ell] = 1.0
    return State(0.0, q, p)
