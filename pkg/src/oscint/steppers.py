"""One-step maps for fast/slow systems and the trajectory driver.

The central method is an implicit-explicit splitting: a half kick from the
slow force, one implicit midpoint step of the fast quadratic part (a single
symmetric positive definite solve), and a closing half kick.  Baselines for
comparison: plain Stormer-Verlet (optionally with a modified mass matrix),
a fully implicit midpoint step on the whole potential, the multiple
time-stepping impulse method (r-RESPA), and an impulse variant whose fast
rotation uses per-axis modified frequencies.
"""
from __future__ import annotations

import enum
import math
import weakref
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import SpdFactor, spd_factor
from .systems import OscillatorySystem, State, stiff_energies

BLOWUP_NORM_CAP = 1e8

COMPLETED = "completed"
BLOWUP = "blowup"


class NoConvergence(RuntimeError):
    """Fixed-point iteration failed to reach tolerance."""

    def __init__(self, iterations: int):
        super().__init__(f"fixed point not converged after {iterations} iterations")
        self.iterations = iterations


class MissingDiagonalOmega(ValueError):
    """Stepper needs per-axis frequencies but the system has none."""


class Method(enum.Enum):
    SV = "sv"
    IMEX = "imex"
    RESPA = "respa"
    MIDPOINT_FULL = "midpoint-full"
    MODIFIED_IMPULSE = "modified-impulse"


@dataclass(frozen=True)
class StepperSpec:
    """Method selection plus the knobs the method actually reads."""

    method: Method
    h: float
    substeps: int = 1
    mass_override: np.ndarray | None = None
    fp_tol: float = 1e-12
    fp_max_iter: int = 200

    def __post_init__(self) -> None:
        # accept the enum's string value so callers can say method="imex"
        object.__setattr__(self, "method", Method(self.method))
        if not self.h > 0.0:
            raise ValueError("h must be positive")
        if self.substeps < 1:
            raise ValueError("substeps must be >= 1")
        if not self.fp_tol > 0.0 or self.fp_max_iter < 1:
            raise ValueError("fp_tol must be positive and fp_max_iter >= 1")


# One factorization of I + (h^2/4) Omega^2 per (system, h); keyed by h^2 so a
# step and its adjoint (negated h) share the factor.
_FAST_FACTORS: "weakref.WeakKeyDictionary[OscillatorySystem, dict]" = weakref.WeakKeyDictionary()


def _fast_factor(sys: OscillatorySystem, h: float) -> SpdFactor:
    per_sys = _FAST_FACTORS.setdefault(sys, {})
    key = h * h
    factor = per_sys.get(key)
    if factor is None:
        factor = spd_factor(np.eye(sys.d) + 0.25 * key * sys.omega2)
        per_sys[key] = factor
    return factor


def kick_slow(sys: OscillatorySystem, state: State, dt: float) -> State:
    """Exact flow of the slow potential alone: momentum kick, no displacement."""
    return State(state.t, state.q, state.p + dt * sys.slow_force(state.q))


def step_midpoint_fast(sys: OscillatorySystem, state: State, h: float) -> State:
    """Implicit midpoint step of the fast quadratic part only.

    Solves (I + (h^2/4) Omega^2) q1 = (I - (h^2/4) Omega^2) q0 + h p0, then
    p1 = p0 - (h/2) Omega^2 (q0 + q1).  One SPD solve per step; exactly
    conserves the fast energy p'p/2 + q'Omega^2 q/2.
    """
    q, p = state.q, state.p
    w2q = sys.omega2 @ q
    rhs = q + h * p - 0.25 * h * h * w2q
    q1 = _fast_factor(sys, h).solve(rhs)
    p1 = p - 0.5 * h * (w2q + sys.omega2 @ q1)
    return State(state.t + h, q1, p1)


def step_imex(sys: OscillatorySystem, state: State, h: float) -> State:
    """Half slow kick, implicit midpoint on the fast part, half slow kick."""
    s = kick_slow(sys, state, 0.5 * h)
    s = step_midpoint_fast(sys, s, h)
    return kick_slow(sys, s, 0.5 * h)


def step_stormer_verlet(
    sys: OscillatorySystem,
    state: State,
    h: float,
    mass_override: np.ndarray | None = None,
) -> State:
    """Kick-drift-kick on the full force; drift uses M^(-1) when a mass is given."""
    q, p = state.q, state.p
    p_half = p + 0.5 * h * (sys.slow_force(q) - sys.omega2 @ q)
    if mass_override is None:
        q1 = q + h * p_half
    else:
        q1 = q + h * spd_factor(mass_override).solve(p_half)
    p1 = p_half + 0.5 * h * (sys.slow_force(q1) - sys.omega2 @ q1)
    return State(state.t + h, q1, p1)


def step_respa(sys: OscillatorySystem, state: State, h: float, substeps: int) -> State:
    """Impulse multiple time stepping: outer half kicks of the slow force
    around `substeps` Stormer-Verlet substeps of the fast-only system."""
    s = kick_slow(sys, state, 0.5 * h)
    dt = h / substeps
    q, p = s.q, s.p
    for _ in range(substeps):
        p = p - 0.5 * dt * (sys.omega2 @ q)
        q = q + dt * p
        p = p - 0.5 * dt * (sys.omega2 @ q)
    s = State(state.t + h, q, p)
    return kick_slow(sys, s, 0.5 * h)


def step_modified_impulse(sys: OscillatorySystem, state: State, h: float) -> State:
    """Impulse method whose fast step rotates each axis by its modified frequency.

    Needs a diagonal Omega.  With a = h*omega_i/2 the rotation angle w~*h
    satisfies tan(w~*h/2) = a, so cos(w~*h) = (1 - a^2)/(1 + a^2) and the
    fast map per axis is

        [[c, (h/2)(1 + c)], [-(2/h)(1 - c), c]],  c = cos(w~*h).

    The entries are evaluated over the common denominator 1 + a^2, which is
    the same matrix with one rounding fewer per entry:
    (h/2)(1 + c) = h/(1 + a^2) and (2/h)(1 - c) = h*omega_i^2/(1 + a^2).
    Axes with omega_i = 0 reduce exactly to the free drift q + h p.
    """
    if sys.omega_diag is None:
        raise MissingDiagonalOmega(f"system {sys.label!r} has no diagonal frequencies")
    s = kick_slow(sys, state, 0.5 * h)
    a2 = (0.5 * h * sys.omega_diag) ** 2
    w2 = sys.omega_diag ** 2
    cos_num = 1.0 - a2
    denom = 1.0 + a2
    q, p = s.q, s.p
    q1 = (cos_num * q + h * p) / denom
    p1 = (cos_num * p - h * w2 * q) / denom
    s = State(state.t + h, q1, p1)
    return kick_slow(sys, s, 0.5 * h)


def step_midpoint_full(
    sys: OscillatorySystem,
    state: State,
    h: float,
    fp_tol: float = 1e-12,
    fp_max_iter: int = 200,
) -> State:
    """Implicit midpoint on the full potential, solved by fixed-point iteration.

    Iterates on the interval midpoint m = q + (h/2) p + (h^2/4) f(m) with
    f = g - Omega^2 q until successive iterates differ by <= fp_tol in the
    max norm.  Contracts only while (h^2/4) Lip(f) < 1, so this is a
    small-step baseline.
    """
    q, p = state.q, state.p

    def force(m):
        return sys.slow_force(m) - sys.omega2 @ m

    base = q + 0.5 * h * p
    m = base
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(fp_max_iter):
            m_next = base + 0.25 * h * h * force(m)
            if not np.isfinite(m_next).all():
                raise NoConvergence(k + 1)
            done = float(np.max(np.abs(m_next - m))) <= fp_tol
            m = m_next
            if done:
                break
        else:
            raise NoConvergence(fp_max_iter)
    q1 = 2.0 * m - q
    p1 = p + h * force(m)
    return State(state.t + h, q1, p1)


def make_stepper(sys: OscillatorySystem, spec: StepperSpec) -> Callable[[State], State]:
    """Bind a spec to a system, pre-factoring anything reusable."""
    h = spec.h
    if spec.method is Method.SV:
        if spec.mass_override is None:
            return lambda s: step_stormer_verlet(sys, s, h)
        factor = spd_factor(spec.mass_override)

        def step_sv_mass(s: State) -> State:
            q, p = s.q, s.p
            p_half = p + 0.5 * h * (sys.slow_force(q) - sys.omega2 @ q)
            q1 = q + h * factor.solve(p_half)
            p1 = p_half + 0.5 * h * (sys.slow_force(q1) - sys.omega2 @ q1)
            return State(s.t + h, q1, p1)

        return step_sv_mass
    if spec.method is Method.IMEX:
        return lambda s: step_imex(sys, s, h)
    if spec.method is Method.RESPA:
        return lambda s: step_respa(sys, s, h, spec.substeps)
    if spec.method is Method.MODIFIED_IMPULSE:
        return lambda s: step_modified_impulse(sys, s, h)
    return lambda s: step_midpoint_full(sys, s, h, spec.fp_tol, spec.fp_max_iter)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded samples of a run plus its outcome.

    Samples sit at integer step multiples of the recording stride; stiff
    per-spring energies are carried for lattice systems (columns I_1..I_ell
    followed by their sum).  final_state is the last computed state even
    when the stride did not record it.
    """

    times: np.ndarray
    qs: np.ndarray
    ps: np.ndarray
    energies: np.ndarray
    stiff: np.ndarray | None
    status: str
    t_blowup: float | None
    blowup_cause: str | None
    h: float
    method: str
    system: str
    final_state: State

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED

    def state(self, i: int) -> State:
        return State(float(self.times[i]), self.qs[i].copy(), self.ps[i].copy())


def _sample_row(sys: OscillatorySystem, state: State):
    h_val = sys.total_energy(state.q, state.p)
    if sys.ell is None:
        return h_val, None
    per_spring, total = stiff_energies(sys, state)
    return h_val, np.append(per_spring, total)


def integrate(
    sys: OscillatorySystem,
    spec: StepperSpec,
    state0: State,
    t_end: float,
    stride: int = 1,
) -> Trajectory:
    """Run ceil((t_end - t0)/h) steps, recording every stride-th state.

    Sample times are computed as t0 + n*h from the integer step count.  A
    non-finite state or one exceeding BLOWUP_NORM_CAP in the max norm stops
    the run with BLOWUP status and records the offending sample; stepper
    failures (for example fixed-point stagnation) are reported the same way
    with a NaN sample and the cause retained.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if not t_end > state0.t:
        raise ValueError("t_end must exceed the initial time")
    step = make_stepper(sys, spec)
    n_steps = math.ceil((t_end - state0.t) / spec.h)
    t0 = state0.t

    times, qs, ps, energies, stiff_rows = [], [], [], [], []

    def record(state: State):
        h_val, stiff_row = _sample_row(sys, state)
        times.append(state.t)
        qs.append(state.q)
        ps.append(state.p)
        energies.append(h_val)
        stiff_rows.append(stiff_row)

    record(state0)
    state = state0
    status, t_blowup, cause = COMPLETED, None, None
    for n in range(1, n_steps + 1):
        t_n = t0 + n * spec.h
        try:
            stepped = step(state)
        except NoConvergence as exc:
            nan = np.full(sys.d, np.nan)
            state = State(t_n, nan, nan)
            record(state)
            status, t_blowup, cause = BLOWUP, t_n, str(exc)
            break
        state = State(t_n, stepped.q, stepped.p)
        finite = bool(np.isfinite(state.q).all() and np.isfinite(state.p).all())
        if not finite or max(np.max(np.abs(state.q)), np.max(np.abs(state.p))) > BLOWUP_NORM_CAP:
            record(state)
            status, t_blowup, cause = BLOWUP, t_n, "state norm cap exceeded"
            break
        if n % stride == 0:
            record(state)

    stiff = None
    if sys.ell is not None:
        stiff = np.array(stiff_rows)
    return Trajectory(
        times=np.array(times),
        qs=np.array(qs),
        ps=np.array(ps),
        energies=np.array(energies),
        stiff=stiff,
        status=status,
        t_blowup=t_blowup,
        blowup_cause=cause,
        h=spec.h,
        method=spec.method.value,
        system=sys.label,
        final_state=state,
    )
