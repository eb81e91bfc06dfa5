"""Shared fixtures and the acceptance-summary plumbing.

The expensive runs (the fine Stormer-Verlet reference, the two [0, 4000]
lattice runs, the default-density sweep) are computed once per session and
shared between unit tests and the acceptance gate.
"""
from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from oscint.experiments import resonance_sweep
from oscint.steppers import Method, StepperSpec, integrate
from oscint.systems import (
    FpuParams,
    coupled_oscillator_build,
    fpu_build,
    fpu_initial_state,
)

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def fpu_sys():
    return fpu_build(FpuParams(ell=3, omega=50.0))


@pytest.fixture(scope="session")
def fpu_state0(fpu_sys):
    return fpu_initial_state(fpu_sys)


@pytest.fixture(scope="session")
def model50():
    return coupled_oscillator_build(50.0)


@pytest.fixture(scope="session")
def reference_traj(fpu_sys, fpu_state0):
    # 2e5 Stormer-Verlet steps, sampled every 0.01; dominates fixture cost
    spec = StepperSpec(method=Method.SV, h=0.001)
    return integrate(fpu_sys, spec, fpu_state0, 200.0, stride=10)


@pytest.fixture(scope="session")
def exchange_traj_h003(fpu_sys, fpu_state0):
    spec = StepperSpec(method=Method.IMEX, h=0.03)
    return integrate(fpu_sys, spec, fpu_state0, 200.0)


@pytest.fixture(scope="session")
def exchange_traj_h01(fpu_sys, fpu_state0):
    spec = StepperSpec(method=Method.IMEX, h=0.1)
    return integrate(fpu_sys, spec, fpu_state0, 200.0)


@pytest.fixture(scope="session")
def long_imex_h01(fpu_sys, fpu_state0):
    spec = StepperSpec(method=Method.IMEX, h=0.1)
    return integrate(fpu_sys, spec, fpu_state0, 4000.0)


@pytest.fixture(scope="session")
def long_imex_h03(fpu_sys, fpu_state0):
    spec = StepperSpec(method=Method.IMEX, h=0.3)
    return integrate(fpu_sys, spec, fpu_state0, 4000.0)


@pytest.fixture(scope="session")
def sweep_rows():
    return resonance_sweep()


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collect one PASS/FAIL line per acceptance check for the end-of-run table."""

    def log(ok: bool, label: str, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")

    return log


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance summary")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
