"""Structure-preserving integrators for highly oscillatory mechanical systems."""

from .analysis import (
    ENERGY_ERROR_CAP,
    STABILITY_TOL,
    DegenerateInput,
    StabilityReport,
    convergence_order,
    imex_propagation_matrix,
    imex_stability,
    max_energy_error,
    modified_frequency,
    modified_mass,
    propagation_matrix,
    respa_propagation_matrix,
    windowed_mean,
)
from .experiments import (
    ConvergenceRow,
    ExchangeResult,
    SweepRow,
    convergence_study,
    fpu_exchange,
    model_exact_state,
    resonance_sweep,
)
from .lagrangians import (
    DiscreteLagrangian,
    Quadrature,
    del_residual,
    ld_d1,
    ld_d2,
    ld_value,
    legendre_minus,
    legendre_plus,
)
from .linalg import (
    NotPositiveDefinite,
    cayley,
    skew_matrix,
    solve_spd,
    spd_factor,
    spectral_radius_2x2,
    sym_matrix,
)
from .steppers import (
    BLOWUP,
    BLOWUP_NORM_CAP,
    COMPLETED,
    Method,
    MissingDiagonalOmega,
    NoConvergence,
    StepperSpec,
    Trajectory,
    integrate,
    kick_slow,
    make_stepper,
    step_imex,
    step_midpoint_fast,
    step_midpoint_full,
    step_modified_impulse,
    step_respa,
    step_stormer_verlet,
)
from .systems import (
    FpuParams,
    OscillatorySystem,
    State,
    coupled_oscillator_build,
    fpu_build,
    fpu_hamiltonian,
    fpu_initial_state,
    fpu_inverse_transform,
    fpu_transform,
    stiff_energies,
)

__version__ = "0.1.0"
