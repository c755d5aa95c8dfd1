"""Shortcut-to-adiabaticity pulse synthesis and simulation for driven qubits.

Synthesizes number-operator inverse-engineered drive schedules for
two-level systems, simulates their digitized execution exactly as
sample-and-hold pulse hardware applies them, and provides the shot- and
calibration-level machinery to reproduce the associated experiments.
"""

from .drive import (
    DEFAULT_OMEGA_C,
    DEFAULT_QUBIT_FREQ,
    DriveConfig,
    PulseSchedule,
    effective_protocol,
    generate_linear_schedule,
    generate_nobie_schedule,
    nobie_amplitude,
)
from .evolve import (
    Trajectory,
    adiabatic_reference,
    ground_probability,
    hadamard_discriminate,
    instantaneous_fidelity,
    propagate,
    propagate_schedule,
)
from .measure import (
    RabiFit,
    RunRecord,
    ShotConfig,
    omega_c_from_period,
    omega_c_select,
    rabi_fit,
    run_experiment,
    sample_counts,
)
from .nobie import (
    Axis,
    NobieSolution,
    SolutionFamily,
    dependent_solution,
    independent_solution,
    invariance_residual,
    main_conditions_residual,
    number_operator,
)
from .pauli import PauliVector, commutator, eigensystem, expm_step, ket0, ket1, pauli_compose
from .protocols import (
    DEFAULT_SAMPLE_TIME,
    ControlProtocol,
    SampledTrace,
    digitize,
    finite_diff_derivatives,
    linear_ramp,
    make_protocol,
)

__version__ = "0.1.0"
