"""Finite-time evolution under digitized protocols, plus diagnostics.

Each sample interval is propagated with the closed-form constant-field
step, so the only discretization error is the protocol sampling itself,
exactly as on sample-and-hold pulse hardware.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .drive import DriveConfig, PulseSchedule
from .errors import DegenerateSpectrum, UnsupportedPhase
from .pauli import HADAMARD, PauliVector, eigensystem, ket0
from .protocols import ControlProtocol, SampledTrace

PHASE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded state history; states[k] is the state at times[k]."""

    times: np.ndarray
    states: np.ndarray  # shape (n_recorded, 2), complex
    source: object = None

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def propagate(trace: SampledTrace, initial: np.ndarray, record_every: int = 1) -> Trajectory:
    """Ordered product of constant-field steps applied to the initial state.

    Records the state at t = 0 and after every record_every-th sample
    boundary (the final boundary always included).
    """
    if trace.n_samples == 0:
        raise ValueError("empty trace")
    if record_every < 1:
        raise ValueError(f"record_every = {record_every} must be >= 1")
    n = trace.n_samples
    dt = trace.dt
    x = trace.values[:, 0]
    y = trace.values[:, 1]
    z = trace.values[:, 2]
    f = np.sqrt(x * x + y * y + z * z)
    angle = f * dt
    cos_t = np.cos(angle)
    with np.errstate(invalid="ignore", divide="ignore"):
        sin_over_f = np.where(angle == 0.0, dt, np.sin(angle) / np.where(f == 0.0, 1.0, f))
    # per-sample step entries of exp(-i H_k dt)
    u00 = cos_t - 1j * sin_over_f * z
    u01 = -1j * sin_over_f * (x - 1j * y)
    u10 = -1j * sin_over_f * (x + 1j * y)
    u11 = cos_t + 1j * sin_over_f * z

    c0 = complex(initial[0])
    c1 = complex(initial[1])
    rec_times = [0.0]
    rec_states = [(c0, c1)]
    for k in range(n):
        c0, c1 = u00[k] * c0 + u01[k] * c1, u10[k] * c0 + u11[k] * c1
        if (k + 1) % record_every == 0 or k == n - 1:
            rec_times.append((k + 1) * dt)
            rec_states.append((c0, c1))
    return Trajectory(
        times=np.array(rec_times),
        states=np.array(rec_states, dtype=complex),
        source=trace,
    )


def schedule_to_trace(s: PulseSchedule, cfg: DriveConfig) -> SampledTrace:
    """Pauli-coefficient trace of a schedule in the qubit rotating frame.

    Detuning term z = -(qubit_freq - carrier)/2 throughout; the amplitude
    drives -sigma-x at phase 0 and +sigma-y at phase pi/2.  Other phases
    are unsupported (no general quadrature mixing).
    """
    n = s.n_samples
    z = -(cfg.qubit_freq - s.frequency) / 2
    omega = s.amplitudes * cfg.omega_c
    if abs(s.phase) <= PHASE_TOL:
        values = np.column_stack([-omega, np.zeros(n), np.full(n, z)])
    elif abs(s.phase - math.pi / 2) <= PHASE_TOL:
        values = np.column_stack([np.zeros(n), omega, np.full(n, z)])
    else:
        raise UnsupportedPhase(f"phase = {s.phase}; supported phases are 0 and pi/2")
    return SampledTrace(dt=s.dt, sample_times=s.sample_times, values=values)


def propagate_schedule(
    s: PulseSchedule,
    cfg: DriveConfig,
    initial: np.ndarray | None = None,
    record_every: int = 1,
) -> Trajectory:
    psi0 = ket0() if initial is None else initial
    return propagate(schedule_to_trace(s, cfg), psi0, record_every=record_every)


def ground_probability(state: np.ndarray) -> float:
    """|<0|state>|^2."""
    return float(abs(state[0]) ** 2)


def hadamard_discriminate(state: np.ndarray) -> float:
    """|<0| h |state>|^2 = |c0 + c1|^2 / 2.

    Close to 1 iff the state is near (|0> + |1>)/sqrt(2), which a large
    adiabatic opening of the transverse drive should reach.
    """
    return float(abs(HADAMARD[0] @ state) ** 2)


def adiabatic_reference(delta: float, omega_d: float) -> float:
    """Ground-state weight |<0|lam_minus>|^2 of the driven-qubit Hamiltonian.

    Closed form omega_d^2 / (omega_d^2 + (f - delta/2)^2) with
    f = sqrt((delta/2)^2 + omega_d^2): 1 at omega_d = 0 (delta > 0),
    tending to 1/2 as omega_d grows.
    """
    a = delta / 2
    f = math.hypot(a, omega_d)
    if f == 0.0:
        raise DegenerateSpectrum("delta = 0 and omega_d = 0")
    if omega_d == 0.0:
        return 1.0 if a > 0 else 0.0
    return omega_d ** 2 / (omega_d ** 2 + (f - a) ** 2)


def instantaneous_fidelity(traj: Trajectory, p: ControlProtocol) -> np.ndarray:
    """Overlap |<lam_minus(t_k)|psi(t_k)>|^2 at every recorded instant.

    Constant at its initial value along an exactly adiabatic path.  The
    occupation probability is the squared modulus of the complex overlap
    amplitude, never the square of the amplitude itself.
    """
    out = np.empty(len(traj.times))
    for i, (t, psi) in enumerate(zip(traj.times, traj.states)):
        _, _, v_minus, _ = eigensystem(p.value(t))
        out[i] = abs(np.vdot(v_minus, psi)) ** 2
    return out
