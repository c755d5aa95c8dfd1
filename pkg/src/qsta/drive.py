"""Driven-qubit specialization and digitized pulse-schedule synthesis.

A qubit driven through a single line maps onto the general two-level
Hamiltonian as x = -Omega_d, y = 0, z = -Delta/2, where Delta is the
drive detuning and Omega_d = d(t) * Omega_c the drive amplitude with
d(t) in [0, 1].  Schedules hold the dimensionless samples d(t_k) at
interval midpoints, plus carrier frequency and phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AmplitudeOutOfRange, DegenerateSpectrum, InvalidDuration
from .protocols import DEFAULT_SAMPLE_TIME, ControlProtocol, make_protocol

# drive-line calibration of the reference device
DEFAULT_OMEGA_C = 535.54e6  # rad/s at d = 1
DEFAULT_QUBIT_FREQ = 2 * math.pi * 4.925035720219493e9  # rad/s

HARDWARE_GRANULARITY = 16  # samples; schedule lengths bound for hardware


@dataclass(frozen=True)
class DriveConfig:
    """Drive-line parameters; detuning is derived as qubit_freq - drive_freq."""

    qubit_freq: float = DEFAULT_QUBIT_FREQ
    drive_freq: float = DEFAULT_QUBIT_FREQ
    omega_c: float = DEFAULT_OMEGA_C
    dt: float = DEFAULT_SAMPLE_TIME

    def __post_init__(self):
        if self.omega_c <= 0:
            raise ValueError(f"omega_c = {self.omega_c} must be positive")
        if self.dt <= 0:
            raise ValueError(f"dt = {self.dt} must be positive")

    @property
    def detuning(self) -> float:
        return self.qubit_freq - self.drive_freq

    @classmethod
    def from_detuning(
        cls,
        detuning: float,
        qubit_freq: float = DEFAULT_QUBIT_FREQ,
        omega_c: float = DEFAULT_OMEGA_C,
        dt: float = DEFAULT_SAMPLE_TIME,
    ) -> "DriveConfig":
        return cls(qubit_freq=qubit_freq, drive_freq=qubit_freq - detuning,
                   omega_c=omega_c, dt=dt)


@dataclass(frozen=True, eq=False)
class PulseSchedule:
    """Digitized drive: midpoint samples d(t_k) in [0, 1], carrier, phase."""

    dt: float
    amplitudes: np.ndarray
    frequency: float
    phase: float
    label: str = ""
    hardware_bound: bool = False

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amps)
        if amps.size == 0:
            raise InvalidDuration("schedule has no samples")
        if amps.min() < 0.0 or amps.max() > 1.0:
            raise AmplitudeOutOfRange(
                f"amplitudes span [{amps.min()}, {amps.max()}], outside [0, 1]"
            )
        if self.hardware_bound and amps.size % HARDWARE_GRANULARITY != 0:
            raise InvalidDuration(
                f"hardware-bound schedule length {amps.size} is not a multiple "
                f"of {HARDWARE_GRANULARITY}"
            )

    @property
    def n_samples(self) -> int:
        return int(self.amplitudes.size)

    @property
    def tau(self) -> float:
        return self.n_samples * self.dt

    @property
    def sample_times(self) -> np.ndarray:
        return (np.arange(self.n_samples) + 0.5) * self.dt


def effective_protocol(
    cfg: DriveConfig,
    amplitude_fn: Callable[[float], float],
    tau: float,
    amplitude_rate: Callable[[float], float] | None = None,
    label: str = "drive",
) -> ControlProtocol:
    """Map a dimensionless amplitude on [0, tau] to the control protocol.

    x(t) = -d(t) * Omega_c, y = 0, z = -Delta/2.  Evaluating d outside
    [0, 1] raises AmplitudeOutOfRange.  Without an analytic rate a
    finite-difference derivative is attached.
    """
    omega_c = cfg.omega_c
    half_detuning = cfg.detuning / 2

    def checked(t: float) -> float:
        d = amplitude_fn(t)
        if d < 0.0 or d > 1.0:
            raise AmplitudeOutOfRange(f"d(t={t}) = {d} outside [0, 1]")
        return d

    return make_protocol(
        x=lambda t: -checked(t) * omega_c,
        y=lambda t: 0.0,
        z=lambda t: -half_detuning,
        dx=None if amplitude_rate is None else (lambda t: -amplitude_rate(t) * omega_c),
        dy=lambda t: 0.0,
        dz=lambda t: 0.0,
        tau=tau,
        label=label,
    )


def nobie_amplitude(cfg: DriveConfig, omega_d: float, omega_d_dot: float) -> float:
    """Shortcut drive amplitude Delta * Omega_d' / (4 ((Delta/2)^2 + Omega_d^2)).

    This single-control form transports the instantaneous eigenstates of
    the ramped drive exactly, independent of the ramp duration.
    """
    delta = cfg.detuning
    f2 = (delta / 2) ** 2 + omega_d ** 2
    if f2 == 0.0:
        raise DegenerateSpectrum("Delta = 0 and Omega_d = 0: no level splitting")
    return delta * omega_d_dot / (4 * f2)


def generate_nobie_schedule(
    cfg: DriveConfig,
    tau_samples: int,
    ramp_max_fraction: float = 0.5,
    hardware_bound: bool | None = None,
    label: str = "nobie",
) -> PulseSchedule:
    """Digitized shortcut schedule for the linear amplitude ramp.

    The source ramp takes d from 0 to ramp_max_fraction over
    tau_samples * dt; the emitted pulse is resonant (carrier at the qubit
    frequency) with phase pi/2 so its amplitude acts along sigma-y.
    Amplitudes exceeding 1 raise AmplitudeOutOfRange (a clip would break
    the shortcut guarantee).
    """
    if tau_samples < 1:
        raise InvalidDuration(f"tau_samples = {tau_samples} must be positive")
    if not 0.0 <= ramp_max_fraction <= 1.0:
        raise AmplitudeOutOfRange(f"ramp_max_fraction = {ramp_max_fraction} outside [0, 1]")
    if cfg.detuning == 0.0:
        raise DegenerateSpectrum(
            "Delta = 0: the shortcut amplitude vanishes identically and the "
            "adiabatic-tracking problem is trivial"
        )
    tau = tau_samples * cfg.dt
    omega_max = ramp_max_fraction * cfg.omega_c
    omega_dot = omega_max / tau
    t_mid = (np.arange(tau_samples) + 0.5) * cfg.dt
    omega_d = omega_max * t_mid / tau
    f2 = (cfg.detuning / 2) ** 2 + omega_d ** 2
    amps = cfg.detuning * omega_dot / (4 * f2) / cfg.omega_c
    if np.max(np.abs(amps)) > 1.0:
        raise AmplitudeOutOfRange(
            f"peak shortcut amplitude {np.max(np.abs(amps)):.4g} exceeds 1; "
            "protocol too fast for this omega_c"
        )
    if hardware_bound is None:
        hardware_bound = tau_samples % HARDWARE_GRANULARITY == 0
    return PulseSchedule(
        dt=cfg.dt, amplitudes=amps, frequency=cfg.qubit_freq,
        phase=math.pi / 2, label=label, hardware_bound=hardware_bound,
    )


def generate_linear_schedule(
    cfg: DriveConfig,
    tau_samples: int,
    d_max: float,
    hardware_bound: bool | None = None,
    label: str = "linear",
) -> PulseSchedule:
    """Digitized linear ramp d(t) = d_max * t / tau at the detuned carrier."""
    if tau_samples < 1:
        raise InvalidDuration(f"tau_samples = {tau_samples} must be positive")
    if not 0.0 <= d_max <= 1.0:
        raise AmplitudeOutOfRange(f"d_max = {d_max} outside [0, 1]")
    tau = tau_samples * cfg.dt
    t_mid = (np.arange(tau_samples) + 0.5) * cfg.dt
    amps = d_max * t_mid / tau
    if hardware_bound is None:
        hardware_bound = tau_samples % HARDWARE_GRANULARITY == 0
    return PulseSchedule(
        dt=cfg.dt, amplitudes=amps, frequency=cfg.drive_freq,
        phase=0.0, label=label, hardware_bound=hardware_bound,
    )
