"""Time-dependent control protocols and their digitization.

A ControlProtocol carries the Pauli coefficients (x(t), y(t), z(t)) of a
two-level Hamiltonian together with their time derivatives on [0, tau].
Digitization samples the protocol at interval midpoints t_k = (k + 1/2) dt,
matching sample-and-hold pulse hardware.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import InvalidDuration, NonCommensurateDuration
from .pauli import PauliVector

# hardware amplitude-update granularity of the target drive line
DEFAULT_SAMPLE_TIME = 0.22222222222222221e-9

# finite-difference step for derivative fallbacks: well under the sampling
# scale, well above double-precision noise at ns time scales
DEFAULT_FD_STEP = DEFAULT_SAMPLE_TIME / 10

TimeFunc = Callable[[float], float]


@dataclass(frozen=True)
class ControlProtocol:
    """Control coefficients x, y, z and derivatives dx, dy, dz on [0, tau]."""

    x: TimeFunc
    y: TimeFunc
    z: TimeFunc
    dx: TimeFunc
    dy: TimeFunc
    dz: TimeFunc
    tau: float
    label: str = ""
    approx_derivatives: bool = False  # True when dx/dy/dz are finite differences

    def value(self, t: float) -> PauliVector:
        return PauliVector(self.x(t), self.y(t), self.z(t))

    def slope(self, t: float) -> tuple[float, float, float]:
        return self.dx(t), self.dy(t), self.dz(t)

    def magnitude(self, t: float) -> float:
        return self.value(t).magnitude


def make_protocol(
    x: TimeFunc,
    y: TimeFunc,
    z: TimeFunc,
    tau: float,
    *,
    dx: TimeFunc | None = None,
    dy: TimeFunc | None = None,
    dz: TimeFunc | None = None,
    label: str = "",
    fd_step: float | None = None,
) -> ControlProtocol:
    """Build a protocol, attaching finite-difference derivatives where absent."""
    if tau <= 0:
        raise InvalidDuration(f"tau = {tau} must be positive")
    h = DEFAULT_FD_STEP if fd_step is None else fd_step
    approx = dx is None or dy is None or dz is None
    return ControlProtocol(
        x=x,
        y=y,
        z=z,
        dx=dx if dx is not None else _central_diff(x, h, tau),
        dy=dy if dy is not None else _central_diff(y, h, tau),
        dz=dz if dz is not None else _central_diff(z, h, tau),
        tau=tau,
        label=label,
        approx_derivatives=approx,
    )


def _central_diff(fn: TimeFunc, h: float, tau: float) -> TimeFunc:
    """Second-order difference; one-sided at the interval endpoints."""

    def d(t: float) -> float:
        if t - h < 0:
            return (-3 * fn(t) + 4 * fn(t + h) - fn(t + 2 * h)) / (2 * h)
        if t + h > tau:
            return (3 * fn(t) - 4 * fn(t - h) + fn(t - 2 * h)) / (2 * h)
        return (fn(t + h) - fn(t - h)) / (2 * h)

    return d


def linear_ramp(omega_max: float, delta: float, tau: float, label: str = "linear-ramp") -> ControlProtocol:
    """Transverse drive ramping linearly from 0 to omega_max at fixed detuning.

    x(t) = -omega_max * t / tau, y = 0, z = -delta / 2.
    """
    if tau <= 0:
        raise InvalidDuration(f"tau = {tau} must be positive")
    if omega_max < 0:
        raise ValueError(f"omega_max = {omega_max} must be non-negative")
    rate = -omega_max / tau
    return ControlProtocol(
        x=lambda t: rate * t,
        y=lambda t: 0.0,
        z=lambda t: -delta / 2,
        dx=lambda t: rate,
        dy=lambda t: 0.0,
        dz=lambda t: 0.0,
        tau=tau,
        label=label,
    )


@dataclass(frozen=True, eq=False)
class SampledTrace:
    """Protocol sampled at midpoints; sample-and-hold over each interval.

    ``values`` has shape (n_samples, 3) with rows (x, y, z) at t_k.
    """

    dt: float
    sample_times: np.ndarray
    values: np.ndarray

    @property
    def n_samples(self) -> int:
        return len(self.sample_times)

    @property
    def tau(self) -> float:
        return self.n_samples * self.dt


def digitize(p: ControlProtocol, dt: float) -> SampledTrace:
    """Sample a protocol at midpoints t_k = (k + 1/2) dt.

    Raises NonCommensurateDuration unless tau / dt is within 0.5 of an
    integer and the residue is below 1e-9 relative.
    """
    if dt <= 0:
        raise InvalidDuration(f"dt = {dt} must be positive")
    ratio = p.tau / dt
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(ratio, 1.0):
        raise NonCommensurateDuration(
            f"tau = {p.tau} is not an integer multiple of dt = {dt} (ratio {ratio})"
        )
    times = (np.arange(n) + 0.5) * dt
    values = np.array([[p.x(t), p.y(t), p.z(t)] for t in times])
    return SampledTrace(dt=dt, sample_times=times, values=values)


def finite_diff_derivatives(p: ControlProtocol, h: float | None = None) -> ControlProtocol:
    """Replace the protocol's derivatives with central differences of step h."""
    step = DEFAULT_FD_STEP if h is None else h
    if step <= 0:
        raise ValueError(f"h = {step} must be positive")
    return replace(
        p,
        dx=_central_diff(p.x, step, p.tau),
        dy=_central_diff(p.y, step, p.tau),
        dz=_central_diff(p.z, step, p.tau),
        approx_derivatives=True,
    )


def constant_protocol(x: float, y: float, z: float, tau: float, label: str = "constant") -> ControlProtocol:
    """Time-independent protocol; all derivatives vanish."""
    if tau <= 0:
        raise InvalidDuration(f"tau = {tau} must be positive")
    zero = lambda t: 0.0
    return ControlProtocol(
        x=lambda t: x, y=lambda t: y, z=lambda t: z,
        dx=zero, dy=zero, dz=zero, tau=tau, label=label,
    )
