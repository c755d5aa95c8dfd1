"""Shot-limited measurement simulation and Rabi calibration.

Counting statistics follow the repeat protocol of the reference
experiments: a fixed number of projective shots per repeat, a fixed
number of repeats per configuration.  Streams are drawn from a
counter-based Philox generator keyed by (seed, label), so distinct
records are reproducible regardless of execution order.

The calibration pipeline recovers the drive-line scale Omega_c from
resonant constant drives: fit a cosine to the ground-state probability
versus duration, convert the period via Omega_c = pi / (T d), fit a
straight line over the probed d values and take its mean over d in
[0, 1] (the value at d = 0.5).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .drive import DriveConfig, PulseSchedule
from .errors import FitDiverged, InsufficientData, InvalidAmplitude
from .evolve import ground_probability, hadamard_discriminate, propagate_schedule

ORIGIN_SIMULATED = "simulated"
ORIGIN_HARDWARE = "hardware"


@dataclass(frozen=True)
class ShotConfig:
    shots: int = 1024
    repeats: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots = {self.shots} must be >= 1")
        if self.repeats < 1:
            raise ValueError(f"repeats = {self.repeats} must be >= 1")


@dataclass(frozen=True)
class RunRecord:
    """Measured ground-state statistics for one (duration, detuning) point."""

    duration_samples: int
    detuning: float
    per_repeat_p0: tuple[float, ...]
    mean_p0: float
    label: str = ""
    origin: str = ORIGIN_SIMULATED
    shots: int = 1024
    seed: int = 0

    def __post_init__(self):
        if self.origin not in (ORIGIN_SIMULATED, ORIGIN_HARDWARE):
            raise ValueError(f"origin = {self.origin!r}")


@dataclass(frozen=True)
class RabiFit:
    """Parameters of B + A cos(2 pi t / T + phi) fitted to oscillation data."""

    period: float
    amplitude: float
    offset: float
    phase: float
    residual_rms: float


def _stream(seed: int, label: str) -> np.random.Generator:
    """Philox stream derived deterministically from (seed, label)."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    key = tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def sample_counts(p0: float, cfg: ShotConfig, label: str = "") -> tuple[float, ...]:
    """Per-repeat fraction of ground-state outcomes over cfg.shots draws."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 = {p0} outside [0, 1]")
    rng = _stream(cfg.seed, label)
    counts = rng.binomial(cfg.shots, p0, size=cfg.repeats)
    return tuple(float(c) / cfg.shots for c in counts)


def run_experiment(
    schedule: PulseSchedule,
    cfg: DriveConfig,
    shot_cfg: ShotConfig,
    discriminate: bool = False,
    depolarizing: float = 0.0,
) -> RunRecord:
    """Propagate the schedule, measure, and sample counting statistics.

    With ``discriminate`` the final state passes through a Hadamard before
    measurement.  ``depolarizing`` optionally mixes the exact probability
    toward 1/2 to mimic hardware spread (off by default).
    """
    traj = propagate_schedule(schedule, cfg, record_every=max(schedule.n_samples, 1))
    final = traj.final_state
    p0 = hadamard_discriminate(final) if discriminate else ground_probability(final)
    p0 = (1 - depolarizing) * p0 + depolarizing * 0.5
    p0 = min(max(p0, 0.0), 1.0)
    label = f"{schedule.label}/{schedule.n_samples}/{cfg.detuning:.9e}/{int(discriminate)}"
    per_repeat = sample_counts(p0, shot_cfg, label=label)
    return RunRecord(
        duration_samples=schedule.n_samples,
        detuning=cfg.detuning,
        per_repeat_p0=per_repeat,
        mean_p0=float(np.mean(per_repeat)),
        label=schedule.label,
        origin=ORIGIN_SIMULATED,
        shots=shot_cfg.shots,
        seed=shot_cfg.seed,
    )


def exact_probability(
    schedule: PulseSchedule, cfg: DriveConfig, discriminate: bool = False
) -> float:
    """Noise-free final ground-state (or discriminated) probability."""
    traj = propagate_schedule(schedule, cfg, record_every=max(schedule.n_samples, 1))
    final = traj.final_state
    return hadamard_discriminate(final) if discriminate else ground_probability(final)


def rabi_fit(
    durations: np.ndarray,
    p0_means: np.ndarray,
    max_iter: int = 200,
    stall_limit: int = 50,
) -> RabiFit:
    """Least-squares cosine fit B + A cos(2 pi t / T + phi).

    The period is seeded from the dominant nonzero discrete-Fourier peak
    (durations must be close to uniformly spaced for the seed to be
    meaningful) and refined by damped Gauss-Newton over (T, A, B, phi).

    Raises InsufficientData for fewer than 8 points and FitDiverged when
    no oscillation is detectable or the refinement stalls for
    ``stall_limit`` consecutive iterations before converging.
    """
    t = np.asarray(durations, dtype=float)
    y = np.asarray(p0_means, dtype=float)
    if t.size < 8:
        raise InsufficientData(f"{t.size} points; need at least 8")
    if t.size != y.size:
        raise ValueError("durations and values length mismatch")

    centered = y - y.mean()
    power = np.abs(np.fft.rfft(centered))
    if power[1:].max() <= 1e-9 * max(1.0, float(np.abs(y).max())):
        raise FitDiverged("no oscillation detectable in the data")
    k_peak = 1 + int(np.argmax(power[1:]))
    span = (t[-1] - t[0]) * t.size / (t.size - 1)
    period = span / k_peak

    def linear_quadrature(T: float):
        # B + P cos(wt) + Q sin(wt) is linear in (B, P, Q) at fixed T
        w = 2 * math.pi / T
        m = np.column_stack([np.ones_like(t), np.cos(w * t), np.sin(w * t)])
        coef, *_ = np.linalg.lstsq(m, y, rcond=None)
        return coef

    offset, p_cos, q_sin = linear_quadrature(period)
    amplitude = math.hypot(p_cos, q_sin)
    phase = math.atan2(-q_sin, p_cos)

    def residual(T, A, B, phi):
        return y - (B + A * np.cos(2 * math.pi * t / T + phi))

    rms = float(np.sqrt(np.mean(residual(period, amplitude, offset, phase) ** 2)))
    damping = 1e-3
    stalls = 0
    for _ in range(max_iter):
        w = 2 * math.pi / period
        arg = w * t + phase
        cos_a = np.cos(arg)
        sin_a = np.sin(arg)
        r = y - (offset + amplitude * cos_a)
        jac = np.column_stack(
            [
                -amplitude * sin_a * 2 * math.pi * t / period ** 2,  # d r / d T
                -cos_a,                                              # d r / d A
                -np.ones_like(t),                                    # d r / d B
                amplitude * sin_a,                                   # d r / d phi
            ]
        )
        grad = jac.T @ r
        # at a least-squares minimum the residual is orthogonal to every
        # Jacobian column; the worst cosine is a scale-free convergence test
        col_norms = np.linalg.norm(jac, axis=0)
        r_norm = float(np.linalg.norm(r))
        worst_cos = float(np.max(np.abs(grad) / (col_norms * r_norm + 1e-300)))
        if rms < 1e-14 or worst_cos < 1e-8:
            break
        hess = jac.T @ jac
        try:
            step = np.linalg.solve(hess + damping * np.diag(np.diag(hess) + 1e-30), -grad)
        except np.linalg.LinAlgError:
            raise FitDiverged("normal equations singular")
        trial = (period + step[0], amplitude + step[1], offset + step[2], phase + step[3])
        if trial[0] > 0:
            rms_trial = float(np.sqrt(np.mean(residual(*trial) ** 2)))
        else:
            rms_trial = math.inf
        if rms_trial < rms * (1 - 1e-15):
            period, amplitude, offset, phase = trial
            rms = rms_trial
            damping = max(damping / 10, 1e-12)
            stalls = 0
        else:
            damping *= 10
            stalls += 1
            if stalls > stall_limit:
                if worst_cos < 1e-4:
                    break  # stalled at a least-squares minimum: converged
                raise FitDiverged(
                    f"no residual reduction for {stall_limit} iterations "
                    f"(rms {rms:.3g}, gradient cosine {worst_cos:.3g})"
                )
    if amplitude < 0:
        amplitude = -amplitude
        phase = math.atan2(math.sin(phase + math.pi), math.cos(phase + math.pi))
    return RabiFit(period=float(period), amplitude=float(amplitude),
                   offset=float(offset), phase=float(phase), residual_rms=rms)


def omega_c_from_period(period: float, d: float) -> float:
    """Drive-line scale from the Rabi period of a constant drive: pi / (T d)."""
    if d <= 0.0 or d > 1.0:
        raise InvalidAmplitude(f"d = {d} outside (0, 1]")
    if period <= 0.0:
        raise ValueError(f"period = {period} must be positive")
    return math.pi / (period * d)


def omega_c_select(d_values, omega_values) -> float:
    """Mean over d in [0, 1] of the least-squares line through (d, Omega_c).

    The mean of a linear function over an interval is its midpoint value,
    so this returns slope/2 + intercept.
    """
    d = np.asarray(d_values, dtype=float)
    om = np.asarray(omega_values, dtype=float)
    if d.size < 2:
        raise InsufficientData(f"{d.size} points; need at least 2 for a line")
    slope, intercept = np.polyfit(d, om, 1)
    return float(slope * 0.5 + intercept)
