import math

import numpy as np
import pytest

from qsta.drive import DriveConfig, PulseSchedule, generate_nobie_schedule
from qsta.errors import FitDiverged, InsufficientData, InvalidAmplitude
from qsta.evolve import hadamard_discriminate, propagate_schedule
from qsta.measure import (
    RunRecord,
    ShotConfig,
    exact_probability,
    omega_c_from_period,
    omega_c_select,
    rabi_fit,
    run_experiment,
    sample_counts,
)
from qsta.protocols import DEFAULT_SAMPLE_TIME

DT = DEFAULT_SAMPLE_TIME


class TestSampleCounts:
    def test_degenerate_probabilities(self):
        cfg = ShotConfig(shots=1024, repeats=5, seed=3)
        assert sample_counts(1.0, cfg) == (1.0,) * 5
        assert sample_counts(0.0, cfg) == (0.0,) * 5

    def test_values_are_count_fractions(self):
        cfg = ShotConfig(shots=1024, repeats=30, seed=4)
        for p in sample_counts(0.6749, cfg, label="x"):
            assert abs(p * 1024 - round(p * 1024)) < 1e-12

    def test_mean_within_binomial_error(self):
        cfg = ShotConfig(shots=1024, repeats=30, seed=5)
        values = sample_counts(0.6749, cfg, label="spot")
        se = math.sqrt(0.6749 * 0.3251 / (1024 * 30))
        assert abs(np.mean(values) - 0.6749) <= 3 * se

    def test_deterministic_per_seed_and_label(self):
        cfg = ShotConfig(shots=1024, repeats=10, seed=6)
        assert sample_counts(0.5, cfg, label="a") == sample_counts(0.5, cfg, label="a")
        assert sample_counts(0.5, cfg, label="a") != sample_counts(0.5, cfg, label="b")
        other = ShotConfig(shots=1024, repeats=10, seed=7)
        assert sample_counts(0.5, cfg, label="a") != sample_counts(0.5, other, label="a")

    def test_unbiased_over_many_repeats(self):
        cfg = ShotConfig(shots=1024, repeats=10_000, seed=8)
        values = sample_counts(0.5, cfg, label="bias")
        bound = 5 * 0.5 / math.sqrt(1024 * 10_000)
        assert abs(np.mean(values) - 0.5) < bound


class TestRabiFit:
    def test_noiseless_recovery(self):
        period = 58.66e-9
        t = np.linspace(0, 2 * period, 40)
        y = 0.5 + 0.5 * np.cos(2 * math.pi * t / period)
        fit = rabi_fit(t, y)
        assert fit.period == pytest.approx(period, rel=1e-3)
        assert fit.residual_rms < 1e-10
        assert fit.amplitude == pytest.approx(0.5, rel=1e-6)
        assert fit.offset == pytest.approx(0.5, abs=1e-8)

    def test_noisy_recovery_95th_percentile(self):
        period = 58.66e-9
        t = np.linspace(0, 2 * period, 40)
        truth = 0.5 + 0.5 * np.cos(2 * math.pi * t / period)
        errors = []
        for seed in range(100):
            rng = np.random.default_rng(seed)
            y = rng.binomial(1024, truth) / 1024
            fit = rabi_fit(t, y)
            errors.append(abs(fit.period - period) / period)
        assert np.quantile(errors, 0.95) < 0.01

    def test_constant_input_raises(self):
        t = np.linspace(0, 1e-7, 20)
        with pytest.raises(FitDiverged):
            rabi_fit(t, np.full(20, 0.7))

    def test_too_few_points(self):
        with pytest.raises(InsufficientData):
            rabi_fit(np.linspace(0, 1, 5), np.zeros(5))


class TestOmegaCFromPeriod:
    def test_reference_spot_value(self):
        assert omega_c_from_period(58.66e-9, 0.1) == pytest.approx(5.3554e8, rel=5e-4)

    def test_amplitude_doubling_halves_period(self):
        omega = 5.3554e8
        t1 = math.pi / (omega * 0.1)
        t2 = math.pi / (omega * 0.2)
        assert t1 / t2 == pytest.approx(2.0, rel=1e-12)
        assert omega_c_from_period(t1, 0.1) == pytest.approx(omega_c_from_period(t2, 0.2), rel=1e-12)

    def test_unit_case(self):
        assert omega_c_from_period(math.pi, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_invalid_amplitude(self):
        with pytest.raises(InvalidAmplitude):
            omega_c_from_period(1e-8, 0.0)
        with pytest.raises(InvalidAmplitude):
            omega_c_from_period(1e-8, -0.2)


class TestOmegaCSelect:
    def test_constant_inputs(self):
        assert omega_c_select([0.1, 0.3, 0.5], [5e8, 5e8, 5e8]) == pytest.approx(5e8, rel=1e-12)

    def test_two_point_line(self):
        # line through (0.1, 540e6) and (0.5, 531e6), evaluated at d = 0.5
        assert omega_c_select([0.1, 0.5], [540e6, 531e6]) == pytest.approx(531e6, rel=1e-12)

    def test_trend_recovery(self):
        rng = np.random.default_rng(21)
        d = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
        truth_mid = 535e6
        slope = -20e6
        omegas = truth_mid + slope * (d - 0.5) + rng.normal(0, 1e6, size=d.size)
        assert omega_c_select(d, omegas) == pytest.approx(truth_mid, rel=0.01)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            omega_c_select([0.1], [5e8])


class TestRunExperiment:
    def test_zero_schedule_all_ones(self):
        cfg = DriveConfig.from_detuning(0.0)
        schedule = PulseSchedule(dt=DT, amplitudes=np.zeros(32),
                                 frequency=cfg.qubit_freq, phase=0.0)
        rec = run_experiment(schedule, cfg, ShotConfig(shots=64, repeats=5, seed=1))
        assert rec.per_repeat_p0 == (1.0,) * 5
        assert rec.mean_p0 == 1.0

    def test_deterministic_record(self):
        cfg = DriveConfig.from_detuning(1e8)
        schedule = generate_nobie_schedule(cfg, 320, 0.5)
        shot_cfg = ShotConfig(shots=1024, repeats=30, seed=42)
        a = run_experiment(schedule, cfg, shot_cfg)
        b = run_experiment(schedule, cfg, shot_cfg)
        assert a == b

    def test_mean_matches_invariant(self):
        cfg = DriveConfig.from_detuning(1e8)
        schedule = generate_nobie_schedule(cfg, 320, 0.5)
        rec = run_experiment(schedule, cfg, ShotConfig(seed=9))
        assert rec.mean_p0 == pytest.approx(float(np.mean(rec.per_repeat_p0)), abs=1e-12)
        assert rec.duration_samples == 320
        assert rec.detuning == pytest.approx(1e8)

    def test_discrimination_centers_on_theory(self):
        cfg = DriveConfig.from_detuning(1e8)
        schedule = generate_nobie_schedule(cfg, 320, 0.5)
        theory = hadamard_discriminate(propagate_schedule(schedule, cfg).final_state)
        rec = run_experiment(schedule, cfg, ShotConfig(seed=10), discriminate=True)
        se = math.sqrt(max(theory * (1 - theory), 1e-9) / (1024 * 30))
        assert abs(rec.mean_p0 - theory) <= 4 * se
        assert exact_probability(schedule, cfg, discriminate=True) == pytest.approx(theory, abs=0)

    def test_depolarizing_mixes_toward_half(self):
        cfg = DriveConfig.from_detuning(0.0)
        schedule = PulseSchedule(dt=DT, amplitudes=np.zeros(32),
                                 frequency=cfg.qubit_freq, phase=0.0)
        rec = run_experiment(schedule, cfg, ShotConfig(shots=4096, repeats=50, seed=11),
                             depolarizing=0.2)
        # exact p0 = 1 mixed to 0.9
        assert rec.mean_p0 == pytest.approx(0.9, abs=0.01)


class TestCalibrationPipeline:
    def test_round_trip_recovers_omega_c(self):
        from qsta.cli import calibration_pipeline

        truth = 535.54e6
        for seed in (0, 1, 2):
            rep = calibration_pipeline(
                [0.1, 0.2, 0.3, 0.4, 0.5],
                ShotConfig(shots=1024, repeats=30, seed=seed),
                omega_c_true=truth,
            )
            rel = abs(rep["omega_c_selected_rad_s"] - truth) / truth
            assert rel < 0.01

    def test_noiseless_fit_floor(self):
        # exact simulated means, no shot noise: residual at rounding level
        cfg = DriveConfig.from_detuning(0.0, omega_c=535.54e6)
        d = 0.2
        grid = np.arange(1, 25) * 16
        durations = grid * cfg.dt
        means = [
            exact_probability(
                PulseSchedule(dt=cfg.dt, amplitudes=np.full(int(n), d),
                              frequency=cfg.qubit_freq, phase=0.0),
                cfg,
            )
            for n in grid
        ]
        fit = rabi_fit(durations, np.array(means))
        assert fit.residual_rms < 1e-10
        assert omega_c_from_period(fit.period, d) == pytest.approx(535.54e6, rel=1e-6)
