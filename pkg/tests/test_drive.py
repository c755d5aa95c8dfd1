import json
import math

import numpy as np
import pytest

from qsta.drive import (
    DEFAULT_OMEGA_C,
    DriveConfig,
    PulseSchedule,
    effective_protocol,
    generate_linear_schedule,
    generate_nobie_schedule,
    nobie_amplitude,
)
from qsta.errors import AmplitudeOutOfRange, DegenerateSpectrum, InvalidDuration
from qsta.io_formats import schedule_from_dict, schedule_to_dict
from qsta.pauli import ket0
from qsta.protocols import DEFAULT_SAMPLE_TIME

DT = DEFAULT_SAMPLE_TIME


class TestDriveConfig:
    def test_detuning_derived(self):
        cfg = DriveConfig.from_detuning(1e8)
        assert cfg.detuning == pytest.approx(1e8, rel=1e-9)
        assert cfg.qubit_freq - cfg.drive_freq == cfg.detuning

    def test_validation(self):
        with pytest.raises(ValueError):
            DriveConfig(omega_c=0.0)
        with pytest.raises(ValueError):
            DriveConfig(dt=-1e-9)


class TestEffectiveProtocol:
    def test_half_ramp_endpoint(self):
        cfg = DriveConfig.from_detuning(1e8, omega_c=535.54e6)
        tau = 320 * DT
        p = effective_protocol(cfg, lambda t: 0.5 * t / tau, tau,
                               amplitude_rate=lambda t: 0.5 / tau)
        assert p.x(tau) == pytest.approx(-267.77e6, rel=1e-12)
        assert p.z(0.0) == -5e7
        assert p.dx(0.0) == pytest.approx(-267.77e6 / tau, rel=1e-12)

    def test_zero_drive_ground_state(self):
        cfg = DriveConfig.from_detuning(1e8)
        p = effective_protocol(cfg, lambda t: 0.0, 100 * DT)
        r = p.value(50 * DT)
        assert r.x == 0.0 and r.y == 0.0 and r.z == -5e7
        # ground state of -delta/2 * sigma_z with delta > 0 is |0>
        from qsta.pauli import eigensystem

        _, _, v_minus, _ = eigensystem(r)
        np.testing.assert_allclose(v_minus, ket0(), atol=1e-15)

    def test_resonant_constant_drive_is_pure_x(self):
        cfg = DriveConfig.from_detuning(0.0)
        p = effective_protocol(cfg, lambda t: 0.3, 100 * DT)
        r = p.value(42 * DT)
        assert r.z == 0.0 and r.y == 0.0
        assert r.x == pytest.approx(-0.3 * cfg.omega_c, rel=1e-12)

    def test_out_of_range_amplitude_raises(self):
        cfg = DriveConfig.from_detuning(1e8)
        p = effective_protocol(cfg, lambda t: 1.2, 100 * DT)
        with pytest.raises(AmplitudeOutOfRange):
            p.x(0.0)


class TestNobieAmplitude:
    def test_initial_value_of_reference_ramp(self):
        # direct evaluation of delta * omega_dot / (4 f^2) at omega_d = 0
        cfg = DriveConfig.from_detuning(1e8, omega_c=535.54e6)
        tau = 320 * DT
        omega_dot = 267.77e6 / tau
        value = nobie_amplitude(cfg, 0.0, omega_dot)
        expected = 1e8 * omega_dot / (4 * (5e7) ** 2)
        assert value == pytest.approx(expected, rel=1e-12)
        assert value == pytest.approx(3.7655e7, rel=1e-4)
        assert value / cfg.omega_c == pytest.approx(0.070312, abs=1e-6)

    def test_static_protocol_needs_no_drive(self):
        cfg = DriveConfig.from_detuning(1e8)
        assert nobie_amplitude(cfg, 1e7, 0.0) == 0.0

    def test_large_detuning_asymptote(self):
        omega_dot = 1e15
        for delta in (1e10, 1e11, 1e12):
            cfg = DriveConfig.from_detuning(delta)
            value = nobie_amplitude(cfg, 0.0, omega_dot)
            assert value == pytest.approx(omega_dot / delta, rel=1e-12)
        assert nobie_amplitude(DriveConfig.from_detuning(1e12), 0.0, omega_dot) < 1e4

    def test_sign_flip_antisymmetry(self):
        cfg = DriveConfig.from_detuning(1e8)
        a = nobie_amplitude(cfg, 2e7, 3e14)
        b = nobie_amplitude(cfg, -2e7, -3e14)
        assert b == -a

    def test_fully_degenerate_raises(self):
        cfg = DriveConfig.from_detuning(0.0)
        with pytest.raises(DegenerateSpectrum):
            nobie_amplitude(cfg, 0.0, 1e14)


class TestGenerateNobieSchedule:
    def test_reproduces_reference_amplitudes(self, shortcut320_reference):
        ref = shortcut320_reference
        cfg = DriveConfig.from_detuning(ref["detuning_rad_s"], omega_c=ref["omega_c_rad_s"])
        schedule = generate_nobie_schedule(cfg, ref["tau_samples"], ref["d_max"])
        dev = np.abs(schedule.amplitudes - np.array(ref["amplitudes"]))
        assert dev.max() <= 1e-5
        assert schedule.amplitudes[0] == pytest.approx(0.070308, abs=1e-5)
        assert schedule.amplitudes[-1] == pytest.approx(0.0023762, abs=1e-6)
        assert schedule.phase == math.pi / 2
        assert schedule.frequency == cfg.qubit_freq  # resonant carrier

    def test_duration_doubling_halves_amplitudes(self):
        # omega_dot halves and f depends only on the matched drive value, so
        # adjacent midpoint pairs of the doubled list sum to the original
        cfg = DriveConfig.from_detuning(1e8, omega_c=535.54e6)
        a320 = generate_nobie_schedule(cfg, 320, 0.5).amplitudes
        a640 = generate_nobie_schedule(cfg, 640, 0.5).amplitudes
        paired = a640[0::2] + a640[1::2]
        np.testing.assert_allclose(paired, a320, rtol=1e-4)
        # and the closed form itself is exactly linear in the ramp rate
        assert nobie_amplitude(cfg, 1e7, 5e14) == pytest.approx(
            2 * nobie_amplitude(cfg, 1e7, 2.5e14), rel=1e-15)

    def test_zero_detuning_rejected(self):
        cfg = DriveConfig.from_detuning(0.0)
        with pytest.raises(DegenerateSpectrum):
            generate_nobie_schedule(cfg, 320, 0.5)

    def test_too_fast_protocol_rejected(self):
        # 16 samples at this detuning pushes the peak amplitude past 1
        cfg = DriveConfig.from_detuning(1e8, omega_c=535.54e6)
        with pytest.raises(AmplitudeOutOfRange):
            generate_nobie_schedule(cfg, 16, 0.5)

    def test_hardware_bound_flag(self):
        cfg = DriveConfig.from_detuning(1e8)
        assert generate_nobie_schedule(cfg, 320, 0.5).hardware_bound
        assert not generate_nobie_schedule(cfg, 321, 0.5).hardware_bound


class TestGenerateLinearSchedule:
    def test_midpoint_formula(self):
        cfg = DriveConfig.from_detuning(1e8)
        schedule = generate_linear_schedule(cfg, 320, 0.5)
        tau = 320 * cfg.dt
        k = np.arange(320)
        expected = (k * cfg.dt + cfg.dt / 2) / (2 * tau)
        np.testing.assert_allclose(schedule.amplitudes, expected, rtol=1e-13)
        assert schedule.phase == 0.0
        assert schedule.frequency == cfg.qubit_freq - 1e8

    def test_zero_amplitude(self):
        cfg = DriveConfig.from_detuning(1e8)
        schedule = generate_linear_schedule(cfg, 64, 0.0)
        assert np.all(schedule.amplitudes == 0.0)

    def test_last_amplitude_closed_form(self):
        cfg = DriveConfig.from_detuning(1e8)
        for n in (16, 320, 624):
            schedule = generate_linear_schedule(cfg, n, 0.5)
            assert schedule.amplitudes[-1] == pytest.approx(
                0.5 * (1 - 1 / (2 * n)), rel=1e-13)

    def test_d_max_out_of_range(self):
        cfg = DriveConfig.from_detuning(1e8)
        with pytest.raises(AmplitudeOutOfRange):
            generate_linear_schedule(cfg, 320, 1.5)
        with pytest.raises(AmplitudeOutOfRange):
            generate_linear_schedule(cfg, 320, -0.1)


class TestPulseSchedule:
    def test_amplitude_range_checked_not_clipped(self):
        with pytest.raises(AmplitudeOutOfRange):
            PulseSchedule(dt=DT, amplitudes=np.array([0.5, 1.2]), frequency=1e9, phase=0.0)

    def test_hardware_granularity(self):
        with pytest.raises(InvalidDuration):
            PulseSchedule(dt=DT, amplitudes=np.ones(20) * 0.1, frequency=1e9,
                          phase=0.0, hardware_bound=True)

    def test_json_round_trip_bit_identical(self, shortcut320_reference):
        ref = shortcut320_reference
        cfg = DriveConfig.from_detuning(ref["detuning_rad_s"], omega_c=ref["omega_c_rad_s"])
        schedule = generate_nobie_schedule(cfg, ref["tau_samples"], ref["d_max"])
        payload = json.dumps(schedule_to_dict(schedule, {"family": "nobie"}))
        restored, meta = schedule_from_dict(json.loads(payload))
        assert restored.dt == schedule.dt
        assert restored.frequency == schedule.frequency
        assert restored.phase == schedule.phase
        assert np.array_equal(restored.amplitudes, schedule.amplitudes)
        assert meta["family"] == "nobie"
