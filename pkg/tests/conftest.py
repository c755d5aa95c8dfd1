import json
from pathlib import Path

import numpy as np
import pytest

from qsta.drive import DriveConfig
from qsta.pauli import PauliVector
from qsta.protocols import make_protocol

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def shortcut320_reference():
    """Published 320-sample shortcut amplitude table and its parameters."""
    return json.loads((DATA_DIR / "shortcut320_reference.json").read_text())


@pytest.fixture
def qubit_cfg():
    """Drive config of the reference device at detuning 1e8 rad/s."""
    return DriveConfig.from_detuning(1e8)


def random_pauli_vector(rng, scale=1.0, min_fraction=0.0):
    """Random vector with magnitude in [min_fraction, 1] * scale."""
    while True:
        v = rng.uniform(-1, 1, size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-3:
            break
    target = rng.uniform(max(min_fraction, 1e-6), 1.0) * scale
    v = v / norm * target
    return PauliVector(*v)


def random_smooth_protocol(rng, tau=1.0, n_harmonics=3, x_floor=1.5, base_scale=1.0):
    """Trig-polynomial protocol with |x| and f bounded away from zero.

    x(t) keeps a constant offset larger than the sum of its harmonic
    amplitudes, so the independent-family divisor never vanishes.
    """
    def trig_component(offset, amps, freqs, phases):
        def fn(t):
            return offset + sum(a * np.sin(w * t + p) for a, w, p in zip(amps, freqs, phases))

        def dfn(t):
            return sum(a * w * np.cos(w * t + p) for a, w, p in zip(amps, freqs, phases))

        return fn, dfn

    def harmonics():
        amps = rng.uniform(0.05, 0.3, size=n_harmonics) * base_scale
        freqs = rng.uniform(0.5, 4.0, size=n_harmonics) * (2 * np.pi / tau)
        phases = rng.uniform(0, 2 * np.pi, size=n_harmonics)
        return amps, freqs, phases

    ax, wx, px = harmonics()
    sign = rng.choice([-1.0, 1.0])
    x_off = sign * (x_floor * base_scale + ax.sum())
    ay, wy, py = harmonics()
    az, wz, pz = harmonics()
    x_fn, dx_fn = trig_component(x_off, ax, wx, px)
    y_fn, dy_fn = trig_component(rng.uniform(-0.5, 0.5) * base_scale, ay, wy, py)
    z_fn, dz_fn = trig_component(rng.uniform(-0.5, 0.5) * base_scale, az, wz, pz)
    return make_protocol(x_fn, y_fn, z_fn, tau, dx=dx_fn, dy=dy_fn, dz=dz_fn,
                         label="random-smooth")
