"""Exact 2x2 complex linear algebra over the Pauli basis.

Hamiltonians are represented by their real Pauli coefficients
(x, y, z) in rad/s (hbar = 1), matrices as dense complex ndarrays.
All operations are pure and all values immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

# f below this fraction of the caller's frequency scale counts as degenerate
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class PauliVector:
    """Real coefficients of x*sx + y*sy + z*sz, in rad/s."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"non-finite Pauli coefficients: {self}")

    @property
    def magnitude(self) -> float:
        """Field magnitude f = sqrt(x^2 + y^2 + z^2) >= 0."""
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def is_degenerate(self, scale: float = 1.0) -> bool:
        return self.magnitude < DEGENERACY_RTOL * scale


def ket0() -> np.ndarray:
    return np.array([1, 0], dtype=complex)


def ket1() -> np.ndarray:
    return np.array([0, 1], dtype=complex)


def pauli_compose(r: PauliVector) -> np.ndarray:
    """Hermitian, traceless matrix x*sx + y*sy + z*sz."""
    return np.array(
        [
            [r.z, r.x - 1j * r.y],
            [r.x + 1j * r.y, -r.z],
        ],
        dtype=complex,
    )


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB - BA; anti-Hermitian when A and B are Hermitian."""
    return a @ b - b @ a


def eigensystem(r: PauliVector, scale: float = 1.0):
    """Eigenvalues and orthonormal eigenvectors of pauli_compose(r).

    Returns ``(lam_minus, lam_plus, v_minus, v_plus)`` with lam = -f, +f.
    Eigenvectors follow a fixed phase convention: the first component of
    magnitude above 1e-12 is made real and positive.

    Raises DegenerateSpectrum when f < 1e-12 * scale.
    """
    f = r.magnitude
    if r.is_degenerate(scale):
        raise DegenerateSpectrum(f"f = {f} below degeneracy threshold")
    x, y, z = r.x, r.y, r.z
    # Two algebraically equivalent eigenvector forms; pick per sign(z) so the
    # leading entry never cancels.
    if z <= 0:
        v_minus = np.array([f - z, -(x + 1j * y)], dtype=complex)
        v_plus = np.array([x - 1j * y, f - z], dtype=complex)
    else:
        v_minus = np.array([x - 1j * y, -(f + z)], dtype=complex)
        v_plus = np.array([f + z, x + 1j * y], dtype=complex)
    v_minus = _fix_phase(v_minus / np.linalg.norm(v_minus))
    v_plus = _fix_phase(v_plus / np.linalg.norm(v_plus))
    return -f, f, v_minus, v_plus


def _fix_phase(v: np.ndarray) -> np.ndarray:
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    return v * (lead.conjugate() / abs(lead))


def expm_step(r: PauliVector, dt: float) -> np.ndarray:
    """Closed-form exp(-i * H * dt) for H = pauli_compose(r).

    Uses cos(f dt) I - i sin(f dt) H/f, with sin and cos sharing the same
    rounded argument so the step is unitary to rounding error; f -> 0
    returns the identity exactly.
    """
    f = r.magnitude
    angle = f * dt
    c = math.cos(angle)
    s = dt if angle == 0.0 else math.sin(angle) / f
    return np.array(
        [
            [c - 1j * s * r.z, -1j * s * (r.x - 1j * r.y)],
            [-1j * s * (r.x + 1j * r.y), c + 1j * s * r.z],
        ],
        dtype=complex,
    )


def is_hermitian(m: np.ndarray, tol: float = 1e-14) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(u @ u.conj().T - IDENTITY)) <= tol)


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(m, ord=2))
