"""Number-operator inverse engineering of driving Hamiltonians.

For a two-level Hamiltonian H(t) = x sx + y sy + z sz with magnitude
f(t) = |(x, y, z)|, the number operator N(t) = H(t)/f(t) has constant
eigenvalues +-1 and commutes with H at every instant.  A driving
Hamiltonian H_N(t) = a sx + b sy + c sz that keeps N invariant,

    dN/dt - i [N, H_N] = 0,

transports the instantaneous eigenstates of H exactly, i.e. realizes a
shortcut to adiabaticity.  Written out per Pauli component the invariance
condition reads

    (f x' - f' x) / f = 2 (z b - y c)
    (f y' - f' y) / f = 2 (x c - z a)
    (f z' - f' z) / f = 2 (y a - x b),

and this module constructs the two closed solution families:

* mutually dependent: H_N = H + (r x r') / (2 f^2) . sigma, the
  counter-diabatic form (gauge x a + y b + z c = f^2);
* mutually independent: one Pauli component eliminated outright, e.g.
  a = 0, b = (f' z - f z') / (2 x f), c = (f y' - f' y) / (2 x f),
  which needs fewer physical controls.

Residual evaluators quantify how well an arbitrary (a, b, c) satisfies
the conditions; both families satisfy them to rounding error.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateSpectrum, SingularControl
from .pauli import PauliVector, pauli_compose, spectral_norm
from .protocols import ControlProtocol

# |x| below this fraction of f marks the independent-family divisor singular
SINGULAR_RTOL = 1e-9


class SolutionFamily(enum.Enum):
    MUTUALLY_DEPENDENT = "mutually-dependent"
    MUTUALLY_INDEPENDENT = "mutually-independent"


class Axis(enum.Enum):
    X = 0
    Y = 1
    Z = 2


@dataclass(frozen=True)
class NobieSolution:
    """Driving-Hamiltonian coefficients (a, b, c) for a source protocol."""

    a: Callable[[float], float]
    b: Callable[[float], float]
    c: Callable[[float], float]
    family: SolutionFamily
    source: ControlProtocol
    eliminated_axis: Axis | None = None

    def coefficients(self, t: float) -> tuple[float, float, float]:
        return self.a(t), self.b(t), self.c(t)

    def hamiltonian(self, t: float) -> np.ndarray:
        return pauli_compose(PauliVector(*self.coefficients(t)))


def number_operator(r: PauliVector, scale: float = 1.0) -> np.ndarray:
    """N = H/f; involutory (N^2 = I), traceless, eigenvalues +-1."""
    f = r.magnitude
    if r.is_degenerate(scale):
        raise DegenerateSpectrum(f"f = {f}: number operator undefined")
    return pauli_compose(r) / f


def _eval(p: ControlProtocol, t: float):
    """Pointwise (x, y, z, x', y', z', f, f') with degeneracy check."""
    r = p.value(t)
    dx, dy, dz = p.slope(t)
    f = r.magnitude
    if r.is_degenerate():
        raise DegenerateSpectrum(f"f(t={t}) = {f}")
    fdot = (r.x * dx + r.y * dy + r.z * dz) / f
    return r.x, r.y, r.z, dx, dy, dz, f, fdot


def number_operator_rate(p: ControlProtocol, t: float) -> np.ndarray:
    """Analytic dN/dt from the quotient rule on (x, y, z)/f."""
    x, y, z, dx, dy, dz, f, fdot = _eval(p, t)
    f2 = f * f
    coeffs = PauliVector(
        (dx * f - x * fdot) / f2,
        (dy * f - y * fdot) / f2,
        (dz * f - z * fdot) / f2,
    )
    return pauli_compose(coeffs)


def invariance_residual(p: ControlProtocol, sol: NobieSolution, t: float) -> float:
    """Spectral norm of dN/dt - i [N, H_N] at time t (rad/s).

    Zero certifies that H_N keeps the number operator invariant at t.
    """
    n_dot = number_operator_rate(p, t)
    n = number_operator(p.value(t))
    h_n = sol.hamiltonian(t)
    residual = n_dot - 1j * (n @ h_n - h_n @ n)
    return spectral_norm(residual)


def dependent_solution(p: ControlProtocol) -> NobieSolution:
    """Counter-diabatic family: H_N(t) = H(t) + (r x r')/(2 f^2) . sigma."""

    def coeff(i: int) -> Callable[[float], float]:
        def fn(t: float) -> float:
            x, y, z, dx, dy, dz, f, _ = _eval(p, t)
            r = (x, y, z)
            dr = (dx, dy, dz)
            j, k = (i + 1) % 3, (i + 2) % 3
            cross = r[j] * dr[k] - r[k] * dr[j]
            return r[i] + cross / (2 * f * f)

        return fn

    return NobieSolution(
        a=coeff(0), b=coeff(1), c=coeff(2),
        family=SolutionFamily.MUTUALLY_DEPENDENT, source=p,
    )


def independent_solution(p: ControlProtocol, eliminated_axis: Axis = Axis.X) -> NobieSolution:
    """Family with one Pauli control eliminated outright.

    For eliminated_axis X the closed form divides by x(t); cyclic
    permutations divide by y or z.  Where the divisor component and its
    companion terms vanish identically (e.g. the driven-qubit ramp with
    y = 0 and constant z), the pole cancels algebraically and the reduced
    form x' z / (2 f^2) is used, finite even at x = 0.  Otherwise a
    divisor below 1e-9 * f raises SingularControl rather than returning
    huge coefficients.
    """
    i = eliminated_axis.value
    j, k = (i + 1) % 3, (i + 2) % 3

    def pair(t: float) -> tuple[float, float]:
        x, y, z, dx, dy, dz, f, fdot = _eval(p, t)
        r = (x, y, z)
        dr = (dx, dy, dz)
        # cancellation rule: with r_j = 0, dr_j = 0 and dr_k = 0 the j-component
        # numerator reduces to r_i * dr_i * r_k and the 1/r_i pole vanishes
        if r[j] == 0.0 and dr[j] == 0.0 and dr[k] == 0.0:
            return dr[i] * r[k] / (2 * f * f), 0.0
        if abs(r[i]) < SINGULAR_RTOL * f:
            raise SingularControl(
                f"divisor component {('x', 'y', 'z')[i]}(t={t}) = {r[i]} "
                f"below {SINGULAR_RTOL} * f = {SINGULAR_RTOL * f}"
            )
        s_j = (fdot * r[k] - f * dr[k]) / (2 * r[i] * f)
        s_k = (f * dr[j] - fdot * r[j]) / (2 * r[i] * f)
        return s_j, s_k

    def component(which: int) -> Callable[[float], float]:
        if which == i:
            return lambda t: 0.0
        if which == j:
            return lambda t: pair(t)[0]
        return lambda t: pair(t)[1]

    return NobieSolution(
        a=component(0), b=component(1), c=component(2),
        family=SolutionFamily.MUTUALLY_INDEPENDENT, source=p,
        eliminated_axis=eliminated_axis,
    )


def main_conditions_residual(
    p: ControlProtocol, sol: NobieSolution, t: float
) -> tuple[float, float, float]:
    """Left-minus-right residuals of the three invariance conditions at t.

    All three near zero certifies that the solution drives the system
    along the instantaneous eigenstates of the source Hamiltonian.
    """
    x, y, z, dx, dy, dz, f, fdot = _eval(p, t)
    a, b, c = sol.coefficients(t)
    r1 = (f * dx - fdot * x) / f - 2 * (z * b - y * c)
    r2 = (f * dy - fdot * y) / f - 2 * (x * c - z * a)
    r3 = (f * dz - fdot * z) / f - 2 * (y * a - x * b)
    return r1, r2, r3


def general_condition_residual(p: ControlProtocol, sol: NobieSolution, t: float) -> float:
    """Residual of a(fx'-f'x) + b(fy'-f'y) + c(fz'-f'z) = 0 at t.

    Any solution of the invariance conditions satisfies this identity; it
    is the constraint from which the independent family is derived.
    """
    x, y, z, dx, dy, dz, f, fdot = _eval(p, t)
    a, b, c = sol.coefficients(t)
    return a * (f * dx - fdot * x) + b * (f * dy - fdot * y) + c * (f * dz - fdot * z)
