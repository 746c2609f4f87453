"""Canonical systems and the Hermite-Biehler function.

The unitary frame change T = (1/sqrt 2) [[i, -i], [1, 1]] turns the
half-line system into J u' + V u = z u with the real symmetric traceless
matrix V = [[q1, q2], [q2, -q1]], q = -q2 + i q1, J = [[0, 1], [-1, 0]].
With M(x, z) the fundamental matrix (M(0) = I), the z = 0 solution
r = M(., 0) generates the canonical-system Hamiltonian H = r^T r, a
positive unit-determinant matrix equal to I at 0 and constant beyond the
support.  The reverse direction needs only derivatives of the entries:

    p = a'/a,  w = (a b' - a' b)/a,  rho(x) = int_0^x w,
    q1 = -(w cos rho + p sin rho)/2,   q2 = (p cos rho - w sin rho)/2.

The second column phi of M at the support edge yields the
Hermite-Biehler function E(z) = phi1(gamma, z) - i phi2(gamma, z), equal
to -i e^{-i gamma z} psi_0(z); its zeros in the lower half-plane are the
Dirichlet resonances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundaryParam,
    Grid,
    NumericalError,
    Potential,
    SampledComplexFunction,
    ValidationError,
    make_grid,
)
from .forward import _expm_traceless, _segments

__all__ = [
    "MatrixPotential",
    "Hamiltonian",
    "FundamentalMatrix",
    "matrix_potential",
    "fundamental_matrix",
    "canonical_values",
    "hamiltonian_from_potential",
    "potential_from_hamiltonian",
    "boundary_solution",
    "hermite_biehler",
    "make_hermite_evaluator",
]

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class MatrixPotential:
    """Real symmetric traceless matrix data (q1, q2) with q = -q2 + i q1."""

    grid: Grid
    q1: np.ndarray
    q2: np.ndarray

    def complex_potential(self) -> np.ndarray:
        return -self.q2 + 1j * self.q1


@dataclass(frozen=True)
class Hamiltonian:
    """Positive unit-determinant Hamiltonian ((a, b), (b, (1+b^2)/a)).

    Stored through (a, b) so the determinant is one identically; constant
    continuation beyond gamma is implied.
    """

    gamma: float
    grid: Grid
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.shape != (self.grid.n + 1,) or b.shape != (self.grid.n + 1,):
            raise ValidationError("entry arrays must match the grid")
        if np.any(a <= 0):
            raise ValidationError("the (1,1) entry must stay positive")

    def h22(self) -> np.ndarray:
        return (1.0 + self.b ** 2) / self.a

    def matrices(self) -> np.ndarray:
        out = np.empty((self.grid.n + 1, 2, 2))
        out[:, 0, 0] = self.a
        out[:, 0, 1] = out[:, 1, 0] = self.b
        out[:, 1, 1] = self.h22()
        return out

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "n": self.grid.n,
                "a": [float(v) for v in self.a],
                "b": [float(v) for v in self.b]}

    @staticmethod
    def from_json(obj: dict) -> "Hamiltonian":
        gamma = float(obj["gamma"])
        n = int(obj["n"])
        return Hamiltonian(gamma, make_grid(0.0, gamma, n),
                           np.asarray(obj["a"], dtype=float),
                           np.asarray(obj["b"], dtype=float))


@dataclass(frozen=True)
class FundamentalMatrix:
    """M(x, z) at the grid nodes; columns are theta = M[:, :, 0] and
    phi = M[:, :, 1], with M(0) = I."""

    z: complex
    grid: Grid
    values: np.ndarray

    def at_edge(self) -> np.ndarray:
        return self.values[-1]

    def det_drift(self) -> float:
        dets = (self.values[:, 0, 0] * self.values[:, 1, 1]
                - self.values[:, 0, 1] * self.values[:, 1, 0])
        return float(np.max(np.abs(dets - 1.0)))


def matrix_potential(q: Potential) -> MatrixPotential:
    vals = q.samples.values
    return MatrixPotential(q.grid, np.imag(vals).copy(), -np.real(vals).copy())


def _v_matrix(qc) -> np.ndarray:
    """V = [[q1, q2], [q2, -q1]] for (batched) complex potential values."""
    q1 = np.imag(qc)
    q2 = -np.real(qc)
    out = np.empty(np.shape(qc) + (2, 2), dtype=float)
    out[..., 0, 0] = q1
    out[..., 0, 1] = q2
    out[..., 1, 0] = q2
    out[..., 1, 1] = -q1
    return out


def _canonical_rhs(qc, z, u):
    """u' = -J (z u - V u) for the frame-changed system."""
    V = _v_matrix(qc).astype(complex)
    zu = z[..., None, None] * u if np.ndim(z) else z * u
    return -_J @ (zu - V @ u)


def fundamental_matrix(q: Potential, z: complex, im_cap: float | None = None) -> FundamentalMatrix:
    """Fourth-order forward integration of J u' + V u = z u from M(0) = I."""
    cap = 50.0 / q.gamma if im_cap is None else im_cap
    if abs(np.imag(z)) > cap:
        raise NumericalError(f"|Im z| exceeds the growth cap {cap:.3g}")
    amps, chirps = q.cell_values()
    nodes = q.grid.nodes()
    h = q.grid.h
    out = np.empty((q.grid.n + 1, 2, 2), dtype=complex)
    u = np.eye(2, dtype=complex)
    out[0] = u
    zz = complex(z)
    for j in range(q.grid.n):
        x0, x1 = nodes[j], nodes[j + 1]
        xm = 0.5 * (x0 + x1)

        def qc_at(x):
            return amps[j] * np.exp(2j * chirps[j] * x)

        k1 = _canonical_rhs(qc_at(x0), zz, u)
        k2 = _canonical_rhs(qc_at(xm), zz, u + 0.5 * h * k1)
        k3 = _canonical_rhs(qc_at(xm), zz, u + 0.5 * h * k2)
        k4 = _canonical_rhs(qc_at(x1), zz, u + h * k3)
        u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[j + 1] = u
    if not np.all(np.isfinite(out.view(float))):
        raise NumericalError("canonical propagation overflowed")
    return FundamentalMatrix(zz, q.grid, out)


def canonical_values(q: Potential, z: np.ndarray) -> np.ndarray:
    """M(gamma, z) batched over z via exact per-segment exponentials.

    The coefficient -J(zI - V) is traceless with constant V per segment,
    so each segment contributes one closed-form exponential.  Chirped
    segments fall back to per-cell midpoint freezing (second order).
    """
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    u = np.broadcast_to(np.eye(2, dtype=complex), zz.shape + (2, 2)).copy()
    for lo, hi, amp, k in _segments(q):
        if k == 0.0:
            V = _v_matrix(amp).astype(complex)
            B = -_J @ (zz[:, None, None] * np.eye(2) - V)
            u = _expm_traceless(B, hi - lo) @ u
        else:
            ncell = max(1, int(round((hi - lo) / q.grid.h)))
            xs = np.linspace(lo, hi, ncell + 1)
            for a, b in zip(xs[:-1], xs[1:]):
                qc = amp * np.exp(2j * k * 0.5 * (a + b))
                V = _v_matrix(qc).astype(complex)
                B = -_J @ (zz[:, None, None] * np.eye(2) - V)
                u = _expm_traceless(B, b - a) @ u
    return u


def hamiltonian_from_potential(q: Potential) -> Hamiltonian:
    """H = r^T r with r = M(., 0); r is real (V is real and z = 0)."""
    M = fundamental_matrix(q, 0.0)
    r = M.values.real
    a = r[:, 0, 0] ** 2 + r[:, 1, 0] ** 2
    b = r[:, 0, 0] * r[:, 0, 1] + r[:, 1, 0] * r[:, 1, 1]
    return Hamiltonian(q.gamma, q.grid, a, b)


def _derivative(vals: np.ndarray, h: float) -> np.ndarray:
    """Central differences with second-order one-sided stencils at the ends."""
    out = np.empty_like(vals)
    out[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * h)
    out[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
    out[-1] = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * h)
    return out


def potential_from_hamiltonian(H: Hamiltonian) -> Potential:
    """Differentiate the entries and rotate back to q = -q2 + i q1."""
    if np.any(H.a <= 0):
        raise ValidationError("Hamiltonian outside the admissible class: a <= 0")
    h = H.grid.h
    ap = _derivative(H.a, h)
    bp = _derivative(H.b, h)
    p = ap / H.a
    w = (H.a * bp - ap * H.b) / H.a
    rho = np.empty_like(w)
    rho[0] = 0.0
    np.cumsum(0.5 * h * (w[1:] + w[:-1]), out=rho[1:])
    q1 = -0.5 * (w * np.cos(rho) + p * np.sin(rho))
    q2 = 0.5 * (p * np.cos(rho) - w * np.sin(rho))
    vals = -q2 + 1j * q1
    return Potential(H.gamma, SampledComplexFunction(H.grid, vals))


def boundary_solution(q: Potential, alpha: BoundaryParam, z: complex) -> tuple[complex, complex]:
    """u(gamma, z, alpha) = phi cos(alpha) - theta sin(alpha) from the
    fundamental-matrix columns; satisfies
    psi_alpha(z) = e^{i gamma z} (u2 + i u1)."""
    M = canonical_values(q, np.array([z]))[0]
    theta = M[:, 0]
    phi = M[:, 1]
    ca, sa = math.cos(alpha.alpha), math.sin(alpha.alpha)
    u = phi * ca - theta * sa
    return complex(u[0]), complex(u[1])


def hermite_biehler(q: Potential, z: complex) -> complex:
    """E(z) = phi1(gamma, z) - i phi2(gamma, z)."""
    M = canonical_values(q, np.array([z]))[0]
    return complex(M[0, 1] - 1j * M[1, 1])


def make_hermite_evaluator(q: Potential):
    """Vectorized z -> E(z) for zero searches."""
    def ev(z):
        scalar = np.isscalar(z)
        M = canonical_values(q, np.atleast_1d(np.asarray(z, dtype=complex)))
        vals = M[:, 0, 1] - 1j * M[:, 1, 1]
        return complex(vals[0]) if scalar else vals
    return ev
