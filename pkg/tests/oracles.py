"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the library's propagators: matrix
exponentials come from scipy.linalg.expm or an eigendecomposition written
directly from the 2x2 structure, zero hunting uses a brute-force grid
sweep refined by mpmath's Muller iteration, and integrals fall back to
very fine trapezoid sums.
"""

from __future__ import annotations

import mpmath
import numpy as np
import scipy.linalg as sla


def coefficient_matrix(c: complex, z: complex) -> np.ndarray:
    return np.array([[1j * z, c], [np.conj(c), -1j * z]])


def f0_constant(c: complex, gamma: float, z: complex) -> np.ndarray:
    """f(0, z) = expm(-A gamma) e^{i z gamma sigma3} for constant c."""
    term = np.diag([np.exp(1j * z * gamma), np.exp(-1j * z * gamma)])
    return sla.expm(-coefficient_matrix(c, z) * gamma) @ term


def f0_pieces(pieces, z: complex) -> np.ndarray:
    """Product of expm factors for a piecewise-constant potential given as
    (lo, hi, amplitude) triples tiling [0, gamma]; rightmost factor acts
    first when integrating backward from gamma."""
    gamma = pieces[-1][1]
    term = np.diag([np.exp(1j * z * gamma), np.exp(-1j * z * gamma)])
    out = term
    for lo, hi, amp in reversed(pieces):
        out = sla.expm(-coefficient_matrix(amp, z) * (hi - lo)) @ out
    return out


def psi_constant(c: complex, gamma: float, alpha: float, z) -> np.ndarray:
    """Jost function for a constant potential via the eigendecomposition
    mu = sqrt(|c|^2 - z^2) of the coefficient matrix (vectorized)."""
    z = np.asarray(z, dtype=complex)
    mu = np.sqrt(abs(c) ** 2 - z * z)
    small = np.abs(mu) < 1e-12
    mu_safe = np.where(small, 1.0, mu)
    ch = np.cosh(gamma * mu)
    sh = np.where(small, gamma, np.sinh(gamma * mu_safe) / mu_safe)
    f11 = (ch - 1j * z * sh) * np.exp(1j * z * gamma)
    f21 = -np.conj(c) * sh * np.exp(1j * z * gamma)
    ea = np.exp(-1j * alpha)
    return ea * f11 - np.conj(ea) * f21


def dense_sweep_zeros(fn, re_lim, im_lim, step=0.05, refine_tol=1e-12):
    """Brute-force zero sweep: locate local minima of |fn| on a dense grid,
    then refine each candidate with mpmath's derivative-free Muller method."""
    res = np.arange(re_lim[0], re_lim[1] + step, step)
    ims = np.arange(im_lim[0], im_lim[1] + step, step)
    Z = res[None, :] + 1j * ims[:, None]
    vals = np.abs(fn(Z.ravel())).reshape(Z.shape)
    cands = []
    for i in range(1, vals.shape[0] - 1):
        for j in range(1, vals.shape[1] - 1):
            v = vals[i, j]
            if v < 0.5 and v <= vals[i - 1:i + 2, j - 1:j + 2].min():
                cands.append(Z[i, j])
    zeros = []
    for z0 in cands:
        try:
            root = mpmath.findroot(lambda t: complex(fn(np.array([complex(t)]))[0]),
                                   complex(z0), solver="muller", tol=refine_tol)
        except (ValueError, ZeroDivisionError):
            continue
        root = complex(root)
        if abs(fn(np.array([root]))[0]) > 1e-6:
            continue
        if not (re_lim[0] - 1e-9 <= root.real <= re_lim[1] + 1e-9
                and im_lim[0] - 1e-9 <= root.imag <= im_lim[1] + 1e-9):
            continue
        if all(abs(root - w) > 1e-6 for w in zeros):
            zeros.append(root)
    return sorted(zeros, key=abs)


def brute_transform(values: np.ndarray, grid_left: float, h: float, z) -> np.ndarray:
    """Plain fine trapezoid of int f(s) e^{2izs} ds."""
    s = grid_left + h * np.arange(len(values))
    w = np.full(len(values), h)
    w[0] = w[-1] = 0.5 * h
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.exp(2j * np.outer(z, s)) @ (w * values)
