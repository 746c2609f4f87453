"""Forward scattering: Jost solutions, Jost function, scattering matrix.

The first-order system is f' = (Q(x) + i z sigma3) f with Q = [[0, q],
[conj q, 0]] and the terminal condition f(x, z) = e^{i z x sigma3} for
x >= gamma.  The boundary combination psi(z) = e^{-i alpha} f11(0, z) -
e^{i alpha} f21(0, z) is entire, has no zeros in the closed upper
half-plane, and S(z) = conj(psi(z)) / psi(z) on the real axis.

Two integrators coexist.  `integrate_jost` is a classical fourth-order
one-step scheme on the potential grid (one step per cell, coefficients
frozen per cell).  `psi_values` multiplies exact per-cell propagators:
each cell's coefficient matrix is constant (or constant after a chirp
gauge), so its exponential has a closed 2x2 form.  The exact product has
no z*h stability ceiling, which matters when psi is sampled far out on
the real axis for Fourier inversion of the kernel.

The kernel g with psi(z) = e^{-i alpha} + int_0^gamma g(s) e^{2izs} ds is
produced two ways: `jost_kernel` inverts the real-axis Fourier
representation (windowed, band-limited, so support edges smear at the
1/z_max scale), and `jost_kernel_direct` marches the transformation
kernel along characteristics, which keeps O(h^2) accuracy all the way to
the support edges and feeds the inverse pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundaryParam,
    JostRep,
    NumericalError,
    Potential,
    SampledComplexFunction,
    ValidationError,
    fourier_eval,
)

__all__ = [
    "Matrix2C",
    "JostBoundaryValue",
    "KernelBound",
    "integrate_jost",
    "jost_function",
    "psi_values",
    "make_psi_evaluator",
    "scattering_value",
    "scattering_values",
    "jost_kernel",
    "jost_kernel_direct",
    "transformation_rows",
    "eval_jost",
    "kernel_estimate",
]

DEFAULT_IM_CAP_SCALE = 50.0


@dataclass(frozen=True)
class Matrix2C:
    a11: complex
    a12: complex
    a21: complex
    a22: complex

    def det(self) -> complex:
        return self.a11 * self.a22 - self.a12 * self.a21

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


@dataclass(frozen=True)
class JostBoundaryValue:
    z: complex
    f0: Matrix2C


@dataclass(frozen=True)
class KernelBound:
    """Tail integrals of the potential and the transformation-kernel bound."""

    x: float
    eta: float
    zeta: float

    @property
    def bound(self) -> float:
        return math.exp(self.eta) * (1.0 + self.zeta) - 1.0


def _check_im_cap(q: Potential, z: np.ndarray, im_cap: float | None) -> float:
    cap = DEFAULT_IM_CAP_SCALE / q.gamma if im_cap is None else im_cap
    worst = float(np.max(np.abs(np.imag(z)))) if z.size else 0.0
    if worst > cap:
        raise NumericalError(
            f"|Im z| = {worst:.3g} exceeds the growth cap {cap:.3g} "
            f"(= {DEFAULT_IM_CAP_SCALE}/gamma by default); e^(2 gamma |Im z|) would overflow")
    return cap


def _coeff(amp, z):
    """Coefficient matrix [[iz, a], [conj a, -iz]] batched over z (and cells)."""
    a11 = 1j * z
    out = np.empty(np.broadcast(amp, z).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a11
    out[..., 0, 1] = amp
    out[..., 1, 0] = np.conj(amp)
    out[..., 1, 1] = -a11
    return out


def _expm_traceless(B: np.ndarray, t: float) -> np.ndarray:
    """exp(t*B) for traceless 2x2 stacks via cosh/sinh closed form."""
    lam2 = B[..., 0, 1] * B[..., 1, 0] - B[..., 0, 0] * B[..., 1, 1]
    lam2 = lam2 + B[..., 0, 0] ** 2 + B[..., 0, 0] * B[..., 1, 1]  # = -det(B)
    # for traceless B, -det(B) = B11^2 + B12*B21
    lam = np.sqrt(lam2.astype(complex))
    tl = t * lam
    ch = np.cosh(tl)
    small = np.abs(tl) < 1e-6
    lam_safe = np.where(small, 1.0, lam)
    sh_over = np.where(small, t * (1.0 + tl ** 2 / 6.0), np.sinh(tl) / lam_safe)
    out = sh_over[..., None, None] * B
    out[..., 0, 0] += ch
    out[..., 1, 1] += ch
    return out


def _sigma3_phase(theta: np.ndarray) -> np.ndarray:
    """diag(e^{i theta}, e^{-i theta}) as a batched matrix."""
    out = np.zeros(np.shape(theta) + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * theta)
    out[..., 1, 1] = np.exp(-1j * theta)
    return out


def _terminal(z: np.ndarray, gamma: float) -> np.ndarray:
    return _sigma3_phase(z * gamma)


def _segments(q: Potential) -> list[tuple[float, float, complex, float]]:
    """Constant-or-chirped integration segments (lo, hi, amp, chirp): the
    exact pieces when present, otherwise one segment per grid cell."""
    if q.pieces is not None:
        return [(p.lo, p.hi, complex(p.amp), float(p.chirp)) for p in q.pieces]
    amps, _ = q.cell_values()
    nodes = q.grid.nodes()
    return [(float(nodes[j]), float(nodes[j + 1]), complex(amps[j]), 0.0)
            for j in range(q.grid.n)]


def _propagate_exact(q: Potential, z: np.ndarray) -> np.ndarray:
    """f(0, z) by multiplying exact per-segment propagators backward from gamma.

    A segment with value a e^{2ikx} is gauged by e^{-ikx sigma3} to a
    constant segment at spectral parameter z - k, whose exponential is in
    closed 2x2 form; an exactly piecewise potential therefore costs one
    exponential per piece.
    """
    f = _terminal(z, q.gamma)
    for lo, hi, amp, k in reversed(_segments(q)):
        B = _coeff(amp, z - k)
        step = _expm_traceless(B, -(hi - lo))
        if k != 0.0:
            step = _sigma3_phase(np.full(z.shape, k * lo)) @ step \
                @ _sigma3_phase(np.full(z.shape, -k * hi))
        f = step @ f
    if not np.all(np.isfinite(f.view(float))):
        raise NumericalError("Jost propagation overflowed; reduce |Im z|")
    return f


def _propagate_rk4(q: Potential, z: np.ndarray) -> np.ndarray:
    """Classical fourth-order one-step scheme, one step per potential cell.

    Integrates the gauged system u' = e^{-izx s3} Q e^{izx s3} u backward
    from u(gamma) = I; then f(0, z) = u(0).  In this frame free evolution
    is exactly the identity and the oscillatory phase enters only through
    the coefficients.
    """
    amps, chirps = q.cell_values()
    nodes = q.grid.nodes()
    h = q.grid.h
    u = np.broadcast_to(np.eye(2, dtype=complex), z.shape + (2, 2)).copy()

    def rhs(x: float, j: int, umat: np.ndarray) -> np.ndarray:
        # gauged coefficients: (1,2) = q e^{-2izx}, (2,1) = conj(q) e^{+2izx};
        # for complex z these are not conjugates of each other
        a12 = amps[j] * np.exp(2j * (chirps[j] - z) * x)
        a21 = np.conj(amps[j]) * np.exp(2j * (z - chirps[j]) * x)
        out = np.empty_like(umat)
        out[..., 0, :] = a12[..., None] * umat[..., 1, :]
        out[..., 1, :] = a21[..., None] * umat[..., 0, :]
        return out

    for j in range(q.grid.n - 1, -1, -1):
        x1, x0 = nodes[j + 1], nodes[j]
        xm = 0.5 * (x0 + x1)
        k1 = rhs(x1, j, u)
        k2 = rhs(xm, j, u - 0.5 * h * k1)
        k3 = rhs(xm, j, u - 0.5 * h * k2)
        k4 = rhs(x0, j, u - h * k3)
        u = u - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(u.view(float))):
        raise NumericalError("Jost propagation overflowed; reduce |Im z|")
    return u


def integrate_jost(q: Potential, z: complex, im_cap: float | None = None) -> JostBoundaryValue:
    """f(0, z) by fourth-order backward integration from x = gamma."""
    zz = np.array([complex(z)])
    _check_im_cap(q, zz, im_cap)
    f = _propagate_rk4(q, zz)[0]
    return JostBoundaryValue(complex(z), Matrix2C(f[0, 0], f[0, 1], f[1, 0], f[1, 1]))


def _psi_from_f(f: np.ndarray, alpha: BoundaryParam) -> np.ndarray:
    ea = np.exp(-1j * alpha.alpha)
    return ea * f[..., 0, 0] - np.conj(ea) * f[..., 1, 0]


def psi_values(q: Potential, alpha: BoundaryParam, z, method: str = "exact",
               im_cap: float | None = None) -> np.ndarray | complex:
    """Vectorized Jost function.  method 'exact' multiplies closed-form cell
    exponentials; 'rk4' uses the fourth-order scheme."""
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_im_cap(q, zz, im_cap)
    prop = _propagate_exact if method == "exact" else _propagate_rk4
    vals = _psi_from_f(prop(q, zz), alpha)
    return complex(vals[0]) if scalar else vals


def make_psi_evaluator(q: Potential, alpha: BoundaryParam, method: str = "exact",
                       im_cap: float | None = None):
    """Callable z -> psi(z) accepting scalars or arrays."""
    def ev(z):
        return psi_values(q, alpha, z, method=method, im_cap=im_cap)
    return ev


def jost_function(q: Potential, alpha: BoundaryParam, z: complex,
                  im_cap: float | None = None) -> complex:
    f = integrate_jost(q, z, im_cap=im_cap)
    ea = np.exp(-1j * alpha.alpha)
    return complex(ea * f.f0.a11 - np.conj(ea) * f.f0.a21)


def scattering_value(q: Potential, alpha: BoundaryParam, z: float,
                     method: str = "rk4") -> complex:
    """S(z) = conj(psi(z)) / psi(z) for real z; unimodular by construction."""
    if abs(np.imag(complex(z))) > 1e-12:
        raise ValidationError("scattering matrix is defined on the real axis")
    psi = psi_values(q, alpha, float(np.real(z)), method=method)
    if abs(psi) < 1e-13:
        raise NumericalError("psi vanishes on the real axis: input violates the Jost class")
    return complex(np.conj(psi) / psi)


def scattering_values(q: Potential, alpha: BoundaryParam, z: np.ndarray,
                      method: str = "exact") -> np.ndarray:
    zz = np.asarray(z, dtype=float)
    psi = psi_values(q, alpha, zz.astype(complex), method=method)
    if np.min(np.abs(psi)) < 1e-13:
        raise NumericalError("psi vanishes on the real axis: input violates the Jost class")
    return np.conj(psi) / psi


# ---------------------------------------------------------------------------
# Fourier kernel of psi
# ---------------------------------------------------------------------------

def eval_jost(rep: JostRep, z, im_cap: float | None = None) -> np.ndarray | complex:
    """psi from its kernel: e^{-i alpha} + int_0^gamma g(s) e^{2izs} ds.

    The integral is exact for the piecewise-linear interpolant of g, which
    keeps the phase error flat in z (plain trapezoid degrades like (zh)^2).
    """
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    cap = DEFAULT_IM_CAP_SCALE / rep.gamma if im_cap is None else im_cap
    if np.max(np.abs(zz.imag)) > cap:
        raise NumericalError(f"|Im z| exceeds the growth cap {cap:.3g}")
    vals = np.exp(-1j * rep.alpha.alpha) + fourier_eval(rep.g, zz)
    return complex(vals[0]) if scalar else vals


def fourier_band(gamma: float, h: float, z_max: float, m: int) -> np.ndarray:
    """Real-axis sample points for kernel extraction: multiples of
    pi/(2 gamma) out to z_max, clipped to ~0.7 of the grid Nyquist rate
    (beyond that the linear kernel model cannot track e^{2izs})."""
    dz = math.pi / (2.0 * gamma)
    z_use = min(z_max, 0.7 * math.pi / (2.0 * h))
    K = int(math.floor(z_use / dz))
    if 2 * K + 1 > m + 1:
        raise ValidationError("m too small for z_max: need m >= 4 z_max gamma / pi")
    return np.arange(-K, K + 1) * dz


def jost_kernel(q: Potential, alpha: BoundaryParam, z_max: float | None = None,
                m: int | None = None, residual_tol: float = 1e-4,
                window_frac: float = 0.1, refine_iters: int | None = None,
                psi_samples=None) -> JostRep:
    """Kernel g by windowed Fourier inversion of real-axis samples of psi.

    psi - e^{-i alpha} is the one-sided transform of g.  The first estimate
    integrates (1/pi) int (psi(z) - e^{-i alpha}) e^{-2izs} dz over
    [-z_max, z_max] with a raised-cosine taper on the outer band fraction;
    that band limitation smears the support edges over ~pi/(2 z_max) and
    spills kernel mass just outside [0, gamma].  Because the support is
    known a priori, the estimate is then refined by alternating projections
    (restore measured in-band samples, zero outside the support), which
    pulls the spilled mass back.  The result is checked by re-evaluating
    psi on a held-out real grid; the call fails if that residual exceeds
    `residual_tol`.

    z is sampled at multiples of pi/(2 gamma) so the samples are Fourier
    coefficients on a period of 2 gamma; m is the transform size (power of
    two >= 2048).  `psi_samples`, if given, must be psi at those sample
    points (used to invert an externally modified Jost function).
    """
    gamma = q.gamma if q is not None else None
    if gamma is None:
        raise ValidationError("a potential is required")
    if z_max is None:
        z_max = 400.0 * math.pi / gamma
    if z_max * gamma < 100.0 * math.pi - 1e-9:
        raise ValidationError("z_max must be at least 100*pi/gamma")
    if m is None:
        m = 4096
    if m < 2048 or (m & (m - 1)) != 0:
        raise ValidationError("m must be a power of two >= 2048")

    zs = fourier_band(gamma, q.grid.h, z_max, m)
    z_use = float(zs[-1])
    dz = math.pi / (2.0 * gamma)
    if psi_samples is None:
        psi = psi_values(q, alpha, zs.astype(complex), method="exact")
    else:
        psi = np.asarray(psi_samples, dtype=complex)
        if psi.shape != zs.shape:
            raise ValidationError(f"psi_samples must have shape {zs.shape}")
    ghat = psi - np.exp(-1j * alpha.alpha)

    w = np.ones(zs.size)
    outer = np.abs(zs) > (1.0 - window_frac) * z_use
    w[outer] = 0.5 * (1.0 + np.cos(
        np.pi * (np.abs(zs[outer]) - (1.0 - window_frac) * z_use) / (window_frac * z_use)))

    nodes = q.grid.nodes()
    inv_phases = np.exp(-2j * np.outer(nodes, zs))
    g_vals = (dz / np.pi) * (inv_phases @ (w * ghat))

    # the band-limited estimate smears the support edges over ~pi/(2 z_max);
    # the interior is clean, so rebuild the few edge cells by extrapolation
    # and then correct the defect in the same piecewise-linear transform
    # model that eval_jost uses.
    smear = max(2, int(math.ceil(math.pi / (2.0 * z_use * q.grid.h))) + 1)
    if 4 * smear < q.grid.n:
        for sl_bad, sl_src in (
            (slice(0, smear), slice(smear, 3 * smear + 1)),
            (slice(q.grid.n + 1 - smear, q.grid.n + 1),
             slice(q.grid.n - 3 * smear, q.grid.n + 1 - smear)),
        ):
            coef = np.polyfit(nodes[sl_src], g_vals[sl_src], 2)
            g_vals[sl_bad] = np.polyval(coef, nodes[sl_bad])

    max_iters = 60 if refine_iters is None else max(refine_iters, 0)
    target = 0.2 * min(residual_tol, 1e-4)
    # forward transform pieces cached across the correction passes
    from .core import _phi_pair
    h = q.grid.h
    wexp = 2j * zs * h
    I0, I1 = _phi_pair(wexp)
    Acoef, Bcoef = I0 - I1, I1
    mu = Acoef + np.exp(-wexp) * Bcoef
    fwd_phases = np.conj(inv_phases).T
    for _ in range(max_iters):
        base = fwd_phases @ g_vals
        model = h * (mu * base
                     + g_vals[0] * (Acoef - mu) * fwd_phases[:, 0]
                     + g_vals[-1] * (np.exp(-wexp) * Bcoef - mu) * fwd_phases[:, -1])
        defect = ghat - model
        g_vals = g_vals + (dz / np.pi) * (inv_phases @ (w * defect))
        if refine_iters is None and float(np.max(np.abs(defect))) < target:
            break

    rep = JostRep(alpha, gamma, SampledComplexFunction(q.grid, g_vals))

    held = (np.arange(-120, 121) + 0.5) * (z_use / 241.0)
    if psi_samples is None:
        direct = psi_values(q, alpha, held.astype(complex), method="exact")
        resid = float(np.max(np.abs(rep.psi(held) - direct)))
        if resid > residual_tol:
            raise NumericalError(
                f"kernel reconstruction residual {resid:.3e} exceeds {residual_tol:.1e}; "
                f"increase z_max (used {z_use:.4g})")
    return rep


# ---------------------------------------------------------------------------
# transformation kernel by characteristics
# ---------------------------------------------------------------------------

def _node_values(q: Potential) -> np.ndarray:
    """Potential at the nodes: one-sided cell limits averaged at interior
    nodes, inside limits at the support edges."""
    amps, chirps = q.cell_values()
    nodes = q.grid.nodes()
    left = amps * np.exp(2j * chirps * nodes[:-1])    # value at cell's left node
    right = amps * np.exp(2j * chirps * nodes[1:])    # value at cell's right node
    vals = np.empty(q.grid.n + 1, dtype=complex)
    vals[0] = left[0]
    vals[-1] = right[-1]
    vals[1:-1] = 0.5 * (right[:-1] + left[1:])
    return vals


def transformation_rows(q: Potential, keep_all: bool = False):
    """March the transformation-kernel pair (G11, G21) down to x = 0.

    The kernel G(x, s) of the Jost solution satisfies, on the triangle
    x + s <= gamma,

        d/dx G11 = q(x) G21,     (d/dx - d/ds) G21 = conj(q(x)) G11,

    with boundary value G21(x, 0) = -conj(q(x)) and zero diagonal data on
    x + s = gamma.  A trapezoid predictor-corrector along the x lines and
    the characteristics x + s = const is second order.  Returns (d1, o2) at
    x = 0 on the full s grid, i.e. G11(0, .) and G21(0, .); with keep_all
    the whole triangle is returned as lists per x line.
    """
    n = q.grid.n
    h = q.grid.h
    amps, chirps = q.cell_values()
    nodes = q.grid.nodes()
    cell_at = amps * np.exp(2j * chirps * 0.5 * (nodes[:-1] + nodes[1:]))  # cell mean value
    node_vals = _node_values(q)

    # line at x = gamma: single node s = 0
    d1 = np.zeros(1, dtype=complex)
    o2 = np.array([-np.conj(node_vals[-1])], dtype=complex)
    all_lines = [(d1.copy(), o2.copy())] if keep_all else None

    for i in range(n - 1, -1, -1):
        qc = cell_at[i]
        m_new = n - i
        d_new = np.zeros(m_new + 1, dtype=complex)
        o_new = np.zeros(m_new + 1, dtype=complex)

        # characteristic + x-line trapezoid updates, solved pairwise:
        #   d_new[j] = d1[j] - (h qc / 2)(o2[j] + o_new[j])        j <= m_new-1
        #   o_new[j] = o2[j-1] - (h conj(qc)/2)(d1[j-1] + d_new[j]) j >= 1
        c1 = 0.5 * h * qc
        c2 = 0.5 * h * np.conj(qc)
        denom = 1.0 - c1 * c2
        j = np.arange(1, m_new)
        P = d1[j] - c1 * o2[j]
        R = o2[j - 1] - c2 * d1[j - 1]
        d_new[j] = (P - c1 * R) / denom
        o_new[j] = R - c2 * d_new[j]
        # boundary node s = 0: o is data, d couples to it directly
        o_new[0] = -np.conj(node_vals[i])
        d_new[0] = d1[0] - c1 * (o2[0] + o_new[0])
        # new diagonal node s = gamma - x_i: d vanishes there, o rides the
        # characteristic from the previous diagonal
        d_new[m_new] = 0.0
        o_new[m_new] = o2[m_new - 1] - c2 * (d1[m_new - 1] + d_new[m_new])

        d1, o2 = d_new, o_new
        if keep_all:
            all_lines.append((d1.copy(), o2.copy()))

    if keep_all:
        all_lines.reverse()  # index by x line, x = 0 first
        return d1, o2, all_lines
    return d1, o2


def jost_kernel_direct(q: Potential, alpha: BoundaryParam) -> JostRep:
    """Kernel g(s) = e^{-i alpha} G11(0, s) - e^{i alpha} G21(0, s) from the
    transformation kernel; second-order accurate up to the support edges."""
    d1, o2 = transformation_rows(q)
    ea = np.exp(-1j * alpha.alpha)
    g = ea * d1 - np.conj(ea) * o2
    return JostRep(alpha, q.gamma, SampledComplexFunction(q.grid, g))


# ---------------------------------------------------------------------------
# kernel norm bound
# ---------------------------------------------------------------------------

def kernel_estimate(q: Potential, x: float) -> KernelBound:
    """Tail integrals eta(x) = int_x^gamma |q|, zeta(x) = (int_x^gamma |q|^2)^(1/2)
    and the bound e^eta (1 + zeta) - 1 on the transformation-kernel norms."""
    if x < 0:
        raise ValidationError("x must be nonnegative")
    if x >= q.gamma:
        return KernelBound(x, 0.0, 0.0)
    nodes = q.grid.nodes()
    mags = np.abs(q.samples.values)
    xs = np.clip(nodes, x, q.gamma)
    # piecewise-linear |q| integrated over [x, gamma]: re-sample at the clip
    m_at_x = float(np.interp(x, nodes, mags))
    keep = nodes > x
    xs = np.concatenate(([x], nodes[keep]))
    m1 = np.concatenate(([m_at_x], mags[keep]))
    eta = float(np.trapezoid(m1, xs))
    zeta = float(math.sqrt(max(np.trapezoid(m1 ** 2, xs), 0.0)))
    return KernelBound(x, eta, zeta)
