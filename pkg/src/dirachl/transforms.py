"""Automorphisms of the Jost class: resonance surgery, shift, reflection.

A single resonance moves by multiplying psi with the rational factor
B(z) = (z - z1)/(z - z0), which stays entire and keeps the kernel support
because z0 is a zero of psi.  In kernel space the update is exact and
local: psi(z)/(z - z0) is the transform of

    G(s) = e^{-2i z0 s} ( -2i e^{-i alpha} - 2i int_0^s g(t) e^{2i z0 t} dt ),

(G solves G' = -2i (g + z0 G) with G(0) = -2i e^{-i alpha}; its vanishing
at s = gamma is equivalent to psi(z0) = 0), so g1 = g + (z0 - z1) G.  The
per-move update costs one cumulative Filon integral and loses nothing to
band limitation, unlike re-extracting the kernel from axis samples.

Shift and reflection act pointwise on the potential:

    (e_k q)(x) = e^{2ikx} q(x)   realizes   psi(z, e_k q) = psi(z - k, q),
    q_o(x) = e^{4i alpha} conj(q(x))
        realizes   conj(psi(-conj z, q)) = e^{2i alpha} psi(z, q_o),

i.e. multiplying by e^{2ikx} translates every resonance by +k, and the
reflection mirrors the resonance set across the imaginary axis.  Both
identities hold exactly for the piecewise-exact potential descriptors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundaryParam,
    JostRep,
    Piece,
    Potential,
    SampledComplexFunction,
    ValidationError,
)
from .core import _phi_pair
from .forward import jost_kernel, jost_kernel_direct
from .inverse import recover_from_jost

__all__ = [
    "ResonanceMove",
    "blaschke_modify",
    "move_resonances",
    "shift_potential",
    "reflect_potential",
    "shift_identity_residual",
    "reflect_identity_residual",
]


@dataclass(frozen=True)
class ResonanceMove:
    """Relocate one multiplicity unit of the zero at source to target."""

    source: complex
    target: complex

    def __post_init__(self):
        if self.source.imag >= 0 or self.target.imag >= 0:
            raise ValidationError("moves must stay in the open lower half-plane")


def _cumulative_filon(g: SampledComplexFunction, z0: complex) -> np.ndarray:
    """Running integral int_0^{s_j} g(t) e^{2i z0 t} dt, exact for the
    piecewise-linear interpolant of g."""
    h = g.grid.h
    s = g.grid.nodes()
    w = 2j * z0 * h
    I0, I1 = _phi_pair(np.array([w]))
    A = complex((I0 - I1)[0])
    B = complex(I1[0])
    phase = np.exp(2j * z0 * s[:-1])
    cells = h * phase * (A * g.values[:-1] + B * g.values[1:])
    out = np.empty(g.grid.n + 1, dtype=complex)
    out[0] = 0.0
    np.cumsum(cells, out=out[1:])
    return out


def blaschke_modify(rep: JostRep, moves, *, source_tol: float | None = None,
                    method: str = "volterra", z_max: float | None = None,
                    m: int | None = None):
    """Apply the rational factors and return (evaluator, new JostRep).

    Each move consumes one multiplicity unit of its source zero (a double
    zero moves entirely only with two identical moves).  Sources are
    verified against the representation by Newton polish; a source that is
    not a zero would introduce a pole and is rejected, as is a target in
    the closed upper half-plane.  method 'volterra' updates the kernel in
    closed form per move; 'fourier' re-extracts it from modified axis
    samples (band-limited at the support edges).
    """
    from .spectral import _polish

    moves = [mv if isinstance(mv, ResonanceMove) else ResonanceMove(*mv)
             for mv in moves]
    h = rep.g.grid.h
    for mv in moves:
        tol = source_tol
        if tol is None:
            # the representation's zeros carry the O(h^2) kernel error
            tol = max(1e-6, 25.0 * h * h * (1.0 + abs(mv.source)))
        z = _polish(lambda zz: rep.psi(zz), mv.source, 1e-12,
                    max_radius=10 * tol + 1e-3)
        if z is None or abs(z - mv.source) > tol:
            raise ValidationError(
                f"move source {mv.source} is not a zero of the representation "
                f"(within {tol:.1e})")

    sources = np.array([mv.source for mv in moves])
    targets = np.array([mv.target for mv in moves])

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        fac = np.ones_like(z)
        for z0, z1 in zip(sources, targets):
            fac = fac * (z - z1) / (z - z0)
        return rep.psi(z) * fac

    if method == "volterra":
        g = rep.g
        for z0, z1 in zip(sources, targets):
            G = np.exp(-2j * z0 * g.grid.nodes()) * (
                -2j * np.exp(-1j * rep.alpha.alpha)
                - 2j * _cumulative_filon(g, z0))
            g = SampledComplexFunction(g.grid, g.values + (z0 - z1) * G)
        new_rep = JostRep(rep.alpha, rep.gamma, g)
    elif method == "fourier":
        from .forward import fourier_band

        zm = 400.0 * math.pi / rep.gamma if z_max is None else z_max
        zs = fourier_band(rep.gamma, rep.g.grid.h, zm, m if m is not None else 4096)
        fake_q = Potential(rep.gamma, SampledComplexFunction(
            rep.g.grid, np.zeros(rep.g.grid.n + 1, dtype=complex)))
        new_rep = jost_kernel(fake_q, rep.alpha, z_max=zm, m=m,
                              psi_samples=evaluator(zs))
    else:
        raise ValidationError(f"unknown method {method!r}")
    return evaluator, new_rep


def move_resonances(q: Potential, alpha: BoundaryParam, moves,
                    t_max: float | None = None) -> Potential:
    """Potential whose Jost function is psi(., q) times the move factors."""
    rep = jost_kernel_direct(q, alpha)
    _, new_rep = blaschke_modify(rep, moves)
    return recover_from_jost(new_rep, t_max=t_max)


def shift_potential(q: Potential, k: float) -> Potential:
    """q_k(x) = e^{2ikx} q(x): psi(z, q_k) = psi(z - k, q), so every
    resonance translates by +k.  Moduli are unchanged."""
    x = q.grid.nodes()
    vals = q.samples.values * np.exp(2j * k * x)
    pieces = None
    if q.pieces is not None:
        pieces = tuple(Piece(p.lo, p.hi, p.amp, p.chirp + k) for p in q.pieces)
    return Potential(q.gamma, SampledComplexFunction(q.grid, vals), pieces)


def reflect_potential(q: Potential, alpha: BoundaryParam) -> Potential:
    """q_o(x) = e^{4i alpha} conj(q(x)): resonances reflect across the
    imaginary axis.  An involution (|e^{4i alpha}| = 1)."""
    phase = np.exp(4j * alpha.alpha)
    vals = phase * np.conj(q.samples.values)
    pieces = None
    if q.pieces is not None:
        pieces = tuple(Piece(p.lo, p.hi, phase * np.conj(p.amp), -p.chirp)
                       for p in q.pieces)
    return Potential(q.gamma, SampledComplexFunction(q.grid, vals), pieces)


def shift_identity_residual(q: Potential, alpha: BoundaryParam, k: float,
                            z: np.ndarray) -> float:
    """max |psi(z, e_k q) - psi(z - k, q)| over the samples."""
    from .forward import psi_values

    qk = shift_potential(q, k)
    z = np.asarray(z, dtype=complex)
    return float(np.max(np.abs(psi_values(qk, alpha, z)
                               - psi_values(q, alpha, z - k))))


def reflect_identity_residual(q: Potential, alpha: BoundaryParam,
                              z: np.ndarray) -> float:
    """max |conj(psi(-conj z, q)) - e^{2i alpha} psi(z, q_o)|."""
    from .forward import psi_values

    qo = reflect_potential(q, alpha)
    z = np.asarray(z, dtype=complex)
    lhs = np.conj(psi_values(q, alpha, -np.conj(z)))
    rhs = np.exp(2j * alpha.alpha) * psi_values(qo, alpha, z)
    return float(np.max(np.abs(lhs - rhs)))
