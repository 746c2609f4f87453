"""Seeded synthetic potentials for pipelines and round-trip experiments."""

from __future__ import annotations

import numpy as np

from .core import Piece, Potential, SampledComplexFunction, ValidationError, make_grid

__all__ = ["random_piecewise_potential", "constant_potential", "sampled_from_pieces"]


def sampled_from_pieces(gamma: float, n: int, pieces: tuple[Piece, ...]) -> Potential:
    """Node samples of an exactly piecewise potential.

    Interior junction nodes carry the mean of the one-sided limits (the
    value second-order quadratures and the recovery pipeline converge to);
    the support edges carry the inside limits.
    """
    grid = make_grid(0.0, gamma, n)
    nodes = grid.nodes()
    vals = np.zeros(n + 1, dtype=complex)
    counts = np.zeros(n + 1)
    for p in pieces:
        j0, j1 = grid.index_of(p.lo), grid.index_of(p.hi)
        if j1 <= j0:
            raise ValidationError("pieces must span at least one cell")
        seg = p.amp * np.exp(2j * p.chirp * nodes[j0:j1 + 1])
        vals[j0:j1 + 1] += seg
        counts[j0:j1 + 1] += 1.0
    if np.any(counts == 0) or np.any(counts > 2):
        raise ValidationError("pieces must tile [0, gamma] without gaps")
    vals /= counts
    return Potential(gamma, SampledComplexFunction(grid, vals), tuple(pieces))


def constant_potential(c: complex, gamma: float = 1.0, n: int = 1024) -> Potential:
    return sampled_from_pieces(gamma, n, (Piece(0.0, gamma, complex(c)),))


def random_piecewise_potential(seed: int, gamma: float = 1.0, n: int = 1024,
                               n_pieces: int = 8, max_amp: float = 2.0) -> Potential:
    """Equal-width piecewise-constant potential with amplitudes uniform in
    the disk of radius max_amp; deterministic per seed.  The last piece is
    kept away from zero so the support supremum genuinely sits at gamma.
    """
    if n % n_pieces != 0:
        raise ValidationError("n must be divisible by the piece count")
    rng = np.random.default_rng(seed)
    radii = max_amp * np.sqrt(rng.uniform(0.0, 1.0, n_pieces))
    phases = rng.uniform(0.0, 2.0 * np.pi, n_pieces)
    amps = radii * np.exp(1j * phases)
    while abs(amps[-1]) < 0.15 * max_amp:
        amps[-1] = max_amp * np.sqrt(rng.uniform(0.0, 1.0)) * np.exp(
            1j * rng.uniform(0.0, 2.0 * np.pi))
    edges = np.linspace(0.0, gamma, n_pieces + 1)
    pieces = tuple(Piece(float(edges[i]), float(edges[i + 1]), complex(amps[i]))
                   for i in range(n_pieces))
    return sampled_from_pieces(gamma, n, pieces)
