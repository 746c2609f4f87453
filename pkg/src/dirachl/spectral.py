"""Resonances and the entire-function structure of the Jost function.

Resonances are the zeros of psi in the open lower half-plane.  They are
located by recursive rectangle subdivision: the zero count of each box is
the winding of psi along its boundary (equivalently the contour integral
of psi'/psi, evaluated both ways), boxes are split until they isolate a
single cluster, and roots are polished by Newton iteration with
differenced derivatives.  The located set feeds:

  * sector counting functions and their linear-density ratio (the zero
    count along each half-axis grows like (gamma/pi) r),
  * the forbidden-domain inequality 2 gamma Im z_n <= ln(eps + C/|z_n|),
    with C fitted as the smallest admissible constant,
  * the Hadamard product psi(0) e^{i gamma z} prod (1 - z/z_n) over
    modulus-ordered zeros,
  * the scattering phase: S = e^{-2i phi} with phi'(z) = gamma +
    sum Im z_n / |z - z_n|^2.

The phase antiderivative is known in closed form per zero (an arg
difference), but a truncated zero set misses the far tail whose leading
effect is a linear drift in z.  `phase_profile` therefore fits the two
free constants (offset and drift) to the known limits phi -> -alpha at
both ends of the axis, which is the two-point extrapolation in the
integration horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Grid,
    NumericalError,
    ResonanceSet,
    ValidationError,
)

__all__ = [
    "SearchRegion",
    "PhaseProfile",
    "winding_number",
    "find_resonances",
    "count_in_sector",
    "levinson_ratio",
    "forbidden_domain_check",
    "ForbiddenDomainReport",
    "hadamard_evaluate",
    "phase_derivative",
    "phase_profile",
    "cartwright_type",
]


@dataclass(frozen=True)
class SearchRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    max_depth: int = 60
    merge_tol: float = 1e-7

    def __post_init__(self):
        if self.im_max > 0:
            raise ValidationError("search region must lie in the closed lower half-plane")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValidationError("empty search region")
        for v in (self.re_min, self.re_max, self.im_min, self.im_max):
            if not math.isfinite(v):
                raise ValidationError("region extents must be finite")


@dataclass(frozen=True)
class PhaseProfile:
    grid: Grid
    phi: np.ndarray
    dphi: np.ndarray
    r_cut: float
    phi0: float
    tail_slope: float
    endpoint_spread: float


def winding_number(values: np.ndarray) -> int:
    """Winding count of a unimodular sequence sampled along increasing x.

    Normalized so that W = -(total phase change)/(2 pi): a scattering
    matrix S = e^{-2i phi} with phi(+inf) - phi(-inf) = pi W winds W times.
    Fails when consecutive phase jumps reach pi (grid too coarse).
    """
    vals = np.asarray(values, dtype=complex)
    if vals.size < 2:
        raise ValidationError("need at least two samples")
    mags = np.abs(vals)
    if np.any(mags < 1e-13):
        raise ValidationError("samples must be nonzero")
    steps = np.angle(vals[1:] / vals[:-1])
    if np.max(np.abs(steps)) > np.pi * (1.0 - 1e-9):
        raise NumericalError("phase jump >= pi between neighbors: grid too coarse")
    total = float(steps.sum())
    wind = -total / (2.0 * np.pi)
    return int(round(wind))


# ---------------------------------------------------------------------------
# argument-principle zero search
# ---------------------------------------------------------------------------

def _contour(re0, re1, im0, im1, per_edge):
    """Closed counterclockwise rectangle boundary, corner-aligned."""
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    bottom = re0 + t * (re1 - re0) + 1j * im0
    right = re1 + 1j * (im0 + t * (im1 - im0))
    top = re1 - t * (re1 - re0) + 1j * im1
    left = re0 + 1j * (im1 - t * (im1 - im0))
    return np.concatenate([bottom, right, top, left])


def _box_count(ev, re0, re1, im0, im1, per_edge=128, max_refine=7):
    """Zero count (with multiplicity) inside a rectangle, or None.

    The winding of psi along the boundary is accumulated from principal
    phase steps; the contour integral of psi'/psi (central differences
    along the contour, trapezoid in the parameter) is computed alongside
    and both must agree on an integer, otherwise the sampling is refined.
    Returns None when a zero sits (numerically) on the boundary or the
    count never stabilizes, so the caller can move the boundary.
    """
    for attempt in range(max_refine):
        zs = _contour(re0, re1, im0, im1, per_edge)
        vals = np.atleast_1d(ev(zs))
        amax = float(np.max(np.abs(vals)))
        mn = float(np.min(np.abs(vals)))
        if not np.all(np.isfinite(vals.view(float))) or mn < 1e-12 * max(1.0, amax):
            return None
        ratio = np.roll(vals, -1) / vals
        steps = np.angle(ratio)
        # central-difference log-derivative contour integral
        znext, zprev = np.roll(zs, -1), np.roll(zs, 1)
        dpsi = (np.roll(vals, -1) - np.roll(vals, 1)) / (znext - zprev)
        integrand = dpsi / vals
        dz = znext - zs
        integral = np.sum(0.5 * (integrand + np.roll(integrand, -1)) * dz) / (2j * np.pi)
        w_unwrap = steps.sum() / (2.0 * np.pi)
        n_unwrap = int(round(w_unwrap))
        ok = (np.max(np.abs(steps)) < 2.2
              and abs(w_unwrap - n_unwrap) < 0.2
              and abs(integral.real - n_unwrap) < 0.35
              and abs(integral.imag) < 0.35)
        if ok:
            return n_unwrap
        per_edge *= 2
    return None


def _polish(ev, z0: complex, tol: float, mult: int = 1, max_iter: int = 80,
            max_radius: float = np.inf) -> complex | None:
    """Newton with differenced derivative; the multiplicity-scaled step keeps
    convergence fast for multiple roots.  Steps are trust-region limited and
    the iteration reports failure (None) instead of wandering off."""
    z = complex(z0)
    cap = max_radius if math.isfinite(max_radius) else 1e6
    for _ in range(max_iter):
        delta = 1e-7 * max(1.0, abs(z))
        try:
            f = complex(np.atleast_1d(ev(np.array([z])))[0])
            fp = complex(np.atleast_1d(ev(np.array([z + delta])))[0]
                         - np.atleast_1d(ev(np.array([z - delta])))[0]) / (2 * delta)
        except Exception:
            return None
        if fp == 0 or not (math.isfinite(f.real) and math.isfinite(fp.real)):
            return None
        step = mult * f / fp
        if abs(step) > 0.5 * cap:
            step *= 0.5 * cap / abs(step)
        z = z - step
        if abs(z - z0) > max_radius:
            return None
        if abs(step) < 0.1 * tol:
            return z
    return z


def _confirm(ev, z: complex, tol: float, per_edge: int = 96) -> int | None:
    """Multiplicity of the zero at z by counting a small centered box."""
    for side in (2e3 * tol * (1.0 + abs(z)), 2e4 * tol * (1.0 + abs(z)), 1e-4 * (1.0 + abs(z))):
        cnt = _box_count(ev, z.real - side, z.real + side,
                         z.imag - side, z.imag + side, per_edge)
        if cnt is not None and cnt > 0:
            return cnt
    return None


def find_resonances(evaluator, region: SearchRegion, tol: float = 1e-9,
                    initial_per_edge: int = 256) -> ResonanceSet:
    """Locate all zeros in the region with multiplicities.

    Boxes whose count exceeds one are halved along their longer side;
    split lines are moved off zeros (never through them, keeping the boxes
    disjoint) by trying shifted fractions.  Every polished root is
    confirmed by recounting a small centered box, which also fixes the
    multiplicity; the multiplicity total must reproduce the
    argument-principle count of the whole region.  A zero pinned to the
    outer boundary raises a boundary-ambiguous failure rather than being
    dropped.
    """
    r = region
    total = _box_count(evaluator, r.re_min, r.re_max, r.im_min, r.im_max,
                       initial_per_edge)
    if total is None:
        raise NumericalError(
            "boundary-ambiguous: a zero sits on (or numerically near) the outer "
            "region boundary; adjust the region")
    found: list[tuple[complex, int]] = []
    stack = [((r.re_min, r.re_max, r.im_min, r.im_max), total, 0)]
    cluster = 64.0 * max(tol, r.merge_tol)
    while stack:
        (re0, re1, im0, im1), cnt, depth = stack.pop()
        if cnt == 0:
            continue
        width, height = re1 - re0, im1 - im0
        diam = math.hypot(width, height)
        center = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
        # opportunistic polish: accept if the confirmation count matches.
        # Membership must be essentially exact: split lines never pass
        # through zeros, and a loose margin would let this box claim a
        # neighbor's zero (the confirmation count cannot tell them apart).
        z = _polish(evaluator, center, tol, mult=cnt, max_radius=2.0 * diam)
        eps = 1e-9 * (1.0 + diam)
        if z is not None and (re0 - eps <= z.real <= re1 + eps
                              and im0 - eps <= z.imag <= im1 + eps):
            mult = _confirm(evaluator, z, tol)
            if mult == cnt:
                found.append((z, cnt))
                continue
        if diam < cluster:
            raise NumericalError(
                f"cluster at {center} did not resolve into a confirmed zero")
        if depth >= r.max_depth:
            raise NumericalError("subdivision depth limit exceeded")
        horizontal = width >= height
        # irrational-leaning fractions keep split lines off symmetric zero
        # configurations (an exactly centered zero defeats bisection)
        for frac in (0.51237346, 0.47621925, 0.54902211, 0.43812087,
                     0.57354779, 0.41752249):
            if horizontal:
                mid = re0 + frac * width
                kids = [(re0, mid, im0, im1), (mid, re1, im0, im1)]
            else:
                mid = im0 + frac * height
                kids = [(re0, re1, im0, mid), (re0, re1, mid, im1)]
            counts = [_box_count(evaluator, *k, max(initial_per_edge // 2, 128))
                      for k in kids]
            if None not in counts and sum(counts) == cnt:
                for k, c in zip(kids, counts):
                    stack.append((k, c, depth + 1))
                break
        else:
            raise NumericalError(
                f"could not place a split line off the zeros in box "
                f"[{re0},{re1}]x[{im0},{im1}]")

    merged: list[tuple[complex, int]] = []
    for z, m in sorted(found, key=lambda t: abs(t[0])):
        for i, (z0, m0) in enumerate(merged):
            if abs(z - z0) <= max(r.merge_tol, 16 * tol):
                merged[i] = (z0, m0 + m)
                break
        else:
            merged.append((z, m))
    total_mult = sum(m for _, m in merged)
    if total_mult != total:
        raise NumericalError(
            f"located multiplicities ({total_mult}) disagree with the "
            f"argument-principle count ({total}) of the region")
    keep = [(z, m) for z, m in merged if z.imag < 0]
    return ResonanceSet(tuple(keep))


# ---------------------------------------------------------------------------
# counting functions
# ---------------------------------------------------------------------------

def count_in_sector(R: ResonanceSet, r: float, delta: float) -> tuple[int, int]:
    """Zeros with |z| <= r, +-Re z >= 0 and delta < |arg z| < pi - delta,
    multiplicities included."""
    if not (0.0 <= delta <= 0.5 * np.pi):
        raise ValidationError("delta must lie in [0, pi/2]")
    n_plus = n_minus = 0
    for z, m in R.entries:
        if abs(z) > r:
            continue
        a = abs(np.angle(z))
        if not (delta < a < np.pi - delta):
            continue
        if z.real >= 0:
            n_plus += m
        if z.real <= 0:
            n_minus += m
    return n_plus, n_minus


def levinson_ratio(R: ResonanceSet, gamma: float, r: float) -> tuple[float, float]:
    """N+-(r, 0) normalized by the linear density (gamma/pi) r."""
    if r <= 0:
        raise ValidationError("r must be positive")
    n_plus, n_minus = count_in_sector(R, r, 0.0)
    scale = gamma * r / np.pi
    return n_plus / scale, n_minus / scale


@dataclass(frozen=True)
class ForbiddenDomainReport:
    eps: float
    c_fit: float
    all_satisfied: bool
    slack: tuple[float, ...]
    strip_depth: float
    strip_count: int


def forbidden_domain_check(R: ResonanceSet, gamma: float, eps: float,
                           strip_depth: float = 1.0) -> ForbiddenDomainReport:
    """Smallest C >= 0 with 2 gamma Im z_n <= ln(eps + C/|z_n|) for every
    zero, the per-zero slack at that C, and the count in the strip
    Im z > -strip_depth (finite for any depth)."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if not R.entries:
        return ForbiddenDomainReport(eps, 0.0, True, (), strip_depth, 0)
    cs = [abs(z) * (math.exp(2.0 * gamma * z.imag) - eps) for z, _ in R.entries]
    c_fit = max(0.0, max(cs))
    slack = tuple(math.log(eps + c_fit / abs(z)) - 2.0 * gamma * z.imag
                  for z, _ in R.entries)
    strip = sum(m for z, m in R.entries if z.imag > -strip_depth)
    return ForbiddenDomainReport(eps, c_fit, all(s >= -1e-12 for s in slack),
                                 slack, strip_depth, strip)


# ---------------------------------------------------------------------------
# Hadamard product and scattering phase
# ---------------------------------------------------------------------------

def hadamard_evaluate(R: ResonanceSet, psi0: complex, gamma: float, z: complex,
                      r_cut: float, merge_tol: float = 1e-9) -> complex:
    """Partial product psi(0) e^{i gamma z} prod_{|z_n| <= r_cut} (1 - z/z_n),
    factors ordered by increasing modulus."""
    if psi0 == 0:
        raise ValidationError("psi(0) must be nonzero")
    out = complex(psi0) * np.exp(1j * gamma * complex(z))
    for z_n, m in R.entries:              # entries are modulus-sorted
        if abs(z_n) > r_cut:
            break
        if abs(complex(z) - z_n) < merge_tol:
            raise ValidationError("evaluation point collides with a zero")
        out *= (1.0 - complex(z) / z_n) ** m
    return out


def phase_derivative(R: ResonanceSet, gamma: float, z: float, r_cut: float) -> float:
    """phi'(z) = gamma + sum over |z_n| <= r_cut of Im z_n / |z - z_n|^2."""
    acc = gamma
    for z_n, m in R.entries:
        if abs(z_n) > r_cut:
            break
        acc += m * z_n.imag / abs(z - z_n) ** 2
    return float(acc)


def _phase_sum(R: ResonanceSet, gamma: float, z: np.ndarray, r_cut: float) -> np.ndarray:
    """gamma z + sum of arg(z - z_n) - arg(-z_n): the exact antiderivative of
    the truncated phi'.  Both arguments have positive imaginary part, so the
    principal branch is continuous in z."""
    z = np.asarray(z, dtype=float)
    acc = gamma * z.astype(complex).real.copy()
    for z_n, m in R.entries:
        if abs(z_n) > r_cut:
            break
        acc = acc + m * (np.angle(z - z_n) - np.angle(-z_n))
    return acc


def _tail_model(R: ResonanceSet, gamma: float, r_cut: float):
    """Extrapolated contribution of the zeros beyond r_cut.

    The zero count grows linearly with density gamma/pi along each
    half-axis and the depths follow a slowly growing logarithmic law,
    fitted here to the outer half of the located zeros.  Returns callables
    (Phi(z), Phi'(z)) for the modeled tail of the phase and its
    derivative; each t-slice uses the same closed-form antiderivative as
    the explicit zeros, so Phi' is exactly the derivative of Phi.
    """
    if not R.entries or gamma <= 0.0:
        zero = lambda z: np.zeros(np.shape(np.atleast_1d(z)))
        return zero, zero
    outer = [(abs(z), -z.imag) for z, m in R.entries
             for _ in range(m) if 0.45 * r_cut <= abs(z) <= r_cut]
    if len(outer) >= 4:
        ts = np.log([t for t, _ in outer])
        ds = np.array([d for _, d in outer])
        b, a = np.polyfit(ts, ds, 1)
    else:
        a, b = (max((-z.imag for z, _ in R.entries), default=0.5), 0.0)
    spacing = np.pi / gamma
    horizon = max(300.0 * r_cut, 3000.0)
    lattices = []
    for sign in (+1.0, -1.0):
        side = [abs(z) for z, _ in R.entries
                if abs(z) <= r_cut and (z.real >= 0) == (sign > 0)]
        t_last = max(side) if side else r_cut - 0.5 * spacing
        k = np.arange(1, int((horizon - t_last) / spacing) + 1)
        t = t_last + spacing * k
        lattices.append(sign * t)
    t_all = np.concatenate(lattices)
    depth = np.maximum(a + b * np.log(np.abs(t_all)), 1e-3)
    zeros = t_all - 1j * depth

    base = np.angle(-zeros)

    def tail_phi(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty(z.shape)
        for lo in range(0, z.size, 256):
            blk = z[lo: lo + 256, None]
            out[lo: lo + 256] = np.sum(np.angle(blk - zeros) - base, axis=1)
        return out

    def tail_dphi(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty(z.shape)
        for lo in range(0, z.size, 256):
            blk = z[lo: lo + 256, None]
            out[lo: lo + 256] = np.sum(zeros.imag / np.abs(blk - zeros) ** 2, axis=1)
        return out

    return tail_phi, tail_dphi


def phase_profile(R: ResonanceSet, gamma: float, alpha, grid: Grid,
                  r_cut: float, z_limit: float,
                  spread_tol: float = 5e-2) -> PhaseProfile:
    """Scattering phase phi with S = e^{-2i phi} on the grid.

    The truncated zero sum integrates in closed form (arg differences).
    The zeros beyond r_cut are restored by the linear-density tail model,
    after which a residual linear drift and the constant phi(0) remain;
    these two are fixed by the limits phi(+-Z) -> -alpha evaluated on
    window-averaged horizons at z_limit and z_limit/2 (the two-point
    extrapolation in the integration horizon).  Calibration stays inside
    ~0.9 r_cut where the truncated sum still tracks the true derivative.
    The endpoint residual spread is reported; a large spread flags an
    undersized r_cut, but the profile is still returned.
    """
    alpha_v = float(getattr(alpha, "alpha", alpha))
    if z_limit <= 0:
        raise ValidationError("z_limit must be positive")
    zcal = min(z_limit, 0.9 * r_cut)
    tail_phi, tail_dphi = _tail_model(R, gamma, r_cut)

    # calibration: model(Z) + alpha = c0 + kappa Z + A/Z + (oscillation),
    # where A/Z is the smooth approach of the true phase to -alpha and the
    # oscillation is suppressed by the smooth window weights
    npts = 64
    zplus = np.linspace(0.5 * zcal, zcal, npts)
    wts = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(npts) / (npts - 1)))
    zboth = np.concatenate([zplus, -zplus])
    wboth = np.sqrt(np.concatenate([wts, wts]))
    vals = _phase_sum(R, gamma, zboth, r_cut) + tail_phi(zboth)
    design = np.stack([zboth, np.ones_like(zboth), 1.0 / zboth], axis=1)
    sol, *_ = np.linalg.lstsq(design * wboth[:, None], (vals + alpha_v) * wboth,
                              rcond=None)
    slope, c0 = float(sol[0]), float(sol[1])
    resid = (vals + alpha_v - design @ sol) * wboth
    spread = float(np.max(np.abs(resid)))

    nodes = grid.nodes()
    phi = _phase_sum(R, gamma, nodes, r_cut) + tail_phi(nodes) - slope * nodes - c0
    dphi = (np.array([phase_derivative(R, gamma, x, r_cut) for x in nodes])
            + tail_dphi(nodes) - slope)
    phi0 = float(_phase_sum(R, gamma, np.array([0.0]), r_cut)[0]
                 + tail_phi(0.0)[0] - c0)
    return PhaseProfile(grid, phi, dphi, r_cut, phi0, slope, spread)


def cartwright_type(evaluator, gamma: float, im_cap: float | None = None,
                    n_ladder: int = 14) -> tuple[float, float]:
    """Exponential-type indicators from log |psi(+-iy)| slopes.

    Least-squares slope over a geometric ladder of y; expected (0, 2 gamma)
    for a kernel supported on [0, gamma].  On overflow the ladder is
    shortened (with fewer than 4 usable points the call fails).
    """
    cap = (50.0 / gamma if im_cap is None else im_cap) * 0.9
    ys = np.geomspace(max(2.0 / gamma, cap / 128.0), cap, n_ladder)
    taus = []
    for sign in (+1.0, -1.0):
        vals = np.atleast_1d(evaluator(1j * sign * ys))
        logs = np.log(np.abs(vals))
        good = np.isfinite(logs)
        if good.sum() < 4:
            raise NumericalError("overflow left too few ladder points for the type fit")
        slope = np.polyfit(ys[good], logs[good], 1)[0]
        taus.append(float(slope))
    return taus[0], taus[1]
