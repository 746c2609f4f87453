"""Acceptance suite: each test enforces one numbered criterion at its stated
tolerance and prints a pass line (run with -s to see them)."""

import time

import numpy as np

from dirachl.canonical import (
    Hamiltonian,
    fundamental_matrix,
    hamiltonian_from_potential,
    hermite_biehler,
    boundary_solution,
    make_hermite_evaluator,
    potential_from_hamiltonian,
)
from dirachl.core import BoundaryParam, make_grid, potential_from_values
from dirachl.forward import jost_function, make_psi_evaluator, psi_values
from dirachl.inverse import potential_to_scattering, recover_potential
from dirachl.spectral import (
    SearchRegion,
    cartwright_type,
    find_resonances,
    forbidden_domain_check,
    hadamard_evaluate,
    levinson_ratio,
    phase_profile,
)
from dirachl.transforms import (
    ResonanceMove,
    move_resonances,
    reflect_identity_residual,
    reflect_potential,
    shift_identity_residual,
)
from dirachl.synth import constant_potential, random_piecewise_potential

from conftest import rel_l2
from oracles import dense_sweep_zeros, psi_constant


def report(num, detail):
    print(f"\n[criterion {num:2d}] PASS  {detail}")


def test_criterion_1_oracle_agreement(alpha0):
    t0 = time.time()
    re = np.linspace(-20, 20, 41)
    im = np.linspace(-3, 0, 13)
    zz = (re[:, None] + 1j * im[None, :]).ravel()
    worst = 0.0
    for c in (1.0, 1.0 + 0.5j):
        q = constant_potential(c, n=2048)
        got = psi_values(q, alpha0, zz, method="rk4")
        want = psi_constant(c, 1.0, 0.0, zz)
        worst = max(worst, float(np.max(np.abs(got - want))))
        # the scalar entry point is the same scheme
        assert abs(jost_function(q, alpha0, complex(zz[5])) - got[5]) < 1e-12
    elapsed = time.time() - t0
    assert worst < 1e-8
    assert elapsed < 10.0
    report(1, f"max |psi - oracle| = {worst:.2e} on 41x13 grid, {elapsed:.1f}s")


def test_criterion_2_inverse_round_trip(alpha0):
    errs = {}
    for seed in range(20):
        q = random_piecewise_potential(seed, n=1024)
        S = potential_to_scattering(q, alpha0, t_max=8.0)
        qhat = recover_potential(S)
        errs[seed] = rel_l2(q, qhat.samples.values)
        assert errs[seed] <= 1e-2, f"seed {seed}: {errs[seed]:.3e}"
    # the scattering data remain a valid unimodular zero-winding matrix on
    # the stated real-axis band
    q = random_piecewise_potential(0, n=1024)
    S = potential_to_scattering(q, alpha0, t_max=8.0)
    band = np.linspace(-200 * np.pi, 200 * np.pi, 4001)
    sv = S.s_values(band)
    assert np.max(np.abs(np.abs(sv) - 1.0)) < 5e-3
    from dirachl.spectral import winding_number
    assert winding_number(sv / np.abs(sv)) == 0
    # refinement: doubling n reduces the error
    for seed in range(3):
        q2 = random_piecewise_potential(seed, n=2048)
        S2 = potential_to_scattering(q2, alpha0, t_max=8.0)
        e2 = rel_l2(q2, recover_potential(S2).samples.values)
        assert e2 < errs[seed]
    worst = max(errs.values())
    report(2, f"20 seeds at n=1024: worst rel err {worst:.2e}; halving h improves")


def test_criterion_3_resonance_completeness(unit_potential, alpha0):
    ev = make_psi_evaluator(unit_potential, alpha0)
    R = find_resonances(ev, SearchRegion(-30, 30, -6, 0), tol=1e-10)
    # located multiplicities already reproduce the argument-principle count
    # of the region (enforced inside find_resonances); all zeros are simple
    assert R.total() == len(R.entries)
    oracle = dense_sweep_zeros(lambda z: psi_constant(1.0, 1.0, 0.0, z),
                               (-30, 30), (-6, 0), step=0.1)
    assert len(oracle) == R.total()
    worst = max(min(abs(z - w) for w in oracle) for z, _ in R.entries)
    assert worst < 1e-6
    report(3, f"{R.total()} zeros; argument count == polished count; "
              f"max offset vs sweep {worst:.1e}")


def test_criterion_4_levinson_ratio(unit_resonances):
    r30 = levinson_ratio(unit_resonances, 1.0, 30.0)
    r60 = levinson_ratio(unit_resonances, 1.0, 60.0)
    for pm in (0, 1):
        assert 0.85 <= r60[pm] <= 1.15
        assert abs(r60[pm] - 1.0) < abs(r30[pm] - 1.0)
    report(4, f"ratios at 60: ({r60[0]:.3f}, {r60[1]:.3f}); at 30: "
              f"({r30[0]:.3f}, {r30[1]:.3f})")


def test_criterion_5_forbidden_domain(unit_potential, unit_resonances, alpha0):
    sets = [unit_resonances]
    for seed in (0, 1):
        q = random_piecewise_potential(seed, n=1024)
        ev = make_psi_evaluator(q, BoundaryParam(0.0))
        sets.append(find_resonances(ev, SearchRegion(-20, 20, -4, 0), tol=1e-9))
    c_fits = []
    for R in sets:
        rep = forbidden_domain_check(R, 1.0, eps=0.1, strip_depth=1.0)
        assert rep.all_satisfied
        assert all(s >= -1e-12 for s in rep.slack)
        c_fits.append(rep.c_fit)
    # strip population is finite and stable under region enlargement
    ev = make_psi_evaluator(unit_potential, alpha0)
    small = find_resonances(ev, SearchRegion(-30, 30, -4.5, 0), tol=1e-9)
    big = find_resonances(ev, SearchRegion(-45, 45, -4.5, 0), tol=1e-9)
    n_small = forbidden_domain_check(small, 1.0, 0.1, strip_depth=1.0).strip_count
    n_big = forbidden_domain_check(big, 1.0, 0.1, strip_depth=1.0).strip_count
    assert n_small == n_big
    report(5, f"C fits {['%.3f' % c for c in c_fits]}; strip count {n_small} "
              f"stable under enlargement")


def test_criterion_6_phase_formula(unit_potential, alpha0, unit_resonances):
    grid = make_grid(-10, 10, 400)
    z = grid.nodes()
    psi = psi_values(unit_potential, alpha0, z.astype(complex))
    s_direct = np.conj(psi) / psi
    devs = {}
    for rc in (60.0, 120.0):
        prof = phase_profile(unit_resonances, 1.0, alpha0, grid, rc, 0.9 * rc)
        devs[rc] = float(np.max(np.abs(np.exp(-2j * prof.phi) - s_direct)))
    assert devs[60.0] < 1e-2
    assert devs[120.0] < devs[60.0]
    report(6, f"|e^(-2i phi) - S| = {devs[60.0]:.2e} at r_cut 60, "
              f"{devs[120.0]:.2e} at 120")


def test_criterion_7_hadamard_reconstruction(unit_potential, alpha0, unit_resonances):
    psi0 = complex(psi_values(unit_potential, alpha0, 0.0 + 0.0j))
    pts = np.array([0.4, -0.9, 1.3, -1.7, 2.0 - 0.5j, -2.2 + 0.0j,
                    0.8 - 0.8j, -1.1 - 0.4j, 1.9 + 0.3j, 2.4])
    direct = psi_values(unit_potential, alpha0, pts.astype(complex))
    errs = np.empty((3, len(pts)))
    for i, rc in enumerate((15.0, 30.0, 60.0)):
        vals = np.array([hadamard_evaluate(unit_resonances, psi0, 1.0, z, rc)
                         for z in pts])
        errs[i] = np.abs(vals - direct)
    assert np.all(errs[0] > errs[1])
    assert np.all(errs[1] > errs[2])
    report(7, f"max err along r_cut 15/30/60: {errs[0].max():.3f} > "
              f"{errs[1].max():.3f} > {errs[2].max():.3f} at all 10 points")


def test_criterion_8_surgery(unit_potential, alpha0):
    q = unit_potential
    ev = make_psi_evaluator(q, alpha0)
    R = find_resonances(ev, SearchRegion(-8, 8, -3, 0), tol=1e-11)
    z0 = R.entries[0][0]
    z1 = z0 + 0.3
    qnew = move_resonances(q, alpha0, [ResonanceMove(z0, z1)])
    evn = make_psi_evaluator(qnew, alpha0)
    Rn = find_resonances(evn, SearchRegion(z1.real - 1, z1.real + 1,
                                           max(z1.imag - 1, -3), 0), tol=1e-11)
    best = min(Rn.entries, key=lambda e: abs(e[0] - z1))
    offset = abs(best[0] - z1)
    assert offset < 1e-5
    dists = []
    for step in (0.3, 0.1, 0.03):
        qs = move_resonances(q, alpha0, [ResonanceMove(z0, z0 + step)])
        dists.append(rel_l2(q, qs.samples.values))
    assert dists[0] > dists[1] > dists[2]
    report(8, f"relocated zero within {offset:.1e}; potential change "
              f"{dists[0]:.3f} > {dists[1]:.3f} > {dists[2]:.3f} as moves shrink")


def test_criterion_9_shift_reflect_identities():
    zs = np.linspace(-8, 8, 33) + 0j
    worst_s = worst_r = worst_inv = 0.0
    for seed in range(5):
        q = random_piecewise_potential(seed + 20, n=512)
        al = BoundaryParam(0.3 + 0.2 * seed)
        worst_s = max(worst_s, shift_identity_residual(q, al, 0.7 + 0.1 * seed, zs))
        worst_r = max(worst_r, reflect_identity_residual(q, al, zs))
        q2 = reflect_potential(reflect_potential(q, al), al)
        worst_inv = max(worst_inv, float(np.max(np.abs(
            q2.samples.values - q.samples.values))))
    assert worst_s < 1e-8
    assert worst_r < 1e-8
    assert worst_inv < 1e-12
    report(9, f"shift {worst_s:.1e}, reflection {worst_r:.1e}, "
              f"involution {worst_inv:.1e} over 5 potentials")


def test_criterion_10_canonical_round_trip():
    x = np.linspace(0, 1, 2049)
    tests = [
        potential_from_values(1.0, (0.8 + 0.3j) * np.exp(1j * x) * (1 + 0.5 * x ** 2)),
        potential_from_values(1.0, 1.2 * np.cos(2 * x) - 0.4j * (x + 0.3)),
    ]
    worst = 0.0
    for q in tests:
        H = hamiltonian_from_potential(q)
        mats = H.matrices()
        dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] ** 2
        assert np.max(np.abs(dets - 1.0)) < 1e-9
        assert fundamental_matrix(q, 0.0).det_drift() < 1e-9
        qhat = potential_from_hamiltonian(H)
        worst = max(worst, float(np.max(np.abs(qhat.samples.values - q.samples.values))))
    assert worst < 1e-4
    # diagonal Hamiltonian reduces to q1 = 0, q2 = a'/(2a)
    g = make_grid(0, 1, 2048)
    a = np.exp(0.3 * np.sin(np.pi * g.nodes()))
    qd = potential_from_hamiltonian(Hamiltonian(1.0, g, a, np.zeros(2049)))
    ap = np.gradient(a, g.nodes(), edge_order=2)
    assert np.max(np.abs(qd.samples.values.imag)) < 1e-12
    assert np.max(np.abs(-qd.samples.values.real - ap / (2 * a))) < 1e-6
    report(10, f"max round-trip error {worst:.2e}; det H = 1; diagonal case holds")


def test_criterion_11_boundary_and_hermite(unit_potential):
    q = unit_potential
    zs = [0.5, 2.0 - 0.4j, -1.2, -3.0 + 0.2j, 1.0 - 1.0j]
    worst_u = 0.0
    for av in (0.0, 0.4, np.pi / 2, 3.0):
        al = BoundaryParam(av)
        for z in zs:
            u1, u2 = boundary_solution(q, al, z)
            psi = complex(psi_values(q, al, complex(z)))
            worst_u = max(worst_u, abs(psi - np.exp(1j * z) * (u2 + 1j * u1)))
    worst_e = 0.0
    for z in zs:
        E = hermite_biehler(q, z)
        psi0 = complex(psi_values(q, BoundaryParam(0.0), complex(z)))
        worst_e = max(worst_e, abs(E + 1j * np.exp(-1j * z) * psi0))
    assert worst_u < 1e-8
    assert worst_e < 1e-8
    ev = make_hermite_evaluator(q)
    zz = (np.linspace(-4, 4, 9)[:, None] + 1j * np.linspace(0.2, 3, 5)[None, :]).ravel()
    assert np.all(np.abs(ev(zz)) > np.abs(ev(np.conj(zz))))
    report(11, f"boundary identity {worst_u:.1e}, E identity {worst_e:.1e}, "
               f"|E(z)| > |E(conj z)| sampled")


def test_criterion_12_cartwright_type(unit_potential, alpha0):
    ev = make_psi_evaluator(unit_potential, alpha0)
    tp, tm = cartwright_type(ev, 1.0)
    assert abs(tp) < 0.05
    assert abs(tm - 2.0) < 0.1
    report(12, f"type indicators ({tp:.4f}, {tm:.4f}) vs (0, 2)")
