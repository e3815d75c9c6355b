"""Exit criteria, one test per criterion, tolerances fixed here.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest

from chainrevival.chain import CouplingChain, basis_state, gauge_normalize
from chainrevival.commensurability import NotCommensurate, is_commensurate
from chainrevival.dynamics import (
    fidelity,
    length_sensitivity_scan,
    perfect_transfer_check,
    propagate,
    revival_check,
    sample_trajectory,
)
from chainrevival.geometry import CouplingModel, fit_decay_to_ratios, separations_from_couplings
from chainrevival.inverse_design import Family, design, design_a4, design_a7, design_a9, design_m5
from chainrevival.spectral import a4_eigenvalues_closed_form, eigen_system, eigenvalues
from dataclasses import replace
from random_specs import feasible_designs

SEED = 12345


def dense_propagator(chain):
    """Oracle propagation through numpy's dense eigensolver."""
    a = np.asarray(chain.couplings)
    w, v = np.linalg.eigh(np.diag(a, 1) + np.diag(a, -1))

    def at(psi0, zs):
        return (np.exp(-1j * np.outer(zs, w)) * (v.T @ psi0)) @ v.T

    return at


def test_ac1_m5_roundtrip(criterion):
    design_m5(2, 3)
    eigen_system(design_m5(2, 3).chain)
    t0 = time.perf_counter()
    res = design_m5(2, 3, q=1)
    w = eigen_system(res.chain).eigenvalues
    elapsed = time.perf_counter() - t0
    coupling_err = np.max(np.abs(np.array(res.chain.couplings) - [2, math.sqrt(2.5), math.sqrt(2.5), 2]))
    eig_err = np.max(np.abs(w - np.array([-3, -2, 0, 2, 3])))
    ok = coupling_err < 1e-12 and eig_err < 1e-10 and elapsed < 0.010
    criterion("AC1 M5 design roundtrip", ok,
              f"eig err {eig_err:.2e} (<1e-10), {elapsed * 1e3:.2f} ms (<10 ms)")
    assert ok


def test_ac2_full_revival_with_phase(criterion):
    chain = design_m5(2, 3).chain
    inputs = [
        np.array([1, 1, 0, 0, 0]) / math.sqrt(2),
        np.array([1, np.exp(-1j * math.pi / 2), 0, 0, 0]) / math.sqrt(2),
    ]
    propagate(chain, inputs[0], 1.0)
    t0 = time.perf_counter()
    worst_f, worst_state = 1.0, 0.0
    for psi in inputs:
        for z in (2 * math.pi, 4 * math.pi):
            worst_f = min(worst_f, fidelity(chain, psi, z))
        worst_state = max(worst_state, np.max(np.abs(propagate(chain, psi, 2 * math.pi) - psi)))
    elapsed = time.perf_counter() - t0
    ok = worst_f >= 1 - 1e-9 and worst_state <= 1e-8 and elapsed < 0.100
    criterion("AC2 full revival incl. phase", ok,
              f"min F {worst_f:.15f}, state err {worst_state:.2e}, {elapsed * 1e3:.2f} ms")
    assert ok


def test_ac3_asymmetric_a4(criterion):
    res = design_a4(1, 3, s=math.sqrt(3), eps1=1, eps2=-1, q=1)
    c_err = np.max(np.abs(np.array(res.chain.couplings) - [1.302776, 1.732051, 2.302776]))
    e_err = np.max(np.abs(eigenvalues(res.chain) - [-3, -1, 1, 3]))
    x = fit_decay_to_ratios(res.chain, [1.0, 0.977, 0.954])
    # pinned from the first fit
    assert x == pytest.approx(12.383002174710702, rel=1e-9)
    layout = separations_from_couplings(res.chain, CouplingModel(res.chain.couplings[0], x, 1.0))
    r = layout.ratios()
    r_err = max(abs(r[1] - 0.977), abs(r[2] - 0.954))
    ok = c_err < 1e-5 and e_err < 1e-9 and r_err <= 0.002
    criterion("AC3 asymmetric A4 + geometry", ok,
              f"coupling err {c_err:.1e}, eig err {e_err:.1e}, kappa*L12 {x:.4f}, "
              f"ratios {r[1]:.4f}/{r[2]:.4f}")
    assert ok


def test_ac4_perfect_transfer_a7(criterion):
    design_a7(2, 1, 3)
    perfect_transfer_check(design_a7(2, 1, 3).chain)
    t0 = time.perf_counter()
    res = design_a7(2, 1, 3)
    verdict = perfect_transfer_check(res.chain)
    amp = abs(propagate(res.chain, basis_state(7, 0), math.pi)[-1])
    elapsed = time.perf_counter() - t0
    kraw = [0.5 * math.sqrt(k * (7 - k)) for k in range(1, 7)]
    c_err = np.max(np.abs(np.array(res.chain.couplings) - kraw))
    ok = (c_err <= 1e-12 and verdict.is_perfect and abs(verdict.transfer_length - math.pi) < 1e-9
          and amp >= 1 - 1e-8 and elapsed < 0.100)
    criterion("AC4 perfect transfer A7", ok,
              f"Krawtchouk err {c_err:.1e}, L0 {verdict.transfer_length}, |<e7|psi(pi)>| {amp:.12f}, "
              f"{elapsed * 1e3:.2f} ms")
    assert ok


def test_ac5_a9_closed_form(criterion):
    res = design_a9(1, 3, 2, 4)
    sq_err = np.max(np.abs(np.square(res.chain.couplings[:4]) - [2, 3.5, 4.5, 5]))
    e_err = np.max(np.abs(eigenvalues(res.chain) - np.arange(-4, 5)))
    ok = sq_err <= 1e-12 and e_err <= 1e-9
    criterion("AC5 A9 closed form", ok, f"a^2 err {sq_err:.1e}, eig err {e_err:.1e}")
    assert ok


# observed once with 4096 samples over one revival period
AC6_OBSERVED = 2.498245382448649e-4
AC6_THRESHOLD = 1.5 * AC6_OBSERVED


def test_ac6_reduced_array(criterion):
    chain = design_a7(100, 1, 10000, q=1).chain
    period = revival_check(chain).period
    traj = sample_trajectory(chain, basis_state(7, 0), period, 4096)
    inner = np.max(traj.intensities[:, 2:5].sum(axis=1))
    ok = inner < AC6_THRESHOLD and inner < 0.05
    criterion("AC6 reduced array confinement", ok,
              f"max inner power {inner:.4e} (threshold {AC6_THRESHOLD:.4e}), T {period:.6f}")
    assert ok


# largest F on the oracle grid below, pinned on first run
AC7_MAX_F = 0.9969364414111549


def test_ac7_negative_control(criterion):
    chain = CouplingChain([1, 1, 1])
    ok_c, verdict = is_commensurate(chain, tol=1e-6, max_denominator=10_000)
    step = 1e-4
    zs = np.arange(0.1 + step, 100 + step / 2, step)
    at = dense_propagator(chain)
    e1 = basis_state(4, 0)
    f_max = 0.0
    for block in np.array_split(zs, 20):
        f_max = max(f_max, float(np.max(np.abs(at(e1, block)[:, 0]))))
    # |dF/dz| <= 2 ||A||, so F between grid points exceeds the sampled max by at most ||A|| step
    bound = f_max + (1 + math.sqrt(5)) / 2 * step
    ok = (not ok_c and isinstance(verdict, NotCommensurate) and bound < 1 - 1e-6
          and f_max == pytest.approx(AC7_MAX_F, abs=1e-9))
    criterion("AC7 uniform chain negative control", ok,
              f"commensurate={ok_c} (residual {verdict.residual:.2e}), max F {f_max:.7f}, "
              f"certified bound {bound:.7f}")
    assert ok


def test_ac8_property_suites(criterion):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    results = {}

    worst = 0.0
    comp = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        chain = CouplingChain(rng.uniform(-5, 5, n - 1))
        psi = rng.normal(size=n) + 1j * rng.normal(size=n)
        psi /= np.linalg.norm(psi)
        z = rng.uniform(0, 100)
        worst = max(worst, abs(np.linalg.norm(propagate(chain, psi, z)) - 1))
        z1, z2 = rng.uniform(-50, 50, 2)
        comp = max(comp, np.max(np.abs(propagate(chain, propagate(chain, psi, z1), z2)
                                       - propagate(chain, psi, z1 + z2))))
        comp = max(comp, np.max(np.abs(propagate(chain, propagate(chain, psi, z1), -z1) - psi)))
    results["unitarity"] = (worst, 1e-12)
    results["composition/reversibility"] = (comp, 1e-10)

    rt = 0.0
    qc = 0.0
    for family in Family:
        for spec, res in feasible_designs(rng, family, 1000):
            rt = max(rt, np.max(np.abs(eigenvalues(res.chain) - res.expected_spectrum)))
            c = float(rng.uniform(0.1, 10))
            unit = design(replace(spec, q=1.0)).chain.as_array()
            scaled = design(replace(spec, q=c)).chain.as_array()
            qc = max(qc, np.max(np.abs(scaled - c * unit)) / max(1.0, np.max(c * unit)))
    results["design roundtrip (6 families)"] = (rt, 1e-9)
    results["q-covariance"] = (qc, 1e-12)

    a4 = 0.0
    for _ in range(10_000):
        a = rng.uniform(-5, 5, 3)
        a4 = max(a4, np.max(np.abs(a4_eigenvalues_closed_form(*a) - eigenvalues(CouplingChain(a)))))
    results["A4 closed form vs solver"] = (a4, 1e-8)

    gauge = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 10))
        chain = CouplingChain(rng.uniform(-5, 5, n - 1))
        gauge = max(gauge, np.max(np.abs(eigenvalues(gauge_normalize(chain)) - eigenvalues(chain))))
    results["gauge invariance"] = (gauge, 1e-10)

    elapsed = time.perf_counter() - t0
    ok = all(v < tol for v, tol in results.values()) and elapsed < 30
    detail = "; ".join(f"{k} {v:.1e}<{tol:.0e}" for k, (v, tol) in results.items())
    criterion("AC8 property suites", ok, f"{detail}; {elapsed:.1f} s (<30 s)")
    assert ok


# worst case over the standard basis e_1..e_5, pinned on first run
AC9_OBSERVED = 0.30159887666629


def test_ac9_length_sensitivity(criterion):
    chain = design_m5(2, 3).chain
    deficit = 0.0
    for i in range(5):
        for _, f in length_sensitivity_scan(chain, basis_state(5, i), [-0.05, 0.05]):
            deficit = max(deficit, 1 - f)
    assert deficit == pytest.approx(AC9_OBSERVED, abs=1e-9)
    ok = 0.01 <= deficit <= 0.15
    criterion("AC9 length sensitivity (+-5%)", ok,
              f"worst-case deficit {deficit:.4f} (required 0.01-0.15)")
    assert ok
