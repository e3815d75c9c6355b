import math
from dataclasses import replace
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chainrevival.chain import CouplingChain, basis_state, gauge_normalize, is_mirror_symmetric
from chainrevival.dynamics import perfect_transfer_check, propagate
from chainrevival.inverse_design import Family, design
from chainrevival.spectral import a4_eigenvalues_closed_form, eigenvalues
from random_specs import feasible_designs

couplings = st.integers(1, 8).flatmap(
    lambda m: arrays(np.float64, m, elements=st.floats(-5, 5, allow_nan=False))
)


def states(n):
    parts = arrays(np.float64, n, elements=st.floats(-1, 1, allow_nan=False))
    return st.tuples(parts, parts).map(lambda p: p[0] + 1j * p[1]).filter(
        lambda v: np.linalg.norm(v) > 1e-3
    )


chain_and_state = couplings.flatmap(lambda a: st.tuples(st.just(CouplingChain(a)), states(a.size + 1)))


@settings(max_examples=200, deadline=None)
@given(chain_and_state, st.floats(0, 100))
def test_unitarity(cs, z):
    chain, psi = cs
    out = propagate(chain, psi, z)
    assert abs(np.linalg.norm(out) - np.linalg.norm(psi)) < 1e-12 * max(1.0, np.linalg.norm(psi))


@settings(max_examples=200, deadline=None)
@given(chain_and_state, st.floats(-20, 20), st.floats(-20, 20))
def test_composition_and_reversibility(cs, z1, z2):
    chain, psi = cs
    two_step = propagate(chain, propagate(chain, psi, z1), z2)
    np.testing.assert_allclose(two_step, propagate(chain, psi, z1 + z2), atol=1e-10)
    np.testing.assert_allclose(propagate(chain, propagate(chain, psi, z1), -z1), psi, atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 4).flatmap(lambda m: arrays(np.float64, m, elements=st.floats(0.1, 3))),
    st.booleans(),
    st.floats(0, 30),
)
def test_mirror_dynamics_commutes_with_reversal(half, odd_middle, z):
    a = np.concatenate([half, half[::-1]]) if not odd_middle else np.concatenate([half, [1.0], half[::-1]])
    chain = CouplingChain(a)
    psi = np.linspace(1, 2, chain.n) * np.exp(1j * np.arange(chain.n))
    np.testing.assert_allclose(propagate(chain, psi[::-1], z), propagate(chain, psi, z)[::-1], atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(couplings)
def test_gauge_idempotent_and_isospectral(a):
    chain = CouplingChain(a)
    fixed = gauge_normalize(chain)
    assert gauge_normalize(fixed) == fixed
    np.testing.assert_allclose(eigenvalues(fixed), eigenvalues(chain), atol=1e-10 * max(1, np.abs(a).max()))


@settings(max_examples=300, deadline=None)
@given(arrays(np.float64, 3, elements=st.floats(-5, 5, allow_nan=False)))
def test_a4_closed_form_matches_solver(a):
    np.testing.assert_allclose(a4_eigenvalues_closed_form(*a), eigenvalues(CouplingChain(a)), atol=1e-8)


@pytest.mark.parametrize("family", list(Family))
def test_design_roundtrip(family, rng):
    for spec, res in feasible_designs(rng, family, 200):
        np.testing.assert_allclose(eigenvalues(res.chain), res.expected_spectrum, atol=1e-9)
        if family in (Family.M5, Family.A7, Family.A9):
            assert is_mirror_symmetric(res.chain).is_mirror


@pytest.mark.parametrize("family", list(Family))
def test_q_covariance(family, rng):
    for spec, res in feasible_designs(rng, family, 100):
        c = float(rng.uniform(0.1, 10))
        unit = design(replace(spec, q=1.0)).chain.as_array()
        scaled = design(replace(spec, q=c)).chain.as_array()
        np.testing.assert_allclose(scaled, c * unit, atol=1e-12 * max(1, c * unit.max()))


def dynamic_transfer(chain, labels, q):
    """Oracle: best end amplitude over every length allowed by the phase lattice.

    Transfer at L needs each gap d_k (in label units) to satisfy
    d_k q L / pi odd, so q L / pi is a multiple of 1 / gcd(d); one period
    covers j / gcd(d) for j = 1 .. 2 gcd(d).
    """
    gaps = np.diff(sorted(labels))
    g = reduce(math.gcd, (int(x) for x in gaps if x), 0)
    best = 0.0
    for j in range(1, 2 * g + 1):
        amp = abs(propagate(chain, basis_state(chain.n, 0), math.pi * j / (g * q))[-1])
        best = max(best, amp)
    return best >= 1 - 1e-8


def test_transfer_verdict_matches_dynamics(rng):
    for family in Family:
        for spec, res in feasible_designs(rng, family, 20):
            spectral = perfect_transfer_check(res.chain).is_perfect
            assert spectral == dynamic_transfer(res.chain, res.expected_labels, res.q), (spec, res)
