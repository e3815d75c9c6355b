import math

import numpy as np
import pytest

from chainrevival.chain import (
    CouplingChain,
    as_state,
    assemble_matrix,
    gauge_normalize,
    is_mirror_symmetric,
)
from conftest import dense_eigvals


def test_chain_needs_two_elements():
    with pytest.raises(ValueError):
        CouplingChain([])


def test_chain_rejects_non_finite():
    with pytest.raises(ValueError):
        CouplingChain([1.0, math.nan])
    with pytest.raises(ValueError):
        CouplingChain([math.inf])


def test_two_element_matrix():
    np.testing.assert_array_equal(assemble_matrix(CouplingChain([1])), [[0, 1], [1, 0]])


def test_uniform_four_element_matrix():
    expected = np.array([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]], dtype=float)
    m = assemble_matrix(CouplingChain([1, 1, 1]))
    np.testing.assert_array_equal(m, expected)


def test_matrix_symmetric_zero_diagonal(rng):
    for n in range(2, 10):
        m = assemble_matrix(CouplingChain(rng.uniform(-3, 3, n - 1)))
        assert m.shape == (n, n)
        np.testing.assert_array_equal(m, m.T)
        np.testing.assert_array_equal(np.diag(m), 0)


@pytest.mark.parametrize(
    "couplings, mirror",
    [
        ((2, math.sqrt(2.5), math.sqrt(2.5), 2), True),
        ((1.302776, 1.732051, 2.302776), False),
        ((0.37,), True),
    ],
)
def test_mirror_symmetry(couplings, mirror):
    assert is_mirror_symmetric(CouplingChain(couplings)).is_mirror is mirror


def test_mirror_reports_asymmetry():
    res = is_mirror_symmetric(CouplingChain([1, 2, 1.5]))
    assert res.max_asymmetry == pytest.approx(0.5)
    assert is_mirror_symmetric(CouplingChain([1, 2, 1.5]), tol=0.6).is_mirror


def test_gauge_flip():
    assert gauge_normalize(CouplingChain([-1, 2])).couplings == (1, 2)
    assert gauge_normalize(CouplingChain([3, 0, 1])).couplings == (3, 0, 1)


def test_gauge_keeps_spectrum():
    signed = CouplingChain([-2, -math.sqrt(2.5), math.sqrt(2.5), -2])
    fixed = gauge_normalize(signed)
    assert fixed.couplings == pytest.approx((2, math.sqrt(2.5), math.sqrt(2.5), 2), abs=0)
    np.testing.assert_allclose(dense_eigvals(signed), [-3, -2, 0, 2, 3], atol=1e-12)
    np.testing.assert_allclose(dense_eigvals(fixed), dense_eigvals(signed), atol=1e-12)


def test_chain_json_roundtrip():
    chain = CouplingChain([1.5, 0.25, 3.0])
    again = CouplingChain.from_json(chain.to_json())
    assert again == chain
    assert chain.to_dict() == {"n": 4, "couplings": [1.5, 0.25, 3.0]}


def test_chain_json_size_mismatch():
    with pytest.raises(ValueError):
        CouplingChain.from_dict({"n": 3, "couplings": [1, 2, 3]})


def test_state_validation():
    with pytest.raises(ValueError):
        as_state([0, 0, 0])
    with pytest.raises(ValueError):
        as_state([1, 0], n=3)
    with pytest.raises(ValueError):
        as_state([1, math.nan])
