import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvur import states
from cvur.errors import BadTraceError, InvalidDimensionsError, InvalidRankError, NotHermitianError, NotPSDError


def test_validate_errors():
    with pytest.raises(InvalidDimensionsError):
        states.validate(np.eye(4) / 4, 2, 3)
    with pytest.raises(NotHermitianError):
        states.validate(np.array([[0.5, 0.1], [0.0, 0.5]]), 2, 1)
    with pytest.raises(BadTraceError):
        states.validate(np.eye(4) / 2, 2, 2)
    with pytest.raises(NotPSDError):
        states.validate(np.diag([1.2, -0.2, 0, 0]), 2, 2)


def test_validate_clamps_tiny_negative_eigenvalues():
    rho = states.validate(np.diag([1.0 + 1e-11, -1e-11, 0, 0]), 2, 2)
    assert rho.eigenvalues.min() >= 0
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-15)
    assert not rho.matrix.flags.writeable


def test_json_round_trip():
    rho = states.random_mixed(5, 2, 2, 3)
    back = states.from_json(rho.to_json())
    # validation may renormalize the trace by an ulp
    np.testing.assert_allclose(back.matrix, rho.matrix, rtol=0, atol=1e-15)
    assert (back.dim_a, back.dim_b) == (2, 2)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), rank=st.integers(1, 4))
def test_bloch_round_trip(seed, rank):
    rho = states.random_mixed(seed, 2, 2, rank)
    back = states.bloch_compose(states.bloch_decompose(rho))
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-12)


def test_schmidt_bloch_data():
    theta = 0.3
    b = states.bloch_decompose(states.schmidt_pure(theta))
    np.testing.assert_allclose(b.T, np.diag([math.sin(2 * theta), -math.sin(2 * theta), 1]), atol=1e-14)
    np.testing.assert_allclose(b.r, [0, 0, math.cos(2 * theta)], atol=1e-14)
    np.testing.assert_allclose(b.s, b.r, atol=1e-14)


def test_werner_and_singlet_bloch():
    b = states.bloch_decompose(states.werner(0.6))
    np.testing.assert_allclose(b.T, -0.6 * np.eye(3), atol=1e-14)
    np.testing.assert_allclose(b.r, 0, atol=1e-14)
    with pytest.raises(NotPSDError):
        states.werner(1.1)
    with pytest.raises(NotPSDError):
        states.werner(-0.5)


def test_isotropic_limits():
    rho = states.isotropic(1.0, 4)
    assert rho.purity == pytest.approx(1.0)
    np.testing.assert_allclose(rho.marginal("A"), np.eye(4) / 4, atol=1e-14)
    np.testing.assert_allclose(states.isotropic(0.0, 3).matrix, np.eye(9) / 9)


def test_random_families():
    assert states.random_pure(3, 3, 3).purity == pytest.approx(1.0)
    w = states.random_mixed(3, 2, 2, 2).eigenvalues
    assert np.sum(w > 1e-12) == 2
    with pytest.raises(InvalidRankError):
        states.random_mixed(3, 2, 2, 5)
    np.testing.assert_array_equal(states.random_mixed(9, 2, 2, 4).matrix, states.random_mixed(9, 2, 2, 4).matrix)


def test_random_separable_has_positive_partial_transpose():
    for seed in range(30):
        m = states.random_separable(seed, 2, 2).matrix.reshape(2, 2, 2, 2)
        pt = m.transpose(0, 3, 2, 1).reshape(4, 4)
        assert np.linalg.eigvalsh(pt).min() > -1e-12


def test_product_marginals():
    a = np.diag([0.7, 0.3])
    b = np.array([[0.5, 0.5], [0.5, 0.5]])
    rho = states.product(a, b)
    np.testing.assert_allclose(rho.marginal("A"), a)
    np.testing.assert_allclose(rho.marginal("B"), b)
