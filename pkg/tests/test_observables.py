import math

import numpy as np
import pytest

from cvur import observables as ob
from cvur.errors import InvalidDimensionsError


def test_spin32_entries():
    r3 = math.sqrt(3)
    expected_x = [[0, r3, 0, 0], [r3, 0, 2, 0], [0, 2, 0, r3], [0, 0, r3, 0]]
    expected_y = [[0, -1j * r3, 0, 0], [1j * r3, 0, -2j, 0], [0, 2j, 0, -1j * r3], [0, 0, 1j * r3, 0]]
    np.testing.assert_array_equal(ob.SPIN32_X, np.array(expected_x))
    np.testing.assert_array_equal(ob.SPIN32_Y, np.array(expected_y))


@pytest.mark.parametrize("axis", ["x", "y"])
def test_spin32_spectrum_and_projectors(axis):
    spec = ob.spin32(axis)
    np.testing.assert_allclose(spec.eigenvalues, [-3, -1, 1, 3], atol=1e-12)
    assert len(spec.projectors) == 4
    np.testing.assert_allclose(sum(spec.projectors), np.eye(4), atol=1e-12)
    for p in spec.projectors:
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
    np.testing.assert_allclose(sum(x * p for x, p in zip(spec.eigenvalues, spec.projectors)), spec.matrix, atol=1e-12)
    assert spec.norm == pytest.approx(3.0)


def test_degenerate_eigenvalues_cluster():
    spec = ob.eigenprojectors(np.diag([1.0, 1.0 + 1e-12, -1.0]))
    np.testing.assert_allclose(spec.eigenvalues, [-1.0, 1.0], atol=1e-11)
    assert np.trace(spec.projectors[1]).real == pytest.approx(2.0)


def test_pauli_from_vec_projectors():
    n = np.array([0.3, 0.4, math.sqrt(0.75)])
    spec = ob.pauli_from_vec(n)
    np.testing.assert_allclose(spec.projectors[1] - spec.projectors[0], spec.matrix)
    np.testing.assert_array_equal(spec.eigenvalues, [-1.0, 1.0])
    with pytest.raises(ValueError):
        ob.pauli_from_vec([0, 0, 0])
    with pytest.raises(ValueError):
        ob.pauli_from_vec([1, 1, 0])
    with pytest.raises(InvalidDimensionsError):
        ob.pauli_from_vec([1, 0])


def test_parse_tokens():
    toks = ob.parse_token_list("sx,n=0,0,2,spin32y")
    assert len(toks) == 3
    np.testing.assert_allclose(toks[1].matrix, np.diag([1, -1]))
    assert toks[2].dim == 4
    with pytest.raises(ValueError):
        ob.parse_token("sw")


def test_hermitian_unitary_check():
    assert ob.is_hermitian_unitary(ob.pauli_matrix([0, 1, 0]))
    assert ob.is_hermitian_unitary(-np.eye(2))
    assert not ob.is_hermitian_unitary(np.array([[1, 0], [0, 1j]]))
    assert not ob.is_hermitian_unitary(2 * np.eye(2))
