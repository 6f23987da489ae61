"""Observables with resolved spectral projectors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidDimensionsError, NotHermitianError
from .states import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

CLUSTER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """Hermitian operator with ascending distinct eigenvalues and their projectors."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        """Operator (spectral) norm."""
        return float(np.max(np.abs(self.eigenvalues)))

    def square(self) -> np.ndarray:
        return self.matrix @ self.matrix


def eigenprojectors(h) -> ObservableSpec:
    """Group the spectrum of ``h`` into clusters and build one projector per cluster.

    Eigenvalues closer than ``CLUSTER_TOL`` times the spectral diameter are
    merged; the cluster value is their mean.
    """
    m = linalg.as_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise InvalidDimensionsError(f"expected a square matrix, got {m.shape}")
    if not linalg.is_hermitian(m):
        raise NotHermitianError("observable is not Hermitian")
    w, v = linalg.hermitian_eig(m)
    tol = CLUSTER_TOL * max(w[-1] - w[0], 1e-300)
    values, projectors = [], []
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[stop - 1] <= tol:
            stop += 1
        block = v[:, start:stop]
        values.append(float(np.mean(w[start:stop])))
        p = block @ linalg.dagger(block)
        projectors.append(0.5 * (p + linalg.dagger(p)))
        start = stop
    m = 0.5 * (m + linalg.dagger(m))
    return ObservableSpec(m, np.array(values), tuple(projectors))


def pauli_matrix(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def normalize_direction(n) -> np.ndarray:
    n = np.asarray(n, dtype=float).reshape(-1)
    if n.shape != (3,):
        raise InvalidDimensionsError(f"direction must have 3 components, got {n.shape}")
    length = float(np.linalg.norm(n))
    if length == 0.0:
        raise ValueError("direction vector is zero")
    if abs(length - 1.0) > 1e-6:
        raise ValueError(f"direction has length {length}, expected a unit vector")
    return n / length


def pauli_from_vec(n) -> ObservableSpec:
    """``n . sigma`` with projectors ``(I -/+ n . sigma)/2`` for outcomes -1, +1."""
    n = normalize_direction(n)
    s = pauli_matrix(n)
    return ObservableSpec(s, np.array([-1.0, 1.0]), ((I2 - s) / 2.0, (I2 + s) / 2.0))


_R3 = math.sqrt(3.0)
SPIN32_X = np.array(
    [[0, _R3, 0, 0], [_R3, 0, 2, 0], [0, 2, 0, _R3], [0, 0, _R3, 0]], dtype=complex
)
SPIN32_Y = np.array(
    [
        [0, -1j * _R3, 0, 0],
        [1j * _R3, 0, -2j, 0],
        [0, 2j, 0, -1j * _R3],
        [0, 0, 1j * _R3, 0],
    ],
    dtype=complex,
)

_R2 = math.sqrt(2.0)
SPIN1_X = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _R2
SPIN1_Y = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _R2
SPIN1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)


def spin32(axis: str) -> ObservableSpec:
    """The 4x4 spin matrices with spectrum (-3, -1, 1, 3)."""
    if axis == "x":
        return eigenprojectors(SPIN32_X)
    if axis == "y":
        return eigenprojectors(SPIN32_Y)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def spin1(axis: str) -> ObservableSpec:
    """Spin-1 operators on a qutrit, spectrum (-1, 0, 1)."""
    table = {"x": SPIN1_X, "y": SPIN1_Y, "z": SPIN1_Z}
    if axis not in table:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return eigenprojectors(table[axis])


def is_hermitian_unitary(h, tol: float = 1e-9) -> bool:
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if np.max(np.abs(m - linalg.dagger(m))) > tol:
        return False
    return bool(np.max(np.abs(m @ m - np.eye(m.shape[0]))) <= tol)


_NAMED = {
    "sx": (1.0, 0.0, 0.0),
    "sy": (0.0, 1.0, 0.0),
    "sz": (0.0, 0.0, 1.0),
}


def parse_token(token: str) -> ObservableSpec:
    """Parse ``sx``, ``sy``, ``sz``, ``spin32x``, ``spin32y`` or ``n=a,b,c``."""
    token = token.strip()
    if token in _NAMED:
        return pauli_from_vec(_NAMED[token])
    if token in ("spin32x", "spin32y"):
        return spin32(token[-1])
    if token.startswith("n="):
        parts = token[2:].split(",")
        if len(parts) != 3:
            raise ValueError(f"direction token needs 3 components: {token!r}")
        n = np.array([float(x) for x in parts])
        length = np.linalg.norm(n)
        if length == 0.0:
            raise ValueError("direction vector is zero")
        return pauli_from_vec(n / length)
    raise ValueError(f"unknown observable token {token!r}")


def parse_token_list(text: str) -> list[ObservableSpec]:
    """Split a comma-separated token list; ``n=a,b,c`` consumes three fields."""
    fields = [f.strip() for f in text.split(",") if f.strip()]
    out, i = [], 0
    while i < len(fields):
        if fields[i].startswith("n="):
            out.append(parse_token(",".join(fields[i : i + 3])))
            i += 3
        else:
            out.append(parse_token(fields[i]))
            i += 1
    return out
