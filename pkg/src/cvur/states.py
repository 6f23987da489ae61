"""Bipartite density matrices, two-qubit Bloch data and state families."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import BadTraceError, InvalidDimensionsError, InvalidRankError, NotPSDError
from .linalg import HERMITIAN_TOL, PSD_TOL
from .rng import complex_normal, make_rng

TRACE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state on ``C^dim_a (x) C^dim_b``.

    Build instances with :func:`validate` (or the family constructors); the
    spectrum computed during validation is kept alongside the matrix.
    """

    matrix: np.ndarray
    dim_a: int
    dim_b: int
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def purity(self) -> float:
        return float(np.sum(self.eigenvalues**2))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return self.purity >= 1.0 - tol

    def marginal(self, keep: str) -> np.ndarray:
        return linalg.partial_trace(self.matrix, self.dim_a, self.dim_b, keep)

    def sqrt(self) -> np.ndarray:
        return linalg.psd_sqrt(self.matrix, (self.eigenvalues, self.eigenvectors))

    def expect(self, op) -> float:
        return float(np.real(np.trace(self.matrix @ op)))

    def to_dict(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def validate(matrix, dim_a: int, dim_b: int) -> DensityMatrix:
    """Check that ``matrix`` is a density operator on ``dim_a x dim_b``.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clamped to zero and the trace is
    renormalized when it is within ``TRACE_TOL`` of one.

    Raises
    ------
    InvalidDimensionsError, NotHermitianError, BadTraceError, NotPSDError
    """
    m = linalg.as_matrix(matrix)
    if dim_a < 1 or dim_b < 1 or m.shape != (dim_a * dim_b, dim_a * dim_b):
        raise InvalidDimensionsError(f"shape {m.shape} does not match {dim_a}x{dim_b}")
    if dim_a * dim_b > linalg.MAX_DIM:
        raise InvalidDimensionsError(f"total dimension {dim_a * dim_b} exceeds {linalg.MAX_DIM}")
    w, v = linalg.hermitian_eig(m)
    tr = float(np.real(np.trace(m)))
    if abs(tr - 1.0) > TRACE_TOL:
        raise BadTraceError(f"trace {tr!r} differs from 1")
    if w[0] < -PSD_TOL:
        raise NotPSDError(f"smallest eigenvalue {w[0]:.3e} is below -{PSD_TOL:g}")
    m = 0.5 * (m + linalg.dagger(m))
    if w[0] < 0.0:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        m = (v * w) @ linalg.dagger(v)
        m = 0.5 * (m + linalg.dagger(m))
    elif tr != 1.0:
        m = m / tr
        w = w / tr
    m.setflags(write=False)
    w.setflags(write=False)
    v.setflags(write=False)
    return DensityMatrix(m, dim_a, dim_b, w, v)


def from_dict(data: dict) -> DensityMatrix:
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data["im"], dtype=float)
    if re.shape != im.shape:
        raise InvalidDimensionsError("real and imaginary parts differ in shape")
    return validate(re + 1j * im, int(data["dim_a"]), int(data["dim_b"]))


def from_json(text: str) -> DensityMatrix:
    return from_dict(json.loads(text))


def pure(vector, dim_a: int, dim_b: int) -> DensityMatrix:
    """Projector onto ``vector`` (normalized first)."""
    psi = np.asarray(vector, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return validate(np.outer(psi, psi.conj()), dim_a, dim_b)


def product(rho_a, rho_b) -> DensityMatrix:
    a = linalg.as_matrix(rho_a)
    b = linalg.as_matrix(rho_b)
    return validate(linalg.kron(a, b), a.shape[0], b.shape[0])


@dataclass(frozen=True)
class BlochDecomposition:
    """Two-qubit Bloch data: local vectors ``r`` (A), ``s`` (B) and correlations ``T``."""

    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def correlation_matrix(self) -> np.ndarray:
        """Connected-correlator matrix ``T - r s^T``."""
        return self.T - np.outer(self.r, self.s)


def _require_two_qubit(rho: DensityMatrix) -> None:
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise InvalidDimensionsError(f"expected a 2x2 state, got {rho.dim_a}x{rho.dim_b}")


_PAULI_A = [linalg.kron(p, I2) for p in PAULIS]
_PAULI_B = [linalg.kron(I2, p) for p in PAULIS]
_PAULI_AB = [[linalg.kron(p, q) for q in PAULIS] for p in PAULIS]


_BASIS = np.array([linalg.kron(p, q) for p in (I2, *PAULIS) for q in (I2, *PAULIS)])


def bloch_decompose(rho: DensityMatrix) -> BlochDecomposition:
    _require_two_qubit(rho)
    # Tr(X rho) for every sigma_i (x) sigma_j at once
    coef = np.einsum("kab,ba->k", _BASIS, rho.matrix).reshape(4, 4)
    if np.max(np.abs(coef.imag)) > HERMITIAN_TOL:
        raise InvalidDimensionsError("Bloch components have non-negligible imaginary part")
    coef = coef.real
    return BlochDecomposition(coef[1:, 0].copy(), coef[0, 1:].copy(), coef[1:, 1:].copy())


def bloch_compose(b: BlochDecomposition) -> DensityMatrix:
    m = np.eye(4, dtype=complex)
    for i in range(3):
        m = m + b.r[i] * _PAULI_A[i] + b.s[i] * _PAULI_B[i]
        for j in range(3):
            m = m + b.T[i, j] * _PAULI_AB[i][j]
    return validate(m / 4.0, 2, 2)


def schmidt_pure(theta: float) -> DensityMatrix:
    """``cos(theta)|00> + sin(theta)|11>``."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = math.cos(theta)
    psi[3] = math.sin(theta)
    return validate(np.outer(psi, psi.conj()), 2, 2)


SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def werner(p: float) -> DensityMatrix:
    """``p |singlet><singlet| + (1 - p) I/4`` for ``-1/3 <= p <= 1``."""
    if not (-1.0 / 3.0 - 1e-12 <= p <= 1.0 + 1e-12):
        raise NotPSDError(f"Werner parameter {p} outside [-1/3, 1]")
    m = p * np.outer(SINGLET, SINGLET.conj()) + (1.0 - p) / 4.0 * np.eye(4)
    return validate(m, 2, 2)


def maximally_entangled(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / math.sqrt(d)
    return psi


def isotropic(p: float, d: int) -> DensityMatrix:
    """``p |psi_d><psi_d| + (1 - p) I/d^2`` with ``psi_d = sum_i |ii>/sqrt(d)``."""
    if d < 2:
        raise InvalidDimensionsError("isotropic states need d >= 2")
    if not (-1.0 / (d * d - 1) - 1e-12 <= p <= 1.0 + 1e-12):
        raise NotPSDError(f"isotropic parameter {p} outside [-1/(d^2-1), 1]")
    psi = maximally_entangled(d)
    m = p * np.outer(psi, psi.conj()) + (1.0 - p) / (d * d) * np.eye(d * d)
    return validate(m, d, d)


def random_pure(seed: int, dim_a: int, dim_b: int) -> DensityMatrix:
    """Haar-random pure state: a normalized complex Gaussian vector."""
    psi = complex_normal(make_rng(seed), dim_a * dim_b)
    psi = psi / np.linalg.norm(psi)
    return validate(np.outer(psi, psi.conj()), dim_a, dim_b)


def random_mixed(seed: int, dim_a: int, dim_b: int, rank: int) -> DensityMatrix:
    """Ginibre-induced state ``G G^dagger / Tr(G G^dagger)`` of the given rank."""
    d = dim_a * dim_b
    if not 1 <= rank <= d:
        raise InvalidRankError(f"rank {rank} outside [1, {d}]")
    g = complex_normal(make_rng(seed), (d, rank))
    m = g @ linalg.dagger(g)
    m = 0.5 * (m + linalg.dagger(m))
    return validate(m / np.real(np.trace(m)), dim_a, dim_b)


def random_product_pure(seed: int, dim_a: int, dim_b: int) -> DensityMatrix:
    rng = make_rng(seed)
    a = complex_normal(rng, dim_a)
    b = complex_normal(rng, dim_b)
    psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
    return validate(np.outer(psi, psi.conj()), dim_a, dim_b)


def random_separable(seed: int, dim_a: int, dim_b: int, terms: int = 4) -> DensityMatrix:
    """Convex mixture of ``terms`` random pure product states with random weights."""
    rng = make_rng(seed)
    weights = rng.random(terms) + 1e-3
    weights = weights / weights.sum()
    m = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=complex)
    for w in weights:
        a = complex_normal(rng, dim_a)
        b = complex_normal(rng, dim_b)
        psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        m = m + w * np.outer(psi, psi.conj())
    m = 0.5 * (m + linalg.dagger(m))
    return validate(m / np.real(np.trace(m)), dim_a, dim_b)
