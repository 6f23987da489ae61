"""Small dense complex linear algebra.

Everything here works on plain ``numpy`` arrays of dimension at most 16.
The Hermitian eigensolver is a cyclic complex Jacobi iteration with a fixed
sweep order, so identical input always gives bit-identical output.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidDimensionsError, NotHermitianError, NotPSDError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
MAX_DIM = 16

# eigenvalues below this fraction of the spectral radius are round-off
_ZERO_EIG_REL = 1e-14
_MAX_SWEEPS = 100
_DEGENERACY_REL = 1e-8


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise InvalidDimensionsError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _as_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidDimensionsError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = _as_square(m)
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*rb + k, j*cb + l)`` is ``a[i, j] * b[k, l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def partial_trace(m, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Reduce an operator on ``A (x) B`` to the subsystem named by ``keep``."""
    a = _as_square(m)
    if dim_a < 1 or dim_b < 1 or a.shape[0] != dim_a * dim_b:
        raise InvalidDimensionsError(
            f"matrix of side {a.shape[0]} is not {dim_a}x{dim_b} bipartite"
        )
    t = a.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _fix_phase(v: np.ndarray) -> None:
    # make the first non-negligible component of each column real positive
    for k in range(v.shape[1]):
        col = v[:, k]
        mags = np.abs(col)
        idx = int(np.argmax(mags > 1e-8 * mags.max()))
        z = col[idx]
        if z != 0:
            v[:, k] = col * (abs(z) / z)


def _gram_schmidt_clusters(w: np.ndarray, v: np.ndarray) -> None:
    n = len(w)
    diameter = w[-1] - w[0] if n else 0.0
    tol = _DEGENERACY_REL * max(diameter, abs(w[-1]) if n else 0.0, 1e-300)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= tol:
            stop += 1
        if stop - start > 1:
            for k in range(start, stop):
                col = v[:, k].copy()
                for j in range(start, k):
                    col -= np.vdot(v[:, j], col) * v[:, j]
                v[:, k] = col / np.linalg.norm(col)
        start = stop


def _jacobi(a: list, n: int, scale: float) -> tuple[np.ndarray, np.ndarray]:
    # plain-Python rotations: for n <= 16 this beats numpy slicing overhead
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    for i in range(n):
        a[i][i] = complex(a[i][i].real)
    tiny = 1e-20 * scale
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(p + 1, n)))
        if off <= 1e-16 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                if mag <= tiny:
                    continue
                tau = (a[q][q].real - a[p][p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phase_c = (apq / mag).conjugate()
                g10 = -s * phase_c
                g11 = c * phase_c
                for row in a:
                    x = row[p]
                    y = row[q]
                    row[p] = c * x + g10 * y
                    row[q] = s * x + g11 * y
                rp = a[p]
                rq = a[q]
                g10c = g10.conjugate()
                g11c = g11.conjugate()
                for k in range(n):
                    x = rp[k]
                    y = rq[k]
                    rp[k] = c * x + g10c * y
                    rq[k] = s * x + g11c * y
                rp[q] = 0j
                rq[p] = 0j
                rp[p] = complex(rp[p].real)
                rq[q] = complex(rq[q].real)
                for row in v:
                    x = row[p]
                    y = row[q]
                    row[p] = c * x + g10 * y
                    row[q] = s * x + g11 * y
    w = np.array([a[i][i].real for i in range(n)])
    return w, np.array(v, dtype=complex)


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns
    -------
    eigenvalues : ndarray
        Real, ascending.
    eigenvectors : ndarray
        Orthonormal columns, ``h = V diag(w) V^dagger``.

    Raises
    ------
    NotHermitianError
        If any entry of ``h - h^dagger`` exceeds ``HERMITIAN_TOL`` in modulus.
    """
    a = _as_square(h)
    n = a.shape[0]
    if n > MAX_DIM:
        raise InvalidDimensionsError(f"dimension {n} exceeds {MAX_DIM}")
    if not is_hermitian(a):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + dagger(a))
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), np.eye(n, dtype=complex)
    w, v = _jacobi(a.tolist(), n, scale)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    _gram_schmidt_clusters(w, v)
    _fix_phase(v)
    return w, v


def clean_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero out eigenvalues that are indistinguishable from round-off."""
    w = np.asarray(w, dtype=float).copy()
    radius = float(np.max(np.abs(w), initial=0.0))
    w[np.abs(w) <= _ZERO_EIG_REL * max(radius, 1.0)] = 0.0
    return w


def psd_sqrt(rho, eig: tuple[np.ndarray, np.ndarray] | None = None) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-PSD_TOL, 0)`` and round-off-level positive ones are
    set to zero before taking the root.
    """
    w, v = hermitian_eig(rho) if eig is None else eig
    if w.size and w[0] < -PSD_TOL:
        raise NotPSDError(f"smallest eigenvalue {w[0]:.3e} is below -{PSD_TOL:g}")
    w = clean_spectrum(np.clip(w, 0.0, None))
    x = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (x + dagger(x))


def largest_singular_value(m) -> tuple[float, np.ndarray, np.ndarray]:
    """Largest singular value of a real 3x3 matrix with its singular vectors.

    The right vector is the top eigenvector of ``m.T @ m``; the left one is
    ``m @ right / value``.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise InvalidDimensionsError(f"expected 3x3, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    w, v = hermitian_eig(m.T @ m)
    right = v[:, -1].real.copy()
    right /= np.linalg.norm(right)
    value = math.sqrt(max(w[-1], 0.0))
    if value > 0.0:
        left = m @ right
        value = float(np.linalg.norm(left))
        left = left / value if value > 0.0 else np.array([1.0, 0.0, 0.0])
    else:
        left = np.array([1.0, 0.0, 0.0])
    return value, left, right
