"""Correlation and entanglement quantifiers for bipartite states."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InternalInconsistencyError, InvalidDimensionsError, MixedStateError
from .observables import ObservableSpec, pauli_matrix
from .states import PAULIS, SIGMA_Y, BlochDecomposition, DensityMatrix, bloch_decompose

G_AGREEMENT_TOL = 1e-9
PURITY_TOL = 1e-9
# G >= 1 is a literature entanglement witness; reported, never asserted
G_WITNESS_THRESHOLD = 1.0


@dataclass(frozen=True)
class MeasureValue:
    name: str
    value: float
    witnesses: dict = field(default_factory=dict)


def _require_two_qubit(rho: DensityMatrix) -> None:
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise InvalidDimensionsError(f"expected a 2x2 state, got {rho.dim_a}x{rho.dim_b}")


def _op(obs) -> np.ndarray:
    return obs.matrix if isinstance(obs, ObservableSpec) else linalg.as_matrix(obs)


def variance(rho, op) -> float:
    """``Tr(rho K^2) - Tr(rho K)^2`` for a Hermitian ``K`` on the same space as ``rho``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else linalg.as_matrix(rho)
    k = _op(op)
    mean = float(np.real(np.trace(m @ k)))
    return float(np.real(np.trace(m @ k @ k))) - mean * mean


def local_variance(rho: DensityMatrix, op, side: str) -> float:
    return variance(rho.marginal(side), op)


def connected_correlator(rho: DensityMatrix, obs_a, obs_b) -> float:
    """``Tr[(A (x) B) rho] - Tr[A rho_A] Tr[B rho_B]``."""
    a = _op(obs_a)
    b = _op(obs_b)
    if a.shape[0] != rho.dim_a or b.shape[0] != rho.dim_b:
        raise InvalidDimensionsError(
            f"observables act on {a.shape[0]}x{b.shape[0]}, state is {rho.dim_a}x{rho.dim_b}"
        )
    joint = np.trace(linalg.kron(a, b) @ rho.matrix)
    ma = np.trace(a @ rho.marginal("A"))
    mb = np.trace(b @ rho.marginal("B"))
    return float(np.real(joint - ma * mb))


def max_connected_correlator(b: BlochDecomposition) -> MeasureValue:
    """Largest ``|a^T (T - r s^T) b|`` over unit ``a``, ``b``."""
    value, left, right = linalg.largest_singular_value(b.correlation_matrix())
    return MeasureValue("cc_max", value, {"a": left, "b": right})


def concurrence(rho: DensityMatrix) -> MeasureValue:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``sqrt(rho) rho~ sqrt(rho)`` with ``rho~ = (Y (x) Y) rho* (Y (x) Y)``,
    which is Hermitian and has the same spectrum as ``rho rho~``.
    """
    _require_two_qubit(rho)
    yy = linalg.kron(SIGMA_Y, SIGMA_Y)
    flipped = yy @ rho.matrix.conj() @ yy
    root = rho.sqrt()
    x = root @ flipped @ root
    w, _ = linalg.hermitian_eig(0.5 * (x + linalg.dagger(x)))
    lam = np.sqrt(linalg.clean_spectrum(np.clip(w, 0.0, None)))[::-1]
    value = max(0.0, float(lam[0] - lam[1:].sum()))
    return MeasureValue("concurrence", min(value, 1.0), {"lambdas": lam})


def g_function(rho: DensityMatrix) -> MeasureValue:
    """Sum of squared Pauli connected correlators, cross-checked against
    ``4 Tr((rho - rho_A (x) rho_B)^2)``."""
    _require_two_qubit(rho)
    b = bloch_decompose(rho)
    by_sum = float(np.sum(b.correlation_matrix() ** 2))
    diff = rho.matrix - linalg.kron(rho.marginal("A"), rho.marginal("B"))
    by_trace = float(4.0 * np.real(np.trace(diff @ diff)))
    if abs(by_sum - by_trace) > G_AGREEMENT_TOL:
        raise InternalInconsistencyError(
            f"G from correlators ({by_sum!r}) and from the trace form ({by_trace!r}) disagree"
        )
    return MeasureValue(
        "G",
        by_sum,
        {"trace_form": by_trace, "witness_entangled": by_sum >= G_WITNESS_THRESHOLD},
    )


def skew_information(rho: DensityMatrix, k) -> float:
    """Wigner-Yanase skew information ``Tr(rho K^2) - Tr(sqrt(rho) K sqrt(rho) K)``."""
    op = _op(k)
    if op.shape[0] != rho.dim:
        raise InvalidDimensionsError(f"operator of side {op.shape[0]} on a state of side {rho.dim}")
    root = rho.sqrt()
    value = float(np.real(np.trace(rho.matrix @ op @ op) - np.trace(root @ op @ root @ op)))
    return max(value, 0.0)


def embed_local(op, rho: DensityMatrix, side: str) -> np.ndarray:
    """``op (x) I`` for side A or ``I (x) op`` for side B."""
    op = _op(op)
    if side == "A":
        return linalg.kron(op, np.eye(rho.dim_b))
    if side == "B":
        return linalg.kron(np.eye(rho.dim_a), op)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def lqu_matrix(rho: DensityMatrix, side: str = "B") -> np.ndarray:
    """``W[i, j] = Tr[sqrt(rho) s_i sqrt(rho) s_j]`` with ``s_i`` the embedded Paulis."""
    root = rho.sqrt()
    ops = [embed_local(p, rho, side) for p in PAULIS]
    half = [root @ op for op in ops]
    w = np.array([[np.real(np.trace(hi @ hj)) for hj in half] for hi in half])
    return 0.5 * (w + w.T)


def lqu(rho: DensityMatrix, side: str = "B") -> MeasureValue:
    """Local quantum uncertainty on a qubit side: ``1 - lambda_max(W)``."""
    if (rho.dim_b if side == "B" else rho.dim_a) != 2:
        raise InvalidDimensionsError(f"side {side} must be a qubit")
    w, v = linalg.hermitian_eig(lqu_matrix(rho, side))
    direction = v[:, -1].real.copy()
    direction /= np.linalg.norm(direction)
    value = max(0.0, 1.0 - float(w[-1]))
    return MeasureValue("lqu", value, {"n": direction, "side": side})


def local_skew(rho: DensityMatrix, n, side: str = "B") -> float:
    """Skew information of ``n.sigma`` acting on one qubit side."""
    return skew_information(rho, embed_local(pauli_matrix(n), rho, side))


def _entropy_bits(w: np.ndarray) -> float:
    w = linalg.clean_spectrum(np.clip(np.asarray(w, dtype=float), 0.0, None))
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, ``0 log 0 = 0``."""
    if isinstance(rho, DensityMatrix):
        return _entropy_bits(rho.eigenvalues)
    w, _ = linalg.hermitian_eig(rho)
    return _entropy_bits(w)


def mutual_information(rho: DensityMatrix) -> MeasureValue:
    s_a = von_neumann_entropy(rho.marginal("A"))
    s_b = von_neumann_entropy(rho.marginal("B"))
    s_ab = von_neumann_entropy(rho)
    return MeasureValue("mutual_information", s_a + s_b - s_ab, {"S_A": s_a, "S_B": s_b, "S_AB": s_ab, "log_base": 2})


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def eof_two_qubit(c: float) -> float:
    """Entanglement of formation from the concurrence, ``h((1 + sqrt(1 - c^2))/2)``."""
    if not (-1e-10 <= c <= 1.0 + 1e-10):
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def covariance_entanglement(rho: DensityMatrix, purity_check: bool = True) -> MeasureValue:
    """Maximal local-unitary connected correlator; an entanglement measure only for pure states."""
    _require_two_qubit(rho)
    pure = rho.is_pure(PURITY_TOL)
    if purity_check and not pure:
        raise MixedStateError(f"purity {rho.purity:.6f} < 1; covariance entanglement needs a pure state")
    cc = max_connected_correlator(bloch_decompose(rho))
    return MeasureValue("E_cov", cc.value, {**cc.witnesses, "is_measure": pure})
