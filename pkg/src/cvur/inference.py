"""Inferred (conditional) variances.

Alice's outcome is predicted from Bob's: with joint outcome probabilities
``P[i, j]``, Bob's marginal ``P'[j]``, the conditional means ``mu[j]`` of
Alice's outcome values ``x[i]`` give the inferred variance
``sum_ij P[i, j] (x[i] - mu[j])**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConditioningError, InvalidDimensionsError
from .observables import ObservableSpec, pauli_from_vec
from .report import BoundReport
from .states import BlochDecomposition, DensityMatrix, bloch_decompose

PROB_TOL = 1e-12
DENOM_TOL = 1e-9
CC_TOL = 1e-9
IDENTITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InferredStats:
    joint_probs: np.ndarray
    bob_marginal: np.ndarray
    conditional_means: np.ndarray
    inferred_variance: float


def joint_probs(rho: DensityMatrix, obs_a: ObservableSpec, obs_b: ObservableSpec) -> np.ndarray:
    """``P[i, j] = Tr[(P_i (x) Q_j) rho]`` over the spectral projectors of each side."""
    if obs_a.dim != rho.dim_a or obs_b.dim != rho.dim_b:
        raise InvalidDimensionsError(
            f"observables act on {obs_a.dim}x{obs_b.dim}, state is {rho.dim_a}x{rho.dim_b}"
        )
    t = rho.matrix.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    pa = np.stack(obs_a.projectors)
    pb = np.stack(obs_b.projectors)
    p = np.einsum("iac,jbd,cdab->ij", pa, pb, t)
    if np.max(np.abs(p.imag)) > 1e-10:
        raise InvalidDimensionsError("joint probabilities have an imaginary part")
    return p.real


def inferred_variance(rho: DensityMatrix, obs_a: ObservableSpec, obs_b: ObservableSpec) -> InferredStats:
    """Run the conditioning recipe.

    Bob outcomes with ``P'[j] <= PROB_TOL`` are skipped; their conditional
    mean is reported as NaN.
    """
    p = joint_probs(rho, obs_a, obs_b)
    x = obs_a.eigenvalues
    bob = p.sum(axis=0)
    means = np.full(len(bob), np.nan)
    total = 0.0
    for j, pj in enumerate(bob):
        if pj <= PROB_TOL:
            continue
        col = p[:, j]
        mu = float(np.dot(x, col) / pj)
        means[j] = mu
        total += float(np.dot(col, (x - mu) ** 2))
    return InferredStats(p, bob, means, total)


def _second_term(cc: float, denom: float) -> float:
    if abs(cc) <= CC_TOL:
        return 0.0
    if denom <= DENOM_TOL:
        raise DegenerateConditioningError(
            f"Bob's variance {denom:.3e} vanishes while the correlator is {cc:.3e}"
        )
    return cc * cc / denom


def closed_form_inferred_variance(b: BlochDecomposition, n) -> float:
    """Two-qubit closed form for ``n.sigma`` measured on both sides.

    ``(1 - nr**2) - (ntn - nr*ns)**2 / (1 - ns**2)`` with ``nr = n.r``,
    ``ns = n.s`` and ``ntn = n^T T n``.
    """
    n = np.asarray(n, dtype=float)
    nr = float(n @ b.r)
    ns = float(n @ b.s)
    ntn = float(n @ b.T @ n)
    return (1.0 - nr * nr) - _second_term(ntn - nr * ns, 1.0 - ns * ns)


def prop1_identity(rho: DensityMatrix, n, m) -> BoundReport:
    """Compare the recipe sum for ``n.sigma`` and ``m.sigma`` with the Bloch closed form."""
    s_obs = pauli_from_vec(n)
    q_obs = pauli_from_vec(m)
    n = np.asarray(n, dtype=float) / np.linalg.norm(n)
    m = np.asarray(m, dtype=float) / np.linalg.norm(m)
    inf_s = inferred_variance(rho, s_obs, s_obs).inferred_variance
    inf_q = inferred_variance(rho, q_obs, q_obs).inferred_variance
    b = bloch_decompose(rho)
    cc = b.correlation_matrix()
    var_a_s = 1.0 - float(n @ b.r) ** 2
    var_a_q = 1.0 - float(m @ b.r) ** 2
    var_b_s = 1.0 - float(n @ b.s) ** 2
    var_b_q = 1.0 - float(m @ b.s) ** 2
    cc_nn = float(n @ cc @ n)
    cc_mm = float(m @ cc @ m)
    rhs = var_a_s + var_a_q - _second_term(cc_nn, var_b_s) - _second_term(cc_mm, var_b_q)
    lhs = inf_s + inf_q
    components = {
        "inferred_S": inf_s,
        "inferred_Q": inf_q,
        "var_A_S": var_a_s,
        "var_A_Q": var_a_q,
        "var_B_S": var_b_s,
        "var_B_Q": var_b_q,
        "cc_nn": cc_nn,
        "cc_mm": cc_mm,
    }
    gap = lhs - rhs
    return BoundReport(
        name="prop1_identity",
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        satisfied=bool(abs(gap) <= IDENTITY_TOL),
        nontrivial=bool(rhs > IDENTITY_TOL),
        components=components,
        notes=("equality check: satisfied means |gap| <= 1e-9",),
    )
