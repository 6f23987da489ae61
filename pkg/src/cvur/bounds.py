"""Evaluators for the conditional-variance inequalities and their relatives.

Every evaluator returns a :class:`~cvur.report.BoundReport`. The left-hand
side is always computed from the conditioning recipe (or directly from the
state), never from the closed forms the right-hand side is built on.

Degenerate denominators follow one rule: a term ``coef / denom`` whose
coefficient is negligible contributes zero; a term with a non-negligible
coefficient over a vanishing denominator sends the right-hand side to
``-inf`` (trivially satisfied, never nontrivial).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidDimensionsError, MixedStateError, NotHermitianUnitaryError, NotUnitaryError
from .inference import CC_TOL, DENOM_TOL, inferred_variance
from .measures import (
    concurrence,
    connected_correlator,
    covariance_entanglement,
    eof_two_qubit,
    g_function,
    local_skew,
    max_connected_correlator,
    mutual_information,
    variance,
    von_neumann_entropy,
)
from .observables import ObservableSpec, is_hermitian_unitary, normalize_direction, pauli_from_vec
from .report import BoundReport, bound_tolerance
from .states import DensityMatrix, bloch_decompose

PURITY_TOL = 1e-9
NORM_NOTE = "operator norm taken as the spectral norm (largest |eigenvalue|)"


@dataclass
class _Side:
    """Per-observable quantities for one Pauli direction measured on both sides."""

    n: np.ndarray
    inferred: float
    var_a: float
    var_b: float
    cc: float
    skew_b: float | None = None


def _stats(rho: DensityMatrix, directions, with_skew: bool = False) -> list[_Side]:
    rho_a = rho.marginal("A")
    rho_b = rho.marginal("B")
    out = []
    for n in directions:
        n = normalize_direction(n)
        obs = pauli_from_vec(n)
        side = _Side(
            n=n,
            inferred=inferred_variance(rho, obs, obs).inferred_variance,
            var_a=variance(rho_a, obs),
            var_b=variance(rho_b, obs),
            cc=connected_correlator(rho, obs, obs),
        )
        if with_skew:
            side.skew_b = local_skew(rho, n, "B")
        out.append(side)
    return out


def _term(coef: float, denom: float) -> float:
    """``coef / denom`` under the degenerate-denominator rule; ``coef`` is a squared quantity."""
    if coef <= CC_TOL * CC_TOL:
        return 0.0
    if denom <= DENOM_TOL:
        return math.inf
    return coef / denom


def _require_two_qubit(rho: DensityMatrix) -> None:
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise InvalidDimensionsError(f"expected a 2x2 state, got {rho.dim_a}x{rho.dim_b}")


def _require_pure(rho: DensityMatrix, what: str) -> None:
    if not rho.is_pure(PURITY_TOL):
        raise MixedStateError(f"{what} needs a pure state (purity {rho.purity:.9f})")


def _side_components(sides: list[_Side], labels=("S", "Q", "R")) -> dict:
    comp = {}
    for label, s in zip(labels, sides):
        comp[f"inferred_{label}"] = s.inferred
        comp[f"var_A_{label}"] = s.var_a
        comp[f"var_B_{label}"] = s.var_b
        comp[f"cc_{label}"] = s.cc
        if s.skew_b is not None:
            comp[f"skew_B_{label}"] = s.skew_b
    return comp


def _exact_sum_rhs(sides: list[_Side]) -> float:
    return sum(s.var_a for s in sides) - sum(_term(s.cc**2, s.var_b) for s in sides)


def prop2_sum_bound(rho: DensityMatrix, n, m, variant: str = "concurrence") -> BoundReport:
    """Sum of two inferred variances against a concurrence-type bound.

    ``variant`` picks the coefficient of ``1/var_B_S + 1/var_B_Q``:
    ``concurrence`` (C^2), ``covariance`` (E_cov^2), ``ccmax`` (CC_max^2,
    valid for mixed states) or ``busch`` (C^2, with the local variances
    replaced by ``1 - |m.n|``). All but ``ccmax`` require a pure state.
    """
    _require_two_qubit(rho)
    if variant not in ("concurrence", "busch", "covariance", "ccmax"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant != "ccmax":
        _require_pure(rho, f"prop2 {variant} variant")
    sides = _stats(rho, [n, m])
    comp = _side_components(sides)
    if variant in ("concurrence", "busch"):
        measure = concurrence(rho).value
        comp["concurrence"] = measure
    elif variant == "covariance":
        measure = covariance_entanglement(rho).value
        comp["E_cov"] = measure
    else:
        measure = max_connected_correlator(bloch_decompose(rho)).value
        comp["cc_max"] = measure
    if variant == "busch":
        base = 1.0 - abs(float(sides[0].n @ sides[1].n))
        comp["busch_local_bound"] = base
    else:
        base = sides[0].var_a + sides[1].var_a
    coef = measure * measure
    rhs = base - sum(_term(coef, s.var_b) for s in sides)
    comp["exact_rhs"] = _exact_sum_rhs(sides)
    lhs = sides[0].inferred + sides[1].inferred
    return BoundReport.build(f"prop2_{variant}", lhs, rhs, comp)


def prop3_discord_bound(rho: DensityMatrix, n, m, variant: str = "per_observable") -> BoundReport:
    """Bob's variances replaced by skew informations of the same local observables.

    ``per_observable`` divides each squared correlator by its own skew
    information; ``single_D`` uses the smaller of the two for both.
    """
    _require_two_qubit(rho)
    if variant not in ("per_observable", "single_D"):
        raise ValueError(f"unknown variant {variant!r}")
    sides = _stats(rho, [n, m], with_skew=True)
    comp = _side_components(sides)
    base = sides[0].var_a + sides[1].var_a
    notes = []
    if variant == "per_observable":
        rhs = base - sum(_term(s.cc**2, s.skew_b) for s in sides)
        notes.append("D read per observable: skew information of each local observable on B")
    else:
        d = min(s.skew_b for s in sides)
        comp["D"] = d
        rhs = base - _term(sum(s.cc**2 for s in sides), d)
        notes.append("D read as the smaller of the two skew informations on B")
    lhs = sides[0].inferred + sides[1].inferred
    return BoundReport.build(f"prop3_{variant}", lhs, rhs, comp, notes)


def prop4_g_bound(rho: DensityMatrix, n, m, variant: str = "g", k=None) -> BoundReport:
    """Inferred sum bounded through G, C, mutual information or E_f.

    ``three_obs_sum`` adds a third direction ``k`` and bounds the triple sum
    by ``sum var_A - 3 C^2 / D`` (pure states, D the smallest skew
    information on B).
    """
    _require_two_qubit(rho)
    variants = ("g", "concurrence_relaxed", "mutual_info", "eof_pure", "three_obs_sum")
    if variant not in variants:
        raise ValueError(f"unknown variant {variant!r}")
    notes = []
    if variant == "three_obs_sum":
        if k is None:
            raise ValueError("three_obs_sum needs a third direction k")
        _require_pure(rho, "prop4 three_obs_sum variant")
        sides = _stats(rho, [n, m, k], with_skew=True)
        comp = _side_components(sides)
        c = concurrence(rho).value
        d = min(s.skew_b for s in sides)
        comp.update(concurrence=c, D=d)
        rhs = sum(s.var_a for s in sides) - 3.0 * _term(c * c, d)
        lhs = sum(s.inferred for s in sides)
        return BoundReport.build("prop4_three_obs_sum", lhs, rhs, comp, ["D read as the smallest skew information on B"])

    sides = _stats(rho, [n, m])
    comp = _side_components(sides)
    base = sides[0].var_a + sides[1].var_a
    if variant == "g":
        g = g_function(rho)
        comp["G"] = g.value
        coefs = [g.value, g.value]
    elif variant == "concurrence_relaxed":
        c = concurrence(rho).value
        comp["concurrence"] = c
        coefs = [1.0 + 2.0 * c * c] * 2
    elif variant == "mutual_info":
        info = mutual_information(rho).value
        comp["mutual_information"] = info
        coefs = [2.0 * info * pauli_from_vec(s.n).norm ** 4 for s in sides]
        notes += [NORM_NOTE, "mutual information in bits"]
    else:
        _require_pure(rho, "prop4 eof_pure variant")
        c = concurrence(rho).value
        ef = eof_two_qubit(c)
        comp.update(concurrence=c, E_f=ef)
        coefs = [4.0 * ef * pauli_from_vec(s.n).norm ** 4 for s in sides]
        notes += [NORM_NOTE, "uses I(A:B) = 2 E_f for pure states"]
    rhs = base - sum(_term(cf, s.var_b) for cf, s in zip(coefs, sides))
    lhs = sides[0].inferred + sides[1].inferred
    return BoundReport.build(f"prop4_{variant}", lhs, rhs, comp, notes)


def _product_rhs(sides: list[_Side], coef: float) -> float:
    a1, a2 = sides[0].var_a, sides[1].var_a
    return a1 * a2 - (a1 * _term(coef, sides[0].var_b) + a2 * _term(coef, sides[1].var_b))


def prop5_product_bound(rho: DensityMatrix, n, m, variant: str = "pure_concurrence", k=None) -> BoundReport:
    """Product of inferred variances.

    Two-observable variants bound ``inf_S * inf_Q`` by
    ``var_A_S var_A_Q - M (var_A_S / var_B_S + var_A_Q / var_B_Q)`` with
    ``M`` one of C^2 (pure states), CC_max^2 or G. The three-observable
    variants take a third direction ``k``; the even-order correlator terms
    are dropped and the undropped product is reported as ``exact_rhs``.
    """
    _require_two_qubit(rho)
    variants = ("pure_concurrence", "ccmax", "g", "three_obs_product", "discord_product")
    if variant not in variants:
        raise ValueError(f"unknown variant {variant!r}")
    flags = {}
    if variant in ("three_obs_product", "discord_product"):
        if k is None:
            raise ValueError(f"{variant} needs a third direction k")
        sides = _stats(rho, [n, m, k], with_skew=variant == "discord_product")
        comp = _side_components(sides)
        ccm = max_connected_correlator(bloch_decompose(rho)).value
        coef = ccm * ccm
        comp["cc_max"] = ccm
        a = [s.var_a for s in sides]
        if variant == "three_obs_product":
            inv = [_term(1.0, s.var_b) for s in sides]
        else:
            d = min(s.skew_b for s in sides)
            comp["D"] = d
            inv = [_term(1.0, d)] * 3
        t1 = a[0] * a[1] * inv[2] + a[0] * a[2] * inv[1] + a[1] * a[2] * inv[0]
        t2 = inv[0] * inv[1] * inv[2]
        comp.update(T1=t1, T2=t2)
        if coef <= CC_TOL * CC_TOL:
            rhs = a[0] * a[1] * a[2]
        else:
            rhs = a[0] * a[1] * a[2] - coef * t1 - coef**3 * t2
        exact = 1.0
        for s in sides:
            exact *= s.var_a - _term(s.cc**2, s.var_b)
        comp["exact_rhs"] = exact
        lhs = sides[0].inferred * sides[1].inferred * sides[2].inferred
        return BoundReport.build(f"prop5_{variant}", lhs, rhs, comp)

    sides = _stats(rho, [n, m])
    comp = _side_components(sides)
    if variant == "pure_concurrence":
        _require_pure(rho, "prop5 pure_concurrence variant")
        c = concurrence(rho).value
        comp["concurrence"] = c
        coef = c * c
    elif variant == "ccmax":
        ccm = max_connected_correlator(bloch_decompose(rho)).value
        comp["cc_max"] = ccm
        coef = ccm * ccm
    else:
        g = g_function(rho).value
        comp["G"] = g
        coef = g
        ratio = sides[0].var_a * _term(1.0, sides[0].var_b) + sides[1].var_a * _term(1.0, sides[1].var_b)
        comp["ratio_sum"] = ratio
        flags["ratio_condition"] = bool(ratio > 0 and 1.0 / ratio >= g >= 1.0)
    rhs = _product_rhs(sides, coef)
    lhs = sides[0].inferred * sides[1].inferred
    return BoundReport.build(f"prop5_{variant}", lhs, rhs, comp, flags=flags)


def _as_op(obs) -> np.ndarray:
    return obs.matrix if isinstance(obs, ObservableSpec) else linalg.as_matrix(obs)


def _is_pauli_direction(op: np.ndarray) -> bool:
    return op.shape == (2, 2) and abs(np.trace(op)) <= 1e-9 and is_hermitian_unitary(op)


def _op_norm(op: np.ndarray) -> float:
    w, _ = linalg.hermitian_eig(op)
    return float(np.max(np.abs(w)))


def lur_violation(rho: DensityMatrix, obs_a_list, obs_b_list, ua: float, ub: float, variant: str = "ccmax") -> BoundReport:
    """Sum of variances of ``A_i (x) I + I (x) B_i`` against local bounds.

    ``ua`` and ``ub`` are caller-supplied state-independent lower bounds on
    ``sum_i var(A_i)`` and ``sum_i var(B_i)``. The report's
    ``entanglement_detected`` flag is set when the left-hand side falls below
    ``ua + ub``. ``variant`` selects the correlation term subtracted on the
    right: ``ccmax`` (any state), ``concurrence`` and ``eof`` (pure two-qubit),
    ``entanglement_entropy`` (pure), ``mutual_info`` (any state).
    """
    a_ops = [_as_op(o) for o in obs_a_list]
    b_ops = [_as_op(o) for o in obs_b_list]
    if len(a_ops) != len(b_ops) or not a_ops:
        raise ValueError("observable lists must be non-empty and of equal length")
    for a, b in zip(a_ops, b_ops):
        if a.shape[0] != rho.dim_a or b.shape[0] != rho.dim_b:
            raise InvalidDimensionsError("observable dimensions do not match the state")
    count = len(a_ops)
    id_a = np.eye(rho.dim_a)
    id_b = np.eye(rho.dim_b)
    lhs = sum(variance(rho, linalg.kron(a, id_b) + linalg.kron(id_a, b)) for a, b in zip(a_ops, b_ops))
    ccs = [connected_correlator(rho, a, b) for a, b in zip(a_ops, b_ops)]
    comp = {"count": float(count), "local_bound": ua + ub}
    for i, c in enumerate(ccs):
        comp[f"cc_{i}"] = c
    notes = []
    base = ua + ub
    pauli_qubits = (rho.dim_a, rho.dim_b) == (2, 2) and all(
        _is_pauli_direction(o) for o in a_ops + b_ops
    )

    if variant == "ccmax":
        if pauli_qubits:
            ccm = max_connected_correlator(bloch_decompose(rho)).value
            notes.append("CC_max maximized over all Pauli directions")
        else:
            ccm = max(abs(c) for c in ccs)
            notes.append("CC_max taken over the supplied observable pairs")
        comp["cc_max"] = ccm
        rhs = base - 2.0 * count * ccm
    elif variant == "concurrence":
        _require_two_qubit(rho)
        _require_pure(rho, "lur concurrence variant")
        c = concurrence(rho).value
        comp["concurrence"] = c
        rhs = base - 2.0 * count * c
    elif variant == "entanglement_entropy":
        _require_pure(rho, "lur entanglement_entropy variant")
        e = von_neumann_entropy(rho.marginal("A"))
        comp["entanglement_entropy"] = e
        rhs = base - 2.0 * count * e
        notes.append("not a theorem: counterexamples exist for weakly entangled states")
    elif variant == "mutual_info":
        info = mutual_information(rho).value
        norms = sum(_op_norm(a) * _op_norm(b) for a, b in zip(a_ops, b_ops))
        comp.update(mutual_information=info, norm_products=norms)
        rhs = base - 2.0 * math.sqrt(2.0 * info) * norms
        max_norms = max(_op_norm(a) for a in a_ops) * max(_op_norm(b) for b in b_ops)
        comp["single_term_rhs"] = base - 2.0 * math.sqrt(info) * max_norms
        notes += [NORM_NOTE, "each |CC_i| <= sqrt(2 I) |A_i| |B_i|; the single-term form is reported separately"]
    elif variant == "eof":
        _require_two_qubit(rho)
        _require_pure(rho, "lur eof variant")
        c = concurrence(rho).value
        ef = eof_two_qubit(c)
        norms = sum(_op_norm(a) * _op_norm(b) for a, b in zip(a_ops, b_ops))
        comp.update(concurrence=c, E_f=ef, norm_products=norms)
        rhs = base - 4.0 * math.sqrt(ef) * norms
        notes += [NORM_NOTE, "uses I(A:B) = 2 E_f for pure states"]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    flags = {"entanglement_detected": bool(lhs < base - bound_tolerance())}
    return BoundReport.build(f"lur_{variant}", lhs, rhs, comp, notes, flags)


def unitary_variance(rho, u) -> tuple[float, float]:
    """Return ``(1 - |<U>|^2, |<U>|)`` for a unitary ``u``; the two always satisfy ``var + vis^2 = 1``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else linalg.as_matrix(rho)
    u = linalg.as_matrix(u)
    if u.shape != m.shape:
        raise InvalidDimensionsError(f"unitary of shape {u.shape} on a state of shape {m.shape}")
    if np.max(np.abs(u @ linalg.dagger(u) - np.eye(u.shape[0]))) > 1e-9:
        raise NotUnitaryError("operator is not unitary")
    vis = min(abs(complex(np.trace(u @ m))), 1.0)
    return 1.0 - vis * vis, vis


def visibility_bound(rho: DensityMatrix, u, v, variant: str = "concurrence") -> BoundReport:
    """Fringe visibilities of the two marginals against the composite variance.

    ``nu_U^2 + nu_V^2 >= 2 (1 - M) - var(U (x) I + I (x) V)``, with ``M`` the
    concurrence (``variant="concurrence"``, guaranteed for pure states) or
    the maximal Pauli connected correlator (``variant="ccmax"``, any state).
    """
    _require_two_qubit(rho)
    u = linalg.as_matrix(u)
    v = linalg.as_matrix(v)
    if not (is_hermitian_unitary(u) and is_hermitian_unitary(v)):
        raise NotHermitianUnitaryError("U and V must be Hermitian and unitary")
    if u.shape != (2, 2) or v.shape != (2, 2):
        raise InvalidDimensionsError("U and V must be 2x2")
    var_u, vis_u = unitary_variance(rho.marginal("A"), u)
    var_v, vis_v = unitary_variance(rho.marginal("B"), v)
    joint = variance(rho, linalg.kron(u, np.eye(2)) + linalg.kron(np.eye(2), v))
    comp = {"vis_U": vis_u, "vis_V": vis_v, "var_U": var_u, "var_V": var_v, "var_joint": joint}
    notes = ["var(U+V) taken as the variance of U (x) I + I (x) V on the composite state"]
    if variant == "concurrence":
        measure = concurrence(rho).value
        comp["concurrence"] = measure
        if not rho.is_pure(PURITY_TOL):
            notes.append("mixed state: the concurrence form is only guaranteed for pure states")
    elif variant == "ccmax":
        measure = max_connected_correlator(bloch_decompose(rho)).value
        comp["cc_max"] = measure
    else:
        raise ValueError(f"unknown variant {variant!r}")
    lhs = vis_u * vis_u + vis_v * vis_v
    rhs = 2.0 * (1.0 - measure) - joint
    return BoundReport.build(f"visibility_{variant}", lhs, rhs, comp, notes)


def _spec(obs) -> ObservableSpec:
    if isinstance(obs, ObservableSpec):
        return obs
    from .observables import eigenprojectors

    return eigenprojectors(obs)


def correlator_sum_template(rho: DensityMatrix, observables) -> BoundReport:
    """Any-dimension check of the exact-correlator sum form.

    LHS is the recipe sum of inferred variances (each observable measured on
    both sides); RHS is ``sum var_A - sum CC^2 / var_B``.
    """
    specs = [_spec(o) for o in observables]
    rho_a = rho.marginal("A")
    rho_b = rho.marginal("B")
    lhs = rhs = 0.0
    comp = {}
    for i, o in enumerate(specs):
        inf = inferred_variance(rho, o, o).inferred_variance
        va = variance(rho_a, o)
        vb = variance(rho_b, o)
        cc = connected_correlator(rho, o, o)
        comp.update({f"inferred_{i}": inf, f"var_A_{i}": va, f"var_B_{i}": vb, f"cc_{i}": cc})
        lhs += inf
        rhs += va - _term(cc * cc, vb)
    return BoundReport.build("correlator_sum_template", lhs, rhs, comp)


def correlator_product_template(rho: DensityMatrix, obs_s, obs_q) -> BoundReport:
    """Any-dimension product form with the largest of the two correlators.

    ``inf_S inf_Q >= var_A_S var_A_Q - CC^2 (var_A_S / var_B_S + var_A_Q / var_B_Q)``.
    """
    specs = [_spec(obs_s), _spec(obs_q)]
    rho_a = rho.marginal("A")
    rho_b = rho.marginal("B")
    sides = []
    for o in specs:
        sides.append(
            _Side(
                n=np.zeros(3),
                inferred=inferred_variance(rho, o, o).inferred_variance,
                var_a=variance(rho_a, o),
                var_b=variance(rho_b, o),
                cc=connected_correlator(rho, o, o),
            )
        )
    ccm = max(abs(s.cc) for s in sides)
    comp = _side_components(sides)
    comp["cc_max_pair"] = ccm
    rhs = _product_rhs(sides, ccm * ccm)
    lhs = sides[0].inferred * sides[1].inferred
    return BoundReport.build("correlator_product_template", lhs, rhs, comp)
