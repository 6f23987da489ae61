"""Deterministic sweeps and seeded Monte-Carlo batches behind the CLI.

Each experiment returns an :class:`ExperimentResult` holding fixed CSV
columns, rows in index order, the per-row reports and a summary dict.
Sample ``i`` of a random batch is seeded with ``seed ^ i``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds, measures, states
from .errors import InvariantBreachError, MixedStateError, SchemaMismatchError
from .inference import prop1_identity
from .observables import ObservableSpec, parse_token_list, pauli_from_vec
from .report import BoundReport
from .rng import make_rng, sample_seed, unit_vector

EXPERIMENTS = (
    "prop1-verify",
    "sweep-schmidt",
    "scatter-discord",
    "sweep-werner",
    "isotropic-demo",
    "lur-demo",
    "visibility-demo",
)

DEFAULT_OBS = {
    "sweep-schmidt": "sx,sy",
    "scatter-discord": "sx,sy",
    "sweep-werner": "sx,sy",
    "isotropic-demo": "spin32x,spin32y",
    "lur-demo": "sx,sy,sz",
    "visibility-demo": "",
    "prop1-verify": "",
}

DEFAULT_VARIANT = {
    "sweep-schmidt": "concurrence",
    "scatter-discord": "per_observable",
    "sweep-werner": "g",
    "lur-demo": "ccmax",
    "visibility-demo": "concurrence",
}


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 7
    samples: int = 1000
    grid_steps: int = 100
    observables: str | None = None
    variant: str | None = None
    output_path: str | None = None

    def obs_text(self) -> str:
        return DEFAULT_OBS.get(self.experiment, "") if self.observables is None else self.observables

    def variant_name(self) -> str | None:
        return self.variant if self.variant is not None else DEFAULT_VARIANT.get(self.experiment)


@dataclass
class ExperimentResult:
    experiment: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    reports: list[BoundReport] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def to_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _breach(invariant: str, detail: str) -> None:
    raise InvariantBreachError(f"invariant '{invariant}' failed: {detail}")


def _check_satisfied(rep: BoundReport, where: str) -> None:
    if not rep.satisfied:
        _breach(f"{rep.name} satisfied", f"{where}: lhs={rep.lhs!r} rhs={rep.rhs!r} gap={rep.gap!r}")


def _direction(obs: ObservableSpec) -> np.ndarray:
    m = obs.matrix
    if m.shape != (2, 2):
        raise ValueError("expected a qubit Pauli-direction observable")
    return np.real(np.array([m[0, 1] + m[1, 0], 1j * (m[0, 1] - m[1, 0]), m[0, 0] - m[1, 1]])) / 2.0


def _pauli_pair(cfg: ExperimentConfig) -> tuple[np.ndarray, np.ndarray]:
    obs = parse_token_list(cfg.obs_text())
    if len(obs) != 2:
        raise ValueError(f"{cfg.experiment} needs exactly two observables, got {len(obs)}")
    return _direction(obs[0]), _direction(obs[1])


def _grid(steps: int, lo: float, hi: float) -> np.ndarray:
    if steps < 1:
        raise ValueError("grid needs at least one step")
    return lo + (hi - lo) * np.arange(steps + 1) / steps


def prop1_verify(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult(
        cfg.experiment,
        ["index", "seed", "n_x", "n_y", "n_z", "m_x", "m_y", "m_z", "lhs", "rhs", "gap"],
    )
    worst = 0.0
    for i in range(cfg.samples):
        s = sample_seed(cfg.seed, i)
        rho = states.random_mixed(s, 2, 2, 4)
        rng = make_rng(s, stream=1)
        n = unit_vector(rng)
        m = unit_vector(rng)
        rep = prop1_identity(rho, n, m)
        if not rep.satisfied:
            _breach("prop1 identity |gap| <= 1e-9", f"sample {i}: gap={rep.gap!r}")
        worst = max(worst, abs(rep.gap))
        res.rows.append([i, s, *n, *m, rep.lhs, rep.rhs, rep.gap])
        res.reports.append(rep)
    res.summary = {"samples": cfg.samples, "max_abs_gap": worst}
    return res


def sweep_schmidt(cfg: ExperimentConfig) -> ExperimentResult:
    n, m = _pauli_pair(cfg)
    res = ExperimentResult(
        cfg.experiment,
        [
            "theta", "concurrence", "c2_exact", "inferred_sum", "local_sum",
            "prop2_rhs", "prop2_gap", "c2_recovered",
            "prop5_lhs", "prop5_rhs", "prop5_gap", "c4",
        ],
    )
    worst = {"prop2_gap": 0.0, "c2_recovered_err": 0.0, "prop5_gap_minus_c4": 0.0}
    for theta in _grid(cfg.grid_steps, 0.0, math.pi / 2):
        rho = states.schmidt_pure(float(theta))
        p2 = bounds.prop2_sum_bound(rho, n, m, cfg.variant_name())
        p5 = bounds.prop5_product_bound(rho, n, m, "pure_concurrence")
        _check_satisfied(p2, f"theta={theta!r}")
        _check_satisfied(p5, f"theta={theta!r}")
        c = measures.concurrence(rho).value
        c2_exact = math.sin(2 * theta) ** 2
        local = p2.components["var_A_S"] + p2.components["var_A_Q"]
        c2_rec = (local - p2.lhs) / 2.0
        worst["prop2_gap"] = max(worst["prop2_gap"], abs(p2.gap))
        worst["c2_recovered_err"] = max(worst["c2_recovered_err"], abs(c2_rec - c2_exact))
        worst["prop5_gap_minus_c4"] = max(worst["prop5_gap_minus_c4"], abs(p5.gap - c**4))
        res.rows.append([theta, c, c2_exact, p2.lhs, local, p2.rhs, p2.gap, c2_rec, p5.lhs, p5.rhs, p5.gap, c**4])
        res.reports += [p2, p5]
    res.summary = {"points": len(res.rows), "prop2_variant": cfg.variant_name(), **{f"max_abs_{k}": v for k, v in worst.items()}}
    return res


def scatter_discord(cfg: ExperimentConfig) -> ExperimentResult:
    n, m = _pauli_pair(cfg)
    res = ExperimentResult(
        cfg.experiment,
        ["index", "seed", "rhs", "lhs", "gap", "nontrivial", "concurrence", "G", "lqu", "mutual_info", "cc_max"],
    )
    nontrivial = 0
    min_gap = math.inf
    for i in range(cfg.samples):
        s = sample_seed(cfg.seed, i)
        rho = states.random_mixed(s, 2, 2, 4)
        rep = bounds.prop3_discord_bound(rho, n, m, cfg.variant_name())
        _check_satisfied(rep, f"sample {i}")
        nontrivial += rep.nontrivial
        min_gap = min(min_gap, rep.gap)
        res.rows.append([
            i, s, rep.rhs, rep.lhs, rep.gap, rep.nontrivial,
            measures.concurrence(rho).value,
            measures.g_function(rho).value,
            measures.lqu(rho).value,
            measures.mutual_information(rho).value,
            measures.max_connected_correlator(states.bloch_decompose(rho)).value,
        ])
        res.reports.append(rep)
    res.summary = {
        "samples": cfg.samples,
        "variant": cfg.variant_name(),
        "nontrivial_count": nontrivial,
        "below_diagonal": sum(1 for r in res.reports if r.gap < -1e-9),
        "min_gap": min_gap,
    }
    return res


def werner_regions() -> dict:
    """Nontriviality regions of the G-based sum bound on Werner states with (sx, sy).

    The local and Bob variances are all 1, so the bound reads ``2 - 2 G``
    and is nontrivial for ``G < 1``; ``G >= 1`` is the witness condition.
    """
    r3 = 1 / math.sqrt(3)
    r6 = 1 / math.sqrt(6)
    r12 = 1 / math.sqrt(12)
    return {
        # G = 3 p^2: rhs > 0 iff p < 1/sqrt(3), witness iff p >= 1/sqrt(3)
        "definitional_G": "3p^2",
        "definitional_nontrivial": [0.0, r3],
        "definitional_witness": [r3, 1.0],
        "definitional_nontrivial_and_witness": None,
        "definitional_nontrivial_and_entangled": [1 / 3, r3],
        # alternative normalization G = 6 p^2 used in both places: rhs > 0 iff p < 1/sqrt(12), witness iff p >= 1/sqrt(6)
        "alt_G": "6p^2",
        "alt_nontrivial": [0.0, r12],
        "alt_witness": [r6, 1.0],
        "alt_nontrivial_and_witness": None,
        # rhs 2 - 6p^2 (definitional G) combined with the witness 6p^2 >= 1 (alternative G)
        "mixed_convention_interval": [r6, r3],
        "mixed_convention_reading": "rhs = 2 - 2*(3p^2) > 0 together with 6p^2 >= 1",
    }


def sweep_werner(cfg: ExperimentConfig) -> ExperimentResult:
    n, m = _pauli_pair(cfg)
    res = ExperimentResult(
        cfg.experiment,
        [
            "p", "inferred_sum", "expected_sum", "concurrence", "G", "G_expected", "G_alt",
            "prop4_rhs", "prop4_gap", "nontrivial", "rhs_alt_G", "witness_G", "witness_alt_G",
        ],
    )
    worst_sum = worst_g = 0.0
    grid_nontrivial = []
    for p in _grid(cfg.grid_steps, 0.0, 1.0):
        p = float(p)
        rho = states.werner(p)
        rep = bounds.prop4_g_bound(rho, n, m, cfg.variant_name())
        _check_satisfied(rep, f"p={p!r}")
        g = measures.g_function(rho).value
        g_alt = 6 * p * p
        local = rep.components["var_A_S"] + rep.components["var_A_Q"]
        rhs_alt = local - g_alt * (1 / rep.components["var_B_S"] + 1 / rep.components["var_B_Q"])
        worst_sum = max(worst_sum, abs(rep.lhs - (2 - 2 * p * p)))
        worst_g = max(worst_g, abs(g - 3 * p * p))
        if rep.nontrivial:
            grid_nontrivial.append(p)
        res.rows.append([
            p, rep.lhs, 2 - 2 * p * p, measures.concurrence(rho).value, g, 3 * p * p, g_alt,
            rep.rhs, rep.gap, rep.nontrivial, rhs_alt, g >= 1.0, g_alt >= 1.0,
        ])
        res.reports.append(rep)
    res.summary = {
        "points": len(res.rows),
        "variant": cfg.variant_name(),
        "max_abs_inferred_sum_error": worst_sum,
        "max_abs_G_minus_3p2": worst_g,
        "grid_nontrivial_range": [min(grid_nontrivial), max(grid_nontrivial)] if grid_nontrivial else None,
        "regions": werner_regions(),
    }
    return res


def isotropic_demo(cfg: ExperimentConfig) -> ExperimentResult:
    obs = parse_token_list(cfg.obs_text())
    if len(obs) != 2:
        raise ValueError("isotropic-demo needs exactly two observables")
    d = obs[0].dim
    res = ExperimentResult(
        cfg.experiment,
        [
            "p", "inferred_S", "inferred_Q", "var_A_S", "var_A_Q", "var_B_S", "var_B_Q", "cc_S", "cc_Q",
            "sum_lhs", "sum_rhs", "sum_gap", "product_lhs", "product_rhs", "product_gap",
        ],
    )
    for p in _grid(cfg.grid_steps, 0.0, 1.0):
        rho = states.isotropic(float(p), d)
        sm = bounds.correlator_sum_template(rho, obs)
        pr = bounds.correlator_product_template(rho, obs[0], obs[1])
        _check_satisfied(sm, f"p={p!r}")
        _check_satisfied(pr, f"p={p!r}")
        c = pr.components
        res.rows.append([
            float(p), c["inferred_S"], c["inferred_Q"], c["var_A_S"], c["var_A_Q"], c["var_B_S"], c["var_B_Q"],
            c["cc_S"], c["cc_Q"], sm.lhs, sm.rhs, sm.gap, pr.lhs, pr.rhs, pr.gap,
        ])
        res.reports += [sm, pr]
    last = res.rows[-1]
    res.summary = {
        "dim": d,
        "points": len(res.rows),
        "product_gap_at_p1": last[-1],
        "sum_gap_at_p1": last[11],
        "max_abs_sum_gap": max(abs(r[11]) for r in res.rows),
        "product_not_tight": bool(last[-1] > 0.1),
    }
    return res


def pauli_local_bound(directions) -> float:
    """Smallest ``sum_i var(n_i . sigma)`` over qubit states: ``N - lambda_max(sum_i n_i n_i^T)``."""
    dirs = np.array([np.asarray(v, dtype=float) for v in directions])
    w = np.linalg.eigvalsh(dirs.T @ dirs)
    return float(len(dirs) - w[-1])


def lur_demo(cfg: ExperimentConfig) -> ExperimentResult:
    obs = parse_token_list(cfg.obs_text())
    dirs = [_direction(o) for o in obs]
    u = pauli_local_bound(dirs)
    variant = cfg.variant_name()
    res = ExperimentResult(
        cfg.experiment,
        ["index", "family", "seed", "lhs", "local_bound", "rhs", "gap", "entanglement_detected", "concurrence"],
    )
    pure_only = variant in ("concurrence", "eof", "entanglement_entropy")
    skipped = 0

    def add(i, family, s, rho):
        nonlocal skipped
        try:
            rep = bounds.lur_violation(rho, obs, obs, u, u, variant)
        except MixedStateError:
            skipped += 1
            return None
        res.rows.append([
            i, family, s, rep.lhs, u + u, rep.rhs, rep.gap,
            rep.flags["entanglement_detected"], measures.concurrence(rho).value,
        ])
        res.reports.append(rep)
        return rep

    singlet = add(0, "singlet", -1, states.pure(states.SINGLET, 2, 2))
    detected_sep = 0
    for i in range(cfg.samples):
        s = sample_seed(cfg.seed, i)
        rho = states.random_separable(s, 2, 2)
        # detection soundness does not depend on the variant
        plain = bounds.lur_violation(rho, obs, obs, u, u, "ccmax")
        if plain.flags["entanglement_detected"]:
            _breach("separable states never flagged", f"sample {i}: lhs={plain.lhs!r} < {2 * u!r}")
        detected_sep += plain.flags["entanglement_detected"]
        rep = add(i + 1, "separable", s, rho)
        if rep is not None and variant in ("ccmax", "mutual_info"):
            _check_satisfied(rep, f"separable sample {i}")
    for i in range(cfg.samples):
        s = sample_seed(cfg.seed, i)
        rep = add(cfg.samples + i + 1, "haar_pure", s, states.random_pure(s, 2, 2))
        if rep is not None and variant != "entanglement_entropy":
            _check_satisfied(rep, f"pure sample {i}")
    res.summary = {
        "variant": variant,
        "local_bound_each": u,
        "singlet_lhs": singlet.lhs if singlet else None,
        "singlet_detected": bool(singlet.flags["entanglement_detected"]) if singlet else None,
        "separable_detected": detected_sep,
        "rows_skipped_mixed": skipped if pure_only else 0,
        "violations": sum(1 for r in res.reports if not r.satisfied),
    }
    return res


def visibility_demo(cfg: ExperimentConfig) -> ExperimentResult:
    variant = cfg.variant_name()
    res = ExperimentResult(
        cfg.experiment,
        ["index", "family", "seed", "u_x", "u_y", "u_z", "v_x", "v_y", "v_z", "lhs", "rhs", "gap", "satisfied"],
    )
    mixed_violations = 0
    for i in range(cfg.samples):
        s = sample_seed(cfg.seed, i)
        rng = make_rng(s, stream=1)
        nu = unit_vector(rng)
        nv = unit_vector(rng)
        u = pauli_from_vec(nu).matrix
        v = pauli_from_vec(nv).matrix
        for family, rho in (("haar_pure", states.random_pure(s, 2, 2)), ("ginibre_mixed", states.random_mixed(s, 2, 2, 4))):
            rep = bounds.visibility_bound(rho, u, v, variant)
            if family == "haar_pure" or variant == "ccmax":
                _check_satisfied(rep, f"{family} sample {i}")
            elif not rep.satisfied:
                mixed_violations += 1
            res.rows.append([i, family, s, *nu, *nv, rep.lhs, rep.rhs, rep.gap, rep.satisfied])
            res.reports.append(rep)
    res.summary = {
        "variant": variant,
        "samples": cfg.samples,
        "pure_violations": 0,
        "mixed_violations": mixed_violations,
    }
    return res


_RUNNERS = {
    "prop1-verify": prop1_verify,
    "sweep-schmidt": sweep_schmidt,
    "scatter-discord": scatter_discord,
    "sweep-werner": sweep_werner,
    "isotropic-demo": isotropic_demo,
    "lur-demo": lur_demo,
    "visibility-demo": visibility_demo,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    if cfg.experiment not in _RUNNERS:
        raise ValueError(f"unknown experiment {cfg.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if cfg.seed < 0 or cfg.samples < 0:
        raise ValueError("seed and samples must be non-negative")
    return _RUNNERS[cfg.experiment](cfg)


_PLOT_COLUMNS = {
    "sweep-schmidt": ("theta", "prop5_lhs", "prop5_rhs"),
    "scatter-discord": ("rhs", "lhs"),
}
PLOTTABLE = tuple(_PLOT_COLUMNS)


def emit_plot_script(csv_path, experiment: str, out_path=None) -> Path:
    """Write a gnuplot script that plots the data in ``csv_path``."""
    csv_path = Path(csv_path)
    if experiment not in _PLOT_COLUMNS:
        raise SchemaMismatchError(f"no plot defined for experiment {experiment!r}")
    text = csv_path.read_text() if csv_path.exists() else ""
    lines = text.splitlines()
    if len(lines) < 2:
        raise SchemaMismatchError(f"{csv_path} has no data rows")
    header = next(csv.reader([lines[0]]))
    missing = [c for c in _PLOT_COLUMNS[experiment] if c not in header]
    if missing:
        raise SchemaMismatchError(f"{csv_path} lacks columns {missing} expected for {experiment}")
    col = {name: header.index(name) + 1 for name in header}
    out = Path(out_path) if out_path else csv_path.with_suffix(".gp")
    src = str(csv_path)
    head = [
        "set datafile separator ','",
        f"set key autotitle columnhead",
        f"set terminal pngcairo size 800,600",
        f"set output '{csv_path.with_suffix('.png')}'",
    ]
    if experiment == "sweep-schmidt":
        body = [
            "set xlabel 'theta'",
            "set ylabel 'product of inferred variances'",
            "set xrange [0:pi/2]",
            f"plot '{src}' using {col['theta']}:{col['prop5_lhs']} with lines lw 2 title 'lhs', \\",
            f"     '{src}' using {col['theta']}:{col['prop5_rhs']} with lines lw 2 title 'rhs'",
        ]
    else:
        body = [
            "set xlabel 'rhs'",
            "set ylabel 'lhs'",
            f"plot '{src}' using {col['rhs']}:{col['lhs']} with points pt 7 ps 0.4 lc rgb 'red' title 'states', \\",
            "     x with lines lc rgb 'black' title 'y = x'",
        ]
    out.write_text("\n".join(head + body) + "\n")
    return out
