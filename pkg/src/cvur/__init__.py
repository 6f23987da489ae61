"""Conditional-variance uncertainty relations for bipartite quantum states."""
from .bounds import (
    correlator_product_template,
    correlator_sum_template,
    lur_violation,
    prop2_sum_bound,
    prop3_discord_bound,
    prop4_g_bound,
    prop5_product_bound,
    unitary_variance,
    visibility_bound,
)
from .inference import closed_form_inferred_variance, inferred_variance, joint_probs, prop1_identity
from .measures import (
    concurrence,
    connected_correlator,
    covariance_entanglement,
    eof_two_qubit,
    g_function,
    lqu,
    max_connected_correlator,
    mutual_information,
    skew_information,
    von_neumann_entropy,
)
from .observables import ObservableSpec, eigenprojectors, parse_token, pauli_from_vec, spin1, spin32
from .report import BoundReport
from .states import (
    BlochDecomposition,
    DensityMatrix,
    bloch_compose,
    bloch_decompose,
    isotropic,
    pure,
    random_mixed,
    random_pure,
    random_separable,
    schmidt_pure,
    validate,
    werner,
)

__version__ = "0.1.0"
