"""Inferred-variance steering criteria for bipartite quantum states.

The package evaluates uncertainty-relation steering tests in which one
party's measurement outcomes are used to infer the other party's moments.
A criterion is violated when the product of inferred variances drops below
the bound built from the inferred commutator and covariance terms; any
violation certifies steering of the measured party's state.

Layers, bottom up: exact Hermitian linear algebra (`linalg`), density
matrices and the isotropic family (`states`), measurement observables and
the Alice/Bob pairing rules (`observables`), inferred-moment assembly
(`inference`), the criteria themselves (`criteria`), published closed-form
expressions for the two reference families (`closed_forms`), sweep plus
threshold search (`thresholds`), a brute-force probability-table oracle
used for cross-validation (`oracle`), and the CLI (`cli`).
"""

from __future__ import annotations

from .closed_forms import (
    DIFF_SLOTS,
    MODE_CLOSED_FORM,
    ClosedFormError,
    ClosedFormMoments,
    DiffRow,
    closed_form_report,
    closed_forms_for,
    diff_rows,
    qubit_closed_forms,
    qutrit_closed_forms,
    write_diff_csv,
)
from .criteria import (
    CRITERION_HUR,
    CRITERION_SRUR,
    CriterionReport,
    evaluate_criterion,
    evaluate_hur,
    evaluate_srur,
    hur_rhs,
    srur_rhs,
    uncertainty_terms,
    variance,
)
from .families import (
    FAMILIES,
    FAMILY_QUBIT_XZ,
    FAMILY_QUTRIT_B1B2,
    FamilyError,
    family_descriptor,
    family_dimension,
    family_for_dimension,
    family_observables,
    family_state,
)
from .inference import (
    MODE_CONDITIONAL_MEAN,
    MODE_LINEAR_G,
    InferenceError,
    InferredMoments,
    JointDistribution,
    MeasurementSettings,
    conditional_mean,
    expectation,
    full_moments,
    inferred_abs_mean,
    inferred_mean,
    inferred_product_of_means,
    inferred_sq_mean,
    inferred_variance_linear,
    inferred_variance_min,
    joint_distribution,
    reid_g,
)
from .linalg import (
    LinalgError,
    SpectralDecomposition,
    dagger,
    eig_hermitian,
    identity,
    kron,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    partial_trace,
    trace,
)
from .observables import (
    Observable,
    ObservablePairing,
    anticommutator_observable,
    commutator_observable,
    default_pairing,
    difference_observable,
    explicit_pairing,
    observable_from_json,
    observable_to_json,
    qutrit_triplet,
    spin_half,
)
from .oracle import (
    OracleError,
    OutcomeTable,
    audit_dump,
    enumerate_table,
    oracle_moments,
    table_moment,
)
from .states import (
    DensityMatrix,
    InvalidStateError,
    IsotropicParams,
    isotropic,
    max_entangled,
    state_diagnostics,
    state_from_json,
    state_to_json,
    validate,
)
from .thresholds import (
    SweepResult,
    SweepRow,
    ThresholdError,
    ThresholdResult,
    bisect_threshold,
    find_threshold,
    sweep,
    sweep_csv_text,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CRITERION_HUR",
    "CRITERION_SRUR",
    "DIFF_SLOTS",
    "FAMILIES",
    "FAMILY_QUBIT_XZ",
    "FAMILY_QUTRIT_B1B2",
    "MODE_CLOSED_FORM",
    "MODE_CONDITIONAL_MEAN",
    "MODE_LINEAR_G",
    "ClosedFormError",
    "ClosedFormMoments",
    "CriterionReport",
    "DensityMatrix",
    "DiffRow",
    "FamilyError",
    "InferenceError",
    "InferredMoments",
    "InvalidStateError",
    "IsotropicParams",
    "JointDistribution",
    "LinalgError",
    "MeasurementSettings",
    "Observable",
    "ObservablePairing",
    "OracleError",
    "OutcomeTable",
    "SpectralDecomposition",
    "SweepResult",
    "SweepRow",
    "ThresholdError",
    "ThresholdResult",
    "anticommutator_observable",
    "audit_dump",
    "bisect_threshold",
    "closed_form_report",
    "closed_forms_for",
    "commutator_observable",
    "conditional_mean",
    "dagger",
    "default_pairing",
    "diff_rows",
    "difference_observable",
    "eig_hermitian",
    "enumerate_table",
    "evaluate_criterion",
    "evaluate_hur",
    "evaluate_srur",
    "expectation",
    "explicit_pairing",
    "family_descriptor",
    "family_dimension",
    "family_for_dimension",
    "family_observables",
    "family_state",
    "find_threshold",
    "full_moments",
    "hur_rhs",
    "identity",
    "inferred_abs_mean",
    "inferred_mean",
    "inferred_product_of_means",
    "inferred_sq_mean",
    "inferred_variance_linear",
    "inferred_variance_min",
    "isotropic",
    "joint_distribution",
    "kron",
    "mat_add",
    "mat_mul",
    "mat_scale",
    "mat_sub",
    "max_entangled",
    "observable_from_json",
    "observable_to_json",
    "oracle_moments",
    "partial_trace",
    "qubit_closed_forms",
    "qutrit_closed_forms",
    "qutrit_triplet",
    "reid_g",
    "spin_half",
    "srur_rhs",
    "state_diagnostics",
    "state_from_json",
    "state_to_json",
    "sweep",
    "sweep_csv_text",
    "table_moment",
    "trace",
    "uncertainty_terms",
    "validate",
    "variance",
    "write_diff_csv",
    "write_sweep_csv",
]
