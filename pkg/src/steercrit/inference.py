"""Measurement statistics: joint distributions and inferred moments.

Alice measures her half of a bipartite state to estimate Bob's outcomes.
Two estimators are supported for the inferred variance: the linear one
B_est = g A with g = <A tensor B> / <A^2> (mode "linear-g") and the
conditional mean (mode "conditional-mean"), which is optimal and never worse.
The remaining inferred quantities (absolute commutator mean, anticommutator
mean, squared means and the product of means obtained from the difference
setting B0 = B1 - B2 by polarization) are always conditional-mean based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .linalg import identity, kron
from .observables import (
    Observable,
    ObservablePairing,
    anticommutator_observable,
    commutator_observable,
    default_pairing,
    difference_observable,
)
from .states import DensityMatrix

__all__ = [
    "InferenceError",
    "MODE_LINEAR_G",
    "MODE_CONDITIONAL_MEAN",
    "JointDistribution",
    "InferredMoments",
    "MeasurementSettings",
    "joint_distribution",
    "conditional_mean",
    "reid_g",
    "inferred_variance_linear",
    "inferred_variance_min",
    "inferred_abs_mean",
    "inferred_mean",
    "inferred_sq_mean",
    "inferred_product_of_means",
    "full_moments",
    "expectation",
]

MODE_LINEAR_G = "linear-g"
MODE_CONDITIONAL_MEAN = "conditional-mean"

PROB_CLAMP = 1e-12
NORMALIZATION_TOL = 1e-10
VARIANCE_ORDER_TOL = 1e-10


class InferenceError(ValueError):
    """Ill-posed statistical quantity (bad table, vanishing <A^2>, ...)."""


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Outcome table P(a, b) for one (Alice, Bob) observable pairing."""

    alice_outcomes: tuple[float, ...]
    bob_outcomes: tuple[float, ...]
    probs: np.ndarray

    def alice_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def bob_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def to_json(self) -> dict:
        return {
            "alice_outcomes": [float(a) for a in self.alice_outcomes],
            "bob_outcomes": [float(b) for b in self.bob_outcomes],
            "probs": [[float(p) for p in row] for row in self.probs],
        }


def _check_state_matches(rho: DensityMatrix, pairing: ObservablePairing) -> None:
    if not rho.is_bipartite:
        raise InferenceError("joint statistics need a bipartite state")
    if rho.dims != (pairing.alice.dim, pairing.bob.dim):
        raise InferenceError(
            f"state dims {rho.dims} do not match pairing dims "
            f"({pairing.alice.dim}, {pairing.bob.dim})"
        )


def joint_distribution(rho: DensityMatrix, pairing: ObservablePairing) -> JointDistribution:
    """P(a, b) = tr[rho (P_a tensor Q_b)] over merged eigenprojectors."""
    _check_state_matches(rho, pairing)
    stack = pairing.projector_products
    probs = np.einsum("ij,abji->ab", rho.matrix, stack).real
    if probs.min() < -PROB_CLAMP:
        raise InferenceError(
            f"negative joint probability {probs.min():.3e}"
        )
    probs = np.where(np.abs(probs) < PROB_CLAMP, 0.0, probs)
    total = probs.sum()
    if abs(total - 1.0) >= NORMALIZATION_TOL:
        raise InferenceError(f"joint probabilities sum to {total:.12g}, not 1")
    probs.setflags(write=False)
    return JointDistribution(
        pairing.alice.outcomes, pairing.bob.outcomes, probs
    )


def conditional_mean(jd: JointDistribution, given_alice_outcome: float) -> float:
    """<B | A = a>, the mean of Bob's outcome given Alice's."""
    outcomes = np.asarray(jd.alice_outcomes)
    idx = int(np.argmin(np.abs(outcomes - given_alice_outcome)))
    if abs(outcomes[idx] - given_alice_outcome) > 1e-9:
        raise InferenceError(
            f"{given_alice_outcome!r} is not an Alice outcome of this table"
        )
    row = jd.probs[idx]
    p_a = row.sum()
    if p_a <= 0.0:
        raise InferenceError(
            f"cannot condition on zero-probability outcome {given_alice_outcome!r}"
        )
    return float(row @ np.asarray(jd.bob_outcomes) / p_a)


@lru_cache(maxsize=64)
def _moment_matrices(pairing: ObservablePairing) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(A tensor B, A^2 tensor I, I tensor B^2), cached per pairing."""
    a, b = pairing.alice.matrix, pairing.bob.matrix
    return (
        kron(a, b),
        kron(a @ a, identity(b.shape[0])),
        kron(identity(a.shape[0]), b @ b),
    )


def expectation(rho: DensityMatrix, matrix: np.ndarray) -> float:
    """Real part of tr[rho M] for a Hermitian M on the full space."""
    if matrix.shape[0] != rho.dim:
        raise InferenceError(
            f"operator dimension {matrix.shape[0]} does not match state {rho.dim}"
        )
    return float(np.einsum("ij,ji->", rho.matrix, matrix).real)


def reid_g(rho: DensityMatrix, pairing: ObservablePairing) -> float:
    """g = <A tensor B> / <A^2>, the optimal linear-estimate slope."""
    _check_state_matches(rho, pairing)
    m_ab, m_a2, _ = _moment_matrices(pairing)
    mean_a2 = expectation(rho, m_a2)
    if mean_a2 <= 1e-12:
        raise InferenceError(
            f"<A^2> = {mean_a2:.3e} is too small to define the estimator slope"
        )
    return expectation(rho, m_ab) / mean_a2


def inferred_variance_linear(rho: DensityMatrix, pairing: ObservablePairing) -> float:
    """<(B - g A)^2> = <B^2> - 2 g <A tensor B> + g^2 <A^2>."""
    _check_state_matches(rho, pairing)
    m_ab, m_a2, m_b2 = _moment_matrices(pairing)
    g = reid_g(rho, pairing)
    value = (
        expectation(rho, m_b2)
        - 2.0 * g * expectation(rho, m_ab)
        + g * g * expectation(rho, m_a2)
    )
    return max(0.0, value)


def _conditional_sums(jd: JointDistribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per Alice outcome: P(a), sum_b P(a,b) b, sum_b P(a,b) b^2."""
    b = np.asarray(jd.bob_outcomes)
    p_a = jd.probs.sum(axis=1)
    m1 = jd.probs @ b
    m2 = jd.probs @ (b * b)
    return p_a, m1, m2


def inferred_variance_min(jd: JointDistribution) -> float:
    """sum_a P(a) Var(B | a), the estimator-optimal inferred variance.

    Alice outcomes with zero probability contribute nothing.
    """
    p_a, m1, m2 = _conditional_sums(jd)
    mask = p_a > 0.0
    value = float(np.sum(m2[mask] - m1[mask] ** 2 / p_a[mask]))
    return max(0.0, value)


def _abs_mean(jd: JointDistribution) -> float:
    # sum_a P(a) |<B>_a| = sum_a |sum_b P(a,b) b|, division-free
    _, m1, _ = _conditional_sums(jd)
    return float(np.abs(m1).sum())


def _mean(jd: JointDistribution) -> float:
    _, m1, _ = _conditional_sums(jd)
    return float(m1.sum())


def _sq_mean(jd: JointDistribution) -> float:
    p_a, m1, _ = _conditional_sums(jd)
    mask = p_a > 0.0
    return float(np.sum(m1[mask] ** 2 / p_a[mask]))


def inferred_abs_mean(rho: DensityMatrix, pairing: ObservablePairing) -> float:
    """sum_a P(a) |<B>_a|; used for the commutator observable."""
    return _abs_mean(joint_distribution(rho, pairing))


def inferred_mean(rho: DensityMatrix, pairing: ObservablePairing) -> float:
    """sum_a P(a) <B>_a (no absolute value); used for the anticommutator."""
    return _mean(joint_distribution(rho, pairing))


def inferred_sq_mean(rho: DensityMatrix, pairing: ObservablePairing) -> float:
    """sum_a P(a) <B>_a^2."""
    return _sq_mean(joint_distribution(rho, pairing))


def _check_difference(pair1, pair2, pair0) -> None:
    db = pair0.bob.matrix - (pair1.bob.matrix - pair2.bob.matrix)
    da = pair0.alice.matrix - (pair1.alice.matrix - pair2.alice.matrix)
    if max(np.max(np.abs(db)), np.max(np.abs(da))) > 1e-12:
        raise InferenceError(
            "difference pairing is not B1 - B2 / A1 - A2 of the given pairings"
        )


def inferred_product_of_means(
    rho: DensityMatrix,
    pairing_b1: ObservablePairing,
    pairing_b2: ObservablePairing,
    pairing_b0: ObservablePairing,
) -> float:
    """(<B1><B2>)_inf by polarization over the three settings.

    2 (<B1><B2>)_inf = (<B1>^2)_inf + (<B2>^2)_inf - (<B0>^2)_inf with
    B0 = B1 - B2 measured as its own setting (and A0 = A1 - A2).
    """
    _check_difference(pairing_b1, pairing_b2, pairing_b0)
    sq1 = inferred_sq_mean(rho, pairing_b1)
    sq2 = inferred_sq_mean(rho, pairing_b2)
    sq0 = inferred_sq_mean(rho, pairing_b0)
    return 0.5 * (sq1 + sq2 - sq0)


@dataclass(frozen=True, eq=False)
class MeasurementSettings:
    """The five pairings one criterion evaluation measures.

    Alice's derived operators are built from her own A1, A2 by the same
    algebra as Bob's: A3 = -i[A1, A2], A4 = {A1, A2}, A0 = A1 - A2. Building
    the settings once and reusing them across a sweep keeps the cached
    spectral decompositions and projector stacks alive.
    """

    pair_b1: ObservablePairing
    pair_b2: ObservablePairing
    pair_commutator: ObservablePairing
    pair_anticommutator: ObservablePairing
    pair_difference: ObservablePairing

    @classmethod
    def build(cls, b1: Observable, b2: Observable, pairing_rule=default_pairing):
        pair1 = pairing_rule(b1)
        pair2 = pairing_rule(b2)
        a1, a2 = pair1.alice, pair2.alice
        return cls(
            pair_b1=pair1,
            pair_b2=pair2,
            pair_commutator=ObservablePairing(
                bob=commutator_observable(b1, b2),
                alice=commutator_observable(a1, a2),
            ),
            pair_anticommutator=ObservablePairing(
                bob=anticommutator_observable(b1, b2),
                alice=anticommutator_observable(a1, a2),
            ),
            pair_difference=ObservablePairing(
                bob=difference_observable(b1, b2),
                alice=difference_observable(a1, a2),
            ),
        )


@dataclass(frozen=True, eq=False)
class InferredMoments:
    """Every inferred quantity one criterion evaluation needs.

    The raw joint tables are retained for audits; they do not enter equality
    or serialization of the numeric record.
    """

    var_inf_b1: float
    var_inf_b2: float
    var_min_b1: float
    var_min_b2: float
    abs_mean_inf_commutator: float
    mean_inf_anticommutator: float
    sq_mean_inf_b1: float
    sq_mean_inf_b2: float
    sq_mean_inf_b0: float
    product_of_means_inf: float
    g1: float
    g2: float
    tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.var_inf_b1 < self.var_min_b1 - VARIANCE_ORDER_TOL:
            raise InferenceError(
                f"var_inf_b1 {self.var_inf_b1!r} below var_min_b1 {self.var_min_b1!r}"
            )
        if self.var_inf_b2 < self.var_min_b2 - VARIANCE_ORDER_TOL:
            raise InferenceError(
                f"var_inf_b2 {self.var_inf_b2!r} below var_min_b2 {self.var_min_b2!r}"
            )

    NUMERIC_FIELDS = (
        "var_inf_b1",
        "var_inf_b2",
        "var_min_b1",
        "var_min_b2",
        "abs_mean_inf_commutator",
        "mean_inf_anticommutator",
        "sq_mean_inf_b1",
        "sq_mean_inf_b2",
        "sq_mean_inf_b0",
        "product_of_means_inf",
        "g1",
        "g2",
    )

    def as_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in self.NUMERIC_FIELDS}


def full_moments(
    rho: DensityMatrix,
    b1: Observable | None = None,
    b2: Observable | None = None,
    pairing_rule=default_pairing,
    settings: MeasurementSettings | None = None,
) -> InferredMoments:
    """Compute the complete InferredMoments record for one evaluation.

    Either pass (b1, b2, pairing_rule) or a prebuilt MeasurementSettings.
    """
    if settings is None:
        if b1 is None or b2 is None:
            raise InferenceError("full_moments needs (b1, b2) or settings")
        settings = MeasurementSettings.build(b1, b2, pairing_rule)

    jd1 = joint_distribution(rho, settings.pair_b1)
    jd2 = joint_distribution(rho, settings.pair_b2)
    jd3 = joint_distribution(rho, settings.pair_commutator)
    jd4 = joint_distribution(rho, settings.pair_anticommutator)
    jd0 = joint_distribution(rho, settings.pair_difference)

    sq1, sq2, sq0 = _sq_mean(jd1), _sq_mean(jd2), _sq_mean(jd0)
    return InferredMoments(
        var_inf_b1=inferred_variance_linear(rho, settings.pair_b1),
        var_inf_b2=inferred_variance_linear(rho, settings.pair_b2),
        var_min_b1=inferred_variance_min(jd1),
        var_min_b2=inferred_variance_min(jd2),
        abs_mean_inf_commutator=_abs_mean(jd3),
        mean_inf_anticommutator=_mean(jd4),
        sq_mean_inf_b1=sq1,
        sq_mean_inf_b2=sq2,
        sq_mean_inf_b0=sq0,
        product_of_means_inf=0.5 * (sq1 + sq2 - sq0),
        g1=reid_g(rho, settings.pair_b1),
        g2=reid_g(rho, settings.pair_b2),
        tables={
            "b1": jd1,
            "b2": jd2,
            "commutator": jd3,
            "anticommutator": jd4,
            "difference": jd0,
        },
    )
