"""Brute-force recomputation of every statistic from explicit outcome tables.

This module is the ground truth the engine is tested against. It shares the
observables' spectral projectors (measurement outcomes must be literally the
same to compare distributions) but redoes all probability and moment
arithmetic in the plainest possible style: explicit index loops and Python
scalar sums, no vectorization, no shortcuts shared with the inference
engine. Slowness is fine; independence is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .observables import Observable, ObservablePairing, default_pairing
from .states import DensityMatrix

__all__ = [
    "OracleError",
    "OutcomeTable",
    "enumerate_table",
    "table_moment",
    "oracle_moments",
    "audit_dump",
]

PROB_FLOOR = -1e-12
NORMALIZATION_TOL = 1e-10


class OracleError(ValueError):
    """An enumerated table failed a sanity check."""


@dataclass(frozen=True)
class OutcomeTable:
    """Flat list of (alice_outcome, bob_outcome, probability) entries."""

    entries: tuple[tuple[float, float, float], ...]

    def to_json(self) -> list:
        return [[a, b, p] for (a, b, p) in self.entries]


def _naive_kron(x, y) -> list[list[complex]]:
    nx, ny = len(x), len(y)
    out = [[0j] * (nx * ny) for _ in range(nx * ny)]
    for i in range(nx):
        for j in range(nx):
            for k in range(ny):
                for m in range(ny):
                    out[i * ny + k][j * ny + m] = x[i][j] * y[k][m]
    return out


def _naive_trace_product(x, y) -> complex:
    # tr(X Y) without forming the product
    n = len(x)
    total = 0j
    for r in range(n):
        for s in range(n):
            total += x[r][s] * y[s][r]
    return total


def _as_lists(matrix) -> list[list[complex]]:
    return [[complex(z) for z in row] for row in matrix]


def enumerate_table(rho: DensityMatrix, pairing: ObservablePairing) -> OutcomeTable:
    """One entry per (Alice projector, Bob projector) pair.

    Each probability is tr[rho kron(P_a, Q_b)], computed with the naive
    loop arithmetic above.
    """
    if not rho.is_bipartite or rho.dims != (pairing.alice.dim, pairing.bob.dim):
        raise OracleError(
            f"state dims {rho.dims} do not match pairing "
            f"({pairing.alice.dim}, {pairing.bob.dim})"
        )
    rho_rows = _as_lists(rho.matrix)
    entries = []
    total = 0.0
    for a_val, a_proj in zip(
        pairing.alice.spectral.eigenvalues, pairing.alice.spectral.projectors
    ):
        a_rows = _as_lists(a_proj)
        for b_val, b_proj in zip(
            pairing.bob.spectral.eigenvalues, pairing.bob.spectral.projectors
        ):
            joint = _naive_kron(a_rows, _as_lists(b_proj))
            prob = _naive_trace_product(rho_rows, joint).real
            if prob < PROB_FLOOR:
                raise OracleError(f"negative probability {prob:.3e}")
            if abs(prob) < 1e-12:
                prob = 0.0
            total += prob
            entries.append((float(a_val), float(b_val), float(prob)))
    if abs(total - 1.0) >= NORMALIZATION_TOL:
        raise OracleError(f"table sums to {total:.12g}, not 1")
    return OutcomeTable(tuple(entries))


def table_moment(table: OutcomeTable, f) -> float:
    """sum over entries of prob * f(a, b)."""
    total = 0.0
    for a, b, prob in table.entries:
        total += prob * f(a, b)
    return total


def _alice_groups(table: OutcomeTable) -> dict[float, list[tuple[float, float]]]:
    groups: dict[float, list[tuple[float, float]]] = {}
    for a, b, prob in table.entries:
        groups.setdefault(a, []).append((b, prob))
    return groups


def _oracle_g(table: OutcomeTable) -> float:
    mean_ab = table_moment(table, lambda a, b: a * b)
    mean_a2 = table_moment(table, lambda a, b: a * a)
    if mean_a2 <= 1e-12:
        raise OracleError(f"<A^2> = {mean_a2:.3e} too small for the estimator")
    return mean_ab / mean_a2


def _oracle_var_linear(table: OutcomeTable) -> float:
    g = _oracle_g(table)
    return table_moment(table, lambda a, b: (b - g * a) ** 2)


def _oracle_var_min(table: OutcomeTable) -> float:
    total = 0.0
    for pairs in _alice_groups(table).values():
        p_a = sum(prob for _, prob in pairs)
        if p_a <= 0.0:
            continue
        mean = sum(prob * b for b, prob in pairs) / p_a
        mean_sq = sum(prob * b * b for b, prob in pairs) / p_a
        total += p_a * (mean_sq - mean * mean)
    return total


def _oracle_abs_mean(table: OutcomeTable) -> float:
    total = 0.0
    for pairs in _alice_groups(table).values():
        total += abs(sum(prob * b for b, prob in pairs))
    return total


def _oracle_mean(table: OutcomeTable) -> float:
    return table_moment(table, lambda a, b: b)


def _oracle_sq_mean(table: OutcomeTable) -> float:
    total = 0.0
    for pairs in _alice_groups(table).values():
        p_a = sum(prob for _, prob in pairs)
        if p_a <= 0.0:
            continue
        weighted = sum(prob * b for b, prob in pairs)
        total += weighted * weighted / p_a
    return total


def _naive_matmul(x, y) -> list[list[complex]]:
    n = len(x)
    out = [[0j] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                acc += x[i][k] * y[k][j]
            out[i][j] = acc
    return out


def _derived_observable(kind: str, first: Observable, second: Observable) -> Observable:
    """B3/B4/B0 from two observables, using the naive multiply path."""
    x, y = _as_lists(first.matrix), _as_lists(second.matrix)
    n = len(x)
    xy, yx = _naive_matmul(x, y), _naive_matmul(y, x)
    if kind == "commutator":
        rows = [[-1j * (xy[i][j] - yx[i][j]) for j in range(n)] for i in range(n)]
    elif kind == "anticommutator":
        rows = [[xy[i][j] + yx[i][j] for j in range(n)] for i in range(n)]
    elif kind == "difference":
        rows = [[x[i][j] - y[i][j] for j in range(n)] for i in range(n)]
    else:
        raise OracleError(f"unknown derived observable kind {kind!r}")
    return Observable(f"oracle:{kind}({first.label},{second.label})", rows)


def oracle_moments(
    rho: DensityMatrix,
    b1: Observable,
    b2: Observable,
    pairing_rule=default_pairing,
) -> dict:
    """Recompute every InferredMoments field from brute-force tables.

    Mirrors the engine's construction (Alice's derived operators come from
    her A1, A2) but every number is a table sum. Returns a plain dict keyed
    exactly like InferredMoments.as_dict().
    """
    pair1, pair2 = pairing_rule(b1), pairing_rule(b2)
    a1, a2 = pair1.alice, pair2.alice
    pair3 = ObservablePairing(
        bob=_derived_observable("commutator", b1, b2),
        alice=_derived_observable("commutator", a1, a2),
    )
    pair4 = ObservablePairing(
        bob=_derived_observable("anticommutator", b1, b2),
        alice=_derived_observable("anticommutator", a1, a2),
    )
    pair0 = ObservablePairing(
        bob=_derived_observable("difference", b1, b2),
        alice=_derived_observable("difference", a1, a2),
    )
    t1 = enumerate_table(rho, pair1)
    t2 = enumerate_table(rho, pair2)
    t3 = enumerate_table(rho, pair3)
    t4 = enumerate_table(rho, pair4)
    t0 = enumerate_table(rho, pair0)

    sq1, sq2, sq0 = _oracle_sq_mean(t1), _oracle_sq_mean(t2), _oracle_sq_mean(t0)
    return {
        "var_inf_b1": _oracle_var_linear(t1),
        "var_inf_b2": _oracle_var_linear(t2),
        "var_min_b1": _oracle_var_min(t1),
        "var_min_b2": _oracle_var_min(t2),
        "abs_mean_inf_commutator": _oracle_abs_mean(t3),
        "mean_inf_anticommutator": _oracle_mean(t4),
        "sq_mean_inf_b1": sq1,
        "sq_mean_inf_b2": sq2,
        "sq_mean_inf_b0": sq0,
        "product_of_means_inf": 0.5 * (sq1 + sq2 - sq0),
        "g1": _oracle_g(t1),
        "g2": _oracle_g(t2),
    }


def audit_dump(
    rho: DensityMatrix,
    b1: Observable,
    b2: Observable,
    pairing_rule=default_pairing,
) -> dict:
    """JSON-ready dump of the five outcome tables plus the oracle moments."""
    pair1, pair2 = pairing_rule(b1), pairing_rule(b2)
    a1, a2 = pair1.alice, pair2.alice
    tables = {}
    for name, bob, alice in (
        ("b1", b1, a1),
        ("b2", b2, a2),
        (
            "commutator",
            _derived_observable("commutator", b1, b2),
            _derived_observable("commutator", a1, a2),
        ),
        (
            "anticommutator",
            _derived_observable("anticommutator", b1, b2),
            _derived_observable("anticommutator", a1, a2),
        ),
        (
            "difference",
            _derived_observable("difference", b1, b2),
            _derived_observable("difference", a1, a2),
        ),
    ):
        table = enumerate_table(rho, ObservablePairing(bob=bob, alice=alice))
        tables[name] = {
            "bob": bob.label,
            "alice": alice.label,
            "entries": table.to_json(),
        }
    return {
        "tables": tables,
        "moments": oracle_moments(rho, b1, b2, pairing_rule),
    }
