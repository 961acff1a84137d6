"""Sweeps over the mixing weight p and threshold localization by bisection.

A criterion's margin on the built-in families is positive at p = 0 and
negative at p = 1; the threshold is the sign change. The finder pre-sweeps a
coarse grid so a non-monotone margin is caught (reported as multi_crossing
and resolved to the smallest crossing), then bisects deterministically.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_forms import MODE_CLOSED_FORM, closed_form_report
from .criteria import CRITERION_HUR, CRITERION_SRUR, CriterionReport, evaluate_criterion
from .families import (
    FAMILIES,
    FamilyError,
    family_descriptor,
    family_for_dimension,
    family_observables,
    family_state,
)
from .inference import MODE_CONDITIONAL_MEAN, MODE_LINEAR_G, MeasurementSettings

__all__ = [
    "ThresholdError",
    "SweepRow",
    "SweepResult",
    "ThresholdResult",
    "resolve_family",
    "family_evaluator",
    "sweep",
    "find_threshold",
    "bisect_threshold",
    "sweep_csv_text",
    "write_sweep_csv",
]

DEFAULT_TOL = 1e-9
_BISECT_MAX_ITER = 60
_PRE_SWEEP_POINTS = 32

MODES = (MODE_LINEAR_G, MODE_CONDITIONAL_MEAN, MODE_CLOSED_FORM)
CRITERIA = (CRITERION_SRUR, CRITERION_HUR)


class ThresholdError(RuntimeError):
    """No usable sign change of the margin on [0, 1]."""


@dataclass(frozen=True)
class SweepRow:
    p: float
    lhs: float
    rhs: float
    margin: float
    violated: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


@dataclass(frozen=True)
class ThresholdResult:
    p_star: float
    bracket: tuple[float, float]
    evaluations: int
    margin_at_p_star: float
    multi_crossing: bool

    def to_json_dict(self) -> dict:
        return {
            "p_star": float(self.p_star),
            "bracket": [float(self.bracket[0]), float(self.bracket[1])],
            "evaluations": int(self.evaluations),
            "margin_at_p_star": float(self.margin_at_p_star),
            "multi_crossing": bool(self.multi_crossing),
        }


def resolve_family(family: str, d: int | None = None) -> str:
    """Accept either a family name or ("isotropic", d)."""
    if family in FAMILIES:
        return family
    if family == "isotropic":
        if d is None:
            raise FamilyError("family 'isotropic' needs a local dimension d")
        return family_for_dimension(d)
    raise FamilyError(f"unknown family {family!r}")


def family_evaluator(
    family: str, criterion: str = CRITERION_SRUR, mode: str = MODE_LINEAR_G
) -> Callable[[float], CriterionReport]:
    """p -> CriterionReport for one family/criterion/mode combination.

    Engine modes build the measurement settings once up front; everything
    that depends on p is recomputed per call, so the evaluator is pure.
    """
    if criterion not in CRITERIA:
        raise FamilyError(f"unknown criterion {criterion!r}")
    if mode not in MODES:
        raise FamilyError(f"unknown mode {mode!r}")
    if mode == MODE_CLOSED_FORM:
        return lambda p: closed_form_report(family, p, criterion)

    b1, b2 = family_observables(family)
    settings = MeasurementSettings.build(b1, b2)

    def evaluate(p: float) -> CriterionReport:
        return evaluate_criterion(
            family_state(family, p),
            mode=mode,
            criterion=criterion,
            settings=settings,
            state_descriptor=family_descriptor(family, p),
        )

    return evaluate


def sweep(
    family: str,
    d: int | None = None,
    criterion: str = CRITERION_SRUR,
    mode: str = MODE_LINEAR_G,
    p_start: float = 0.0,
    p_end: float = 1.0,
    steps: int = 101,
    jobs: int = 1,
) -> SweepResult:
    """Evaluate the criterion on a uniform inclusive grid of p values."""
    if not (0.0 <= p_start < p_end <= 1.0):
        raise FamilyError(
            f"need 0 <= p_start < p_end <= 1, got [{p_start}, {p_end}]"
        )
    if int(steps) != steps or steps < 2:
        raise FamilyError(f"steps must be an integer >= 2, got {steps}")
    if int(jobs) != jobs or jobs < 1:
        raise FamilyError(f"jobs must be an integer >= 1, got {jobs}")
    evaluate = family_evaluator(resolve_family(family, d), criterion, mode)
    grid = np.linspace(p_start, p_end, int(steps))

    def row(p: float) -> SweepRow:
        rep = evaluate(float(p))
        return SweepRow(float(p), rep.lhs, rep.rhs, rep.margin, rep.violated)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            rows = tuple(pool.map(row, grid))  # map preserves p order
    else:
        rows = tuple(row(p) for p in grid)
    return SweepResult(rows)


def bisect_threshold(
    margin_fn: Callable[[float], float],
    tol: float = DEFAULT_TOL,
    pre_sweep_points: int = _PRE_SWEEP_POINTS,
) -> ThresholdResult:
    """Locate the crossing of an arbitrary margin function on [0, 1].

    Requires margin(0) > 0 > margin(1). Multiple sign changes on the coarse
    grid are flagged and the smallest crossing is refined.
    """
    if tol <= 0.0:
        raise ThresholdError(f"tolerance must be positive, got {tol}")
    evaluations = 0

    def margin(p: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return float(margin_fn(p))

    grid = np.linspace(0.0, 1.0, pre_sweep_points)
    margins = [margin(float(p)) for p in grid]
    if not margins[0] > 0.0:
        raise ThresholdError(
            f"margin at p=0 is {margins[0]:.6g}; the criterion is already "
            "violated at p=0, no threshold to find"
        )
    if not margins[-1] < 0.0:
        raise ThresholdError(
            f"margin at p=1 is {margins[-1]:.6g}; no sign change on [0, 1], "
            "the criterion is never violated"
        )
    positive = [m > 0.0 for m in margins]
    crossings = [
        i for i in range(len(grid) - 1) if positive[i] != positive[i + 1]
    ]
    multi = len(crossings) > 1
    lo, hi = float(grid[crossings[0]]), float(grid[crossings[0] + 1])

    for _ in range(_BISECT_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    p_star = 0.5 * (lo + hi)
    margin_at_p_star = margin(p_star)
    return ThresholdResult(
        p_star=p_star,
        bracket=(lo, hi),
        evaluations=evaluations,
        margin_at_p_star=margin_at_p_star,
        multi_crossing=multi,
    )


def find_threshold(
    family: str,
    d: int | None = None,
    criterion: str = CRITERION_SRUR,
    mode: str = MODE_LINEAR_G,
    tol: float = DEFAULT_TOL,
) -> ThresholdResult:
    """Bisect the violation threshold of a built-in family."""
    evaluate = family_evaluator(resolve_family(family, d), criterion, mode)
    return bisect_threshold(lambda p: evaluate(p).margin, tol=tol)


def sweep_csv_text(result: SweepResult) -> str:
    """Deterministic CSV serialization, 12 significant digits."""
    lines = ["p,lhs,rhs,margin,violated"]
    for r in result.rows:
        flag = "true" if r.violated else "false"
        lines.append(
            f"{r.p:.12g},{r.lhs:.12g},{r.rhs:.12g},{r.margin:.12g},{flag}"
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(fileobj, result: SweepResult) -> None:
    fileobj.write(sweep_csv_text(result))
