"""Command-line interface.

Commands: evaluate (one criterion report as JSON on stdout), sweep (CSV
file over a p grid), threshold (bisection result as JSON), validate-state
(diagnostics for a state file). Exit codes: 0 success, 1 validate-state ran
on an invalid state, 2 invalid configuration or malformed input file,
3 numerical failure, 4 threshold without a margin sign change.

All output is deterministic for a fixed configuration; the CLI contains no
randomness. Config problems are detected before any output file is opened,
so failed runs never leave partial files behind.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closed_forms import (
    MODE_CLOSED_FORM,
    ClosedFormError,
    closed_form_report,
    diff_rows,
    write_diff_csv,
)
from .criteria import CRITERION_HUR, CRITERION_SRUR, evaluate_criterion
from .families import (
    FamilyError,
    family_descriptor,
    family_for_dimension,
    family_observables,
    family_state,
)
from .inference import (
    MODE_CONDITIONAL_MEAN,
    MODE_LINEAR_G,
    InferenceError,
    full_moments,
)
from .linalg import LinalgError
from .observables import (
    default_pairing,
    explicit_pairing,
    observable_from_json,
)
from .oracle import OracleError, audit_dump, oracle_moments
from .states import (
    InvalidStateError,
    _matrix_from_json,
    state_diagnostics,
    state_from_json,
)
from .thresholds import (
    ThresholdError,
    find_threshold,
    sweep,
    sweep_csv_text,
)

__all__ = ["main"]

_ENGINE_MODES = (MODE_LINEAR_G, MODE_CONDITIONAL_MEAN)
_ALL_MODES = _ENGINE_MODES + (MODE_CLOSED_FORM,)
_CRITERIA = (CRITERION_SRUR, CRITERION_HUR)


class _ConfigError(Exception):
    """Flag combination the commands cannot act on."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steercrit",
        description="Inferred-variance steering criteria on bipartite states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_family_flags(p: argparse.ArgumentParser, with_file: bool) -> None:
        choices = ("isotropic", "file") if with_file else ("isotropic",)
        p.add_argument("--family", choices=choices, default="isotropic")
        p.add_argument("--d", type=int, default=None,
                       help="local dimension of the isotropic family (2 or 3)")
        p.add_argument("--criterion", choices=_CRITERIA, default=CRITERION_SRUR)
        p.add_argument("--mode", choices=_ALL_MODES, default=MODE_LINEAR_G)

    ev = sub.add_parser("evaluate", help="evaluate one criterion at one p")
    add_family_flags(ev, with_file=True)
    ev.add_argument("--p", type=float, default=None)
    ev.add_argument("--pairing", choices=("transpose", "file"), default="transpose")
    ev.add_argument("--state", type=Path, default=None,
                    help="state JSON (family=file)")
    ev.add_argument("--observables", type=Path, default=None,
                    help="JSON array with Bob's two observables (family=file)")
    ev.add_argument("--pairing-file", type=Path, default=None,
                    help="JSON array with Alice's two observables (pairing=file)")
    ev.add_argument("--audit", action="store_true",
                    help="also write oracle tables and the closed-form diff")
    ev.add_argument("--out", type=Path, default=None,
                    help="audit bundle path (required with --audit)")

    sw = sub.add_parser("sweep", help="criterion over a uniform p grid, as CSV")
    add_family_flags(sw, with_file=False)
    sw.add_argument("--p-start", type=float, default=0.0)
    sw.add_argument("--p-end", type=float, default=1.0)
    sw.add_argument("--steps", type=int, default=101)
    sw.add_argument("--jobs", type=int, default=1,
                    help="parallel evaluations; output is order-independent")
    sw.add_argument("--out", type=Path, required=True, help="CSV output path")

    th = sub.add_parser("threshold", help="bisect the violation threshold in p")
    add_family_flags(th, with_file=False)
    th.add_argument("--tol", type=float, default=1e-9)

    va = sub.add_parser("validate-state", help="check a state JSON file")
    va.add_argument("--state", type=Path, required=True)

    return parser


def _print_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _load_json(path: Path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _ConfigError(f"{path} is not valid JSON: {exc}") from None


def _check_isotropic_dim(d: int | None) -> int:
    if d is None:
        raise _ConfigError("--family isotropic requires --d")
    try:
        family_for_dimension(d)
    except FamilyError as exc:
        raise _ConfigError(str(exc)) from None
    return int(d)


def _check_p(p: float | None) -> float:
    if p is None:
        raise _ConfigError("--p is required")
    if not 0.0 <= p <= 1.0:
        raise _ConfigError(f"--p must lie in [0, 1], got {p}")
    return float(p)


def _load_observable_pair(path: Path):
    data = _load_json(path)
    if not isinstance(data, list) or len(data) < 2:
        raise _ConfigError(f"{path} must hold a JSON array of >= 2 observables")
    try:
        return observable_from_json(data[0]), observable_from_json(data[1])
    except LinalgError as exc:
        raise _ConfigError(f"bad observable in {path}: {exc}") from None


def _cmd_evaluate(args) -> int:
    if args.audit and args.out is None:
        raise _ConfigError("--audit requires --out for the audit bundle")
    if not args.audit and args.out is not None:
        raise _ConfigError("--out on evaluate is only used with --audit")

    if args.mode == MODE_CLOSED_FORM:
        if args.family != "isotropic":
            raise _ConfigError("mode paper-closed-form requires --family isotropic")
        if args.pairing != "transpose" or args.pairing_file is not None:
            raise _ConfigError(
                "mode paper-closed-form fixes the pairing; drop --pairing/--pairing-file"
            )
        if args.state is not None or args.observables is not None:
            raise _ConfigError(
                "mode paper-closed-form uses built-in observables; "
                "drop --state/--observables"
            )

    if args.family == "isotropic":
        if args.state is not None or args.observables is not None:
            raise _ConfigError("--state/--observables are for --family file")
        d = _check_isotropic_dim(args.d)
        p = _check_p(args.p)
        family = family_for_dimension(d)
        if args.pairing != "transpose" or args.pairing_file is not None:
            raise _ConfigError("the isotropic families use the transpose pairing")
        if args.mode == MODE_CLOSED_FORM:
            report = closed_form_report(family, p, args.criterion)
        else:
            b1, b2 = family_observables(family)
            rho = family_state(family, p)
            report = evaluate_criterion(
                rho, b1, b2,
                mode=args.mode,
                criterion=args.criterion,
                state_descriptor=family_descriptor(family, p),
            )
        audit_inputs = (family_state(family, p),) + family_observables(family)
        closed_diff = diff_rows(family, p) if args.audit else None
    else:
        if args.d is not None:
            raise _ConfigError("--d applies to --family isotropic only")
        if args.p is not None:
            raise _ConfigError("--p applies to --family isotropic only")
        if args.state is None or args.observables is None:
            raise _ConfigError("--family file requires --state and --observables")
        state_obj = _load_json(args.state)
        rho = state_from_json(state_obj)
        if not rho.is_bipartite:
            raise _ConfigError(f"{args.state} must hold a bipartite state")
        b1, b2 = _load_observable_pair(args.observables)
        if args.pairing == "file":
            if args.pairing_file is None:
                raise _ConfigError("--pairing file requires --pairing-file")
            a1, a2 = _load_observable_pair(args.pairing_file)
            rule = explicit_pairing({b1.label: a1, b2.label: a2})
        else:
            if args.pairing_file is not None:
                raise _ConfigError("--pairing-file requires --pairing file")
            rule = default_pairing
        report = evaluate_criterion(
            rho, b1, b2,
            pairing_rule=rule,
            mode=args.mode,
            criterion=args.criterion,
            state_descriptor=f"file:{args.state}; observables=({b1.label},{b2.label})",
        )
        audit_inputs = (rho, b1, b2)
        closed_diff = None

    _print_json(report.to_json_dict())

    if args.audit:
        rho_a, b1_a, b2_a = audit_inputs
        engine = full_moments(rho_a, b1_a, b2_a)
        oracle = audit_dump(rho_a, b1_a, b2_a)
        diffs = [
            abs(engine.as_dict()[key] - val)
            for key, val in oracle["moments"].items()
        ]
        bundle = {
            "report": report.to_json_dict(),
            "engine_moments": engine.as_dict(),
            "oracle": oracle,
            "engine_oracle_max_abs_diff": max(diffs),
            "closed_form_diff": None
            if closed_diff is None
            else [
                {
                    "p": row.p,
                    "slot": row.slot,
                    "engine_value": row.engine_value,
                    "paper_value": row.paper_value,
                    "abs_diff": row.abs_diff,
                }
                for row in closed_diff
            ],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(bundle, fh, indent=2)
            fh.write("\n")
        if closed_diff is not None:
            with open(str(args.out) + ".diff.csv", "w", encoding="utf-8") as fh:
                write_diff_csv(fh, closed_diff)
    return 0


def _cmd_sweep(args) -> int:
    d = _check_isotropic_dim(args.d)
    if not 0.0 <= args.p_start < args.p_end <= 1.0:
        raise _ConfigError(
            f"need 0 <= --p-start < --p-end <= 1, got [{args.p_start}, {args.p_end}]"
        )
    if args.steps < 2:
        raise _ConfigError(f"--steps must be >= 2, got {args.steps}")
    if args.jobs < 1:
        raise _ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    result = sweep(
        "isotropic", d,
        criterion=args.criterion,
        mode=args.mode,
        p_start=args.p_start,
        p_end=args.p_end,
        steps=args.steps,
        jobs=args.jobs,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(sweep_csv_text(result))
    return 0


def _cmd_threshold(args) -> int:
    d = _check_isotropic_dim(args.d)
    if args.tol <= 0.0:
        raise _ConfigError(f"--tol must be positive, got {args.tol}")
    result = find_threshold(
        "isotropic", d, criterion=args.criterion, mode=args.mode, tol=args.tol
    )
    _print_json(result.to_json_dict())
    return 0


def _cmd_validate_state(args) -> int:
    obj = _load_json(args.state)
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise _ConfigError(f'{args.state} must hold a state object with "matrix"')
    try:
        matrix = _matrix_from_json(obj["matrix"])
    except InvalidStateError as exc:
        raise _ConfigError(str(exc)) from None
    info = state_diagnostics(matrix)
    info["dims"] = obj.get("dims")
    _print_json(info)
    return 0 if info["valid"] else 1


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "validate-state": _cmd_validate_state,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ThresholdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (LinalgError, InvalidStateError, InferenceError, OracleError,
            ClosedFormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
