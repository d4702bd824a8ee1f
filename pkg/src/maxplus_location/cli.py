"""Command-line front end: ``maxplus-locate solve <file>``.

Instance files are JSON::

    {
      "points": [{"x1": 0, "x2": 0, "w": 0}, [2, 0, 0]],
      "constraint": {"c1": 4},
      "alpha": 0.5,
      "audit": {"step": 0.05}
    }

A point is an object with ``x1``, ``x2`` and optional ``w`` (default 0) or a
``[x1, x2]`` / ``[x1, x2, w]`` array.  Every constraint field is optional;
an empty ``constraint`` object is the vacuous constraint.  The report goes to
stdout as JSON; ``--verbose`` adds a readable summary on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .location import (
    ProblemInstance,
    RotatedRectConstraint,
    SolutionReport,
    WeightedPoint,
    evaluate_constraint,
    evaluate_objective,
    lambda_from_coefficients,
    solve,
    unconstrained_coefficients,
)
from .oracle import GridSpec, OracleUsageError, verify_report
from .tropical import EigenbasisError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_INTERNAL = 3

DEFAULT_ALPHA = 0.5
DEFAULT_STEP = 0.05


class InstanceError(ValueError):
    """Malformed or invalid instance file."""


@dataclass(frozen=True)
class InstanceFile:
    problem: ProblemInstance
    alpha: float = DEFAULT_ALPHA
    audit_step: float | None = None


# --- parsing ---------------------------------------------------------------


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(f"{where}: expected a number, got {json.dumps(value)}")
    v = float(value)
    if not math.isfinite(v):
        raise InstanceError(f"{where}: expected a finite number, got {value!r}")
    return v


def _point(raw: Any, where: str) -> WeightedPoint:
    if isinstance(raw, dict):
        unknown = set(raw) - {"x1", "x2", "w"}
        if unknown:
            raise InstanceError(f"{where}: unknown field(s) {sorted(unknown)}")
        for key in ("x1", "x2"):
            if key not in raw:
                raise InstanceError(f"{where}: missing field '{key}'")
        return WeightedPoint(
            _number(raw["x1"], f"{where}.x1"),
            _number(raw["x2"], f"{where}.x2"),
            _number(raw.get("w", 0), f"{where}.w"),
        )
    if isinstance(raw, list):
        if len(raw) not in (2, 3):
            raise InstanceError(f"{where}: expected [x1, x2] or [x1, x2, w], got {len(raw)} entries")
        vals = [_number(v, f"{where}[{k}]") for k, v in enumerate(raw)]
        return WeightedPoint(*vals)
    raise InstanceError(f"{where}: expected an object or array, got {json.dumps(raw)}")


def parse_instance(text: str) -> InstanceFile:
    """Parse and validate instance text; errors carry line or field context."""
    try:
        data = json.loads(text, parse_constant=lambda c: c)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InstanceError("top level must be an object")
    unknown = set(data) - {"points", "constraint", "alpha", "audit"}
    if unknown:
        raise InstanceError(f"unknown top-level field(s) {sorted(unknown)}")
    if "points" not in data:
        raise InstanceError("missing field 'points'")
    raw_points = data["points"]
    if not isinstance(raw_points, list):
        raise InstanceError("points: expected an array")
    points = tuple(_point(p, f"points[{i}]") for i, p in enumerate(raw_points))
    if len(points) < 2:
        raise InstanceError(f"points: at least two points are required, got {len(points)}")

    constraint = None
    if "constraint" in data and data["constraint"] is not None:
        raw = data["constraint"]
        if not isinstance(raw, dict):
            raise InstanceError("constraint: expected an object")
        unknown = set(raw) - {"a1", "b1", "c1", "d1"}
        if unknown:
            raise InstanceError(f"constraint: unknown field(s) {sorted(unknown)}")
        constraint = RotatedRectConstraint(
            **{k: None if raw[k] is None else _number(raw[k], f"constraint.{k}") for k in raw}
        )

    alpha = DEFAULT_ALPHA
    if data.get("alpha") is not None:
        alpha = _number(data["alpha"], "alpha")
        if not 0.0 <= alpha <= 1.0:
            raise InstanceError(f"alpha: must lie in [0, 1], got {alpha}")

    audit_step = None
    if data.get("audit") is not None:
        raw = data["audit"]
        if not isinstance(raw, dict):
            raise InstanceError("audit: expected an object")
        audit_step = _number(raw.get("step", DEFAULT_STEP), "audit.step")
        if audit_step <= 0:
            raise InstanceError(f"audit.step: must be positive, got {audit_step}")

    return InstanceFile(ProblemInstance(points, constraint), alpha, audit_step)


def dump_instance(inst: InstanceFile) -> str:
    """Canonical JSON text for an instance; parsing it returns an equal instance."""
    data: dict[str, Any] = {
        "points": [{"x1": p.r1, "x2": p.r2, "w": p.w} for p in inst.problem.points],
    }
    cons = inst.problem.constraint
    if cons is not None:
        data["constraint"] = {
            k: getattr(cons, k) for k in ("a1", "b1", "c1", "d1") if getattr(cons, k) is not None
        }
    data["alpha"] = inst.alpha
    if inst.audit_step is not None:
        data["audit"] = {"step": inst.audit_step}
    return json.dumps(data, indent=2) + "\n"


def load_instance(path: str | Path) -> InstanceFile:
    return parse_instance(Path(path).read_text())


# --- reporting -------------------------------------------------------------


def report_dict(report: SolutionReport) -> dict[str, Any]:
    out: dict[str, Any] = {"lambda": report.lam}
    if report.constrained:
        out["lambda0"] = report.lam0
    out.update(
        {
            "alpha": report.alpha,
            "x_alpha0": list(report.endpoint_alpha0),
            "x_alpha": list(report.point_alpha),
            "x_alpha1": list(report.endpoint_alpha1),
            "exact": report.exact,
            "case_tag": report.case_tag.value,
            "coefficients": dict(zip("abcd", report.coefficients.as_tuple())),
        }
    )
    return out


def format_report(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def summary(report: SolutionReport) -> str:
    lines = []
    if report.constrained:
        kind = "exact" if report.exact else "approximate (merged-objective minimizer)"
        lines.append(f"constrained solve: {kind}")
        lines.append(f"  unconstrained optimum lambda0 = {report.lam0:.6g}")
        lines.append(f"  merged optimum lambda       = {report.lam:.6g}")
    else:
        lines.append(f"unconstrained optimum lambda = {report.lam:.6g}")
    lines.append(f"  case: {report.case_tag.value}")
    for label, pt in (("x(0)", report.endpoint_alpha0), (f"x({report.alpha:g})", report.point_alpha), ("x(1)", report.endpoint_alpha1)):
        lines.append(f"  {label:>8} = ({pt[0]:.6g}, {pt[1]:.6g})")
    return "\n".join(lines) + "\n"


def emit_contours(instance: ProblemInstance, window: GridSpec, path: str | Path, report: SolutionReport | None = None) -> int:
    """Write ``x1,x2,phi,phi1,psi`` samples on the grid; returns data-row count.

    Endpoint rows of ``report`` follow the data as ``#``-prefixed lines so
    comment-aware CSV readers skip them.  Without a constraint ``phi1`` is
    ``-inf`` and ``psi`` is ``phi - lambda0``.
    """
    lam0 = lambda_from_coefficients(unconstrained_coefficients(instance.points))
    cons = instance.constraint

    def row(x1: float, x2: float) -> str:
        phi = evaluate_objective(instance.points, (x1, x2))
        phi1 = evaluate_constraint(cons, (x1, x2))
        psi = max(phi - lam0, phi1)
        return ",".join(repr(float(v)) for v in (x1, x2, phi, phi1, psi))

    x1s, x2s = window.axes()
    lines = ["x1,x2,phi,phi1,psi"]
    for x1 in x1s:
        for x2 in x2s:
            lines.append(row(float(x1), float(x2)))
    n_rows = len(lines) - 1
    if report is not None:
        for label, pt in (("alpha=0", report.endpoint_alpha0), ("alpha=1", report.endpoint_alpha1)):
            lines.append(f"# endpoint {label}: " + row(*pt))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return n_rows


# --- entry point -----------------------------------------------------------


def _window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x1min,x1max,x2min,x2max")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window values must be numbers: {text!r}") from None
    return vals  # type: ignore[return-value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxplus-locate",
        description="Exact rectilinear minimax facility location via max-plus spectral theory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file", help="JSON instance file")
    p.add_argument("--alpha", type=float, default=None, help="segment parameter in [0, 1] (default: file value or 0.5)")
    p.add_argument("--audit", action="store_true", help="verify the report with the grid oracle")
    p.add_argument("--step", type=float, default=None, help="grid step for --audit and --contours")
    p.add_argument("--contours", metavar="OUT", default=None, help="write x1,x2,phi,phi1,psi samples to OUT")
    p.add_argument("--window", type=_window, default=None, help="contour window x1min,x1max,x2min,x2max")
    p.add_argument("--verbose", "-v", action="store_true", help="human-readable summary on stderr")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID

    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror or exc}", file=stderr)
        return EXIT_IO

    try:
        inst = parse_instance(text)
        alpha = inst.alpha if args.alpha is None else args.alpha
        if not 0.0 <= alpha <= 1.0:
            raise InstanceError(f"--alpha: must lie in [0, 1], got {alpha}")
        step = args.step if args.step is not None else (inst.audit_step or DEFAULT_STEP)
        if step <= 0:
            raise InstanceError(f"--step: must be positive, got {step}")
        report = solve(inst.problem, alpha)
        payload = report_dict(report)
        if args.audit or inst.audit_step is not None:
            verdict = verify_report(inst.problem, report, step=step)
            payload["audit"] = verdict.as_dict()
        if args.contours is not None:
            window = (
                GridSpec(*args.window, step)
                if args.window is not None
                else GridSpec.auto(inst.problem.points, inst.problem.constraint, step=step,
                                   include=(report.endpoint_alpha0, report.endpoint_alpha1))
            )
            emit_contours(inst.problem, window, args.contours, report)
    except (InstanceError, OracleUsageError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except (EigenbasisError, AssertionError) as exc:
        print(f"internal error: {exc}", file=stderr)
        return EXIT_INTERNAL

    stdout.write(format_report(payload))
    if args.verbose:
        stderr.write(summary(report))
    return EXIT_OK


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
