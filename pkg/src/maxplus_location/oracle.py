"""
Brute-force grid oracle.

Every point of a regular grid is evaluated and the smallest value wins, ties
broken towards the lexicographically smallest ``(x1, x2)``.  Two evaluators are
provided:

``direct``
    ``max_i (|r1_i - x1| + |r2_i - x2| + w_i)`` point by point, O(m) per node.
``rotated``
    the same values through ``|p| + |q| = max(|p + q|, |p - q|)``: with
    ``u = x1 + x2`` and ``v = x2 - x1`` the objective is
    ``max(F(u), G(v))`` where ``F(u) = max_i(|u - u_i| + w_i)`` and likewise G.
    Both only need the O(n1 + n2) distinct diagonal values of the grid, so
    windows with tens of millions of nodes stay cheap.

Neither evaluator touches the closed-form coefficients.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .location import (
    ProblemInstance,
    RotatedRectConstraint,
    SolutionReport,
    evaluate_constraint,
    evaluate_merged,
    evaluate_objective,
    lambda_from_coefficients,
    merge_constraints,
    unconstrained_coefficients,
)

RESIDUAL_TOL = 1e-9
GAP_FACTOR = 3.0
_DIRECT_CHUNK = 1 << 20


class Objective(str, enum.Enum):
    RAW = "raw"
    MERGED = "merged"


class OracleUsageError(ValueError):
    """Report and instance do not belong together, or bad grid request."""


@dataclass(frozen=True)
class GridSpec:
    x1_min: float
    x1_max: float
    x2_min: float
    x2_max: float
    step: float

    def __post_init__(self) -> None:
        vals = (self.x1_min, self.x1_max, self.x2_min, self.x2_max, self.step)
        if not all(math.isfinite(v) for v in vals):
            raise OracleUsageError(f"grid bounds must be finite: {vals}")
        if self.step <= 0:
            raise OracleUsageError(f"grid step must be positive, got {self.step}")
        if self.x1_max < self.x1_min or self.x2_max < self.x2_min:
            raise OracleUsageError("grid window has max < min")

    @property
    def shape(self) -> tuple[int, int]:
        n1 = int(math.floor((self.x1_max - self.x1_min) / self.step + 1e-9)) + 1
        n2 = int(math.floor((self.x2_max - self.x2_min) / self.step + 1e-9)) + 1
        return n1, n2

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        n1, n2 = self.shape
        return (
            self.x1_min + self.step * np.arange(n1),
            self.x2_min + self.step * np.arange(n2),
        )

    def contains(self, x: Sequence[float]) -> bool:
        return self.x1_min <= x[0] <= self.x1_max and self.x2_min <= x[1] <= self.x2_max

    @classmethod
    def auto(
        cls,
        points,
        constraint: RotatedRectConstraint | None = None,
        step: float = 0.05,
        include: Sequence[Sequence[float]] = (),
    ) -> "GridSpec":
        """Bounding box of the points, padded by two steps.

        The box always holds a minimizer of the raw objective: moving either
        coordinate towards it shortens every distance.  It is widened to the
        corners of a fully specified, non-empty constraint rectangle and to
        every point in ``include`` (typically the endpoints of a report under
        audit).
        """
        pts = points.points if isinstance(points, ProblemInstance) else tuple(points)
        xs = [p.r1 for p in pts] + [q[0] for q in include]
        ys = [p.r2 for p in pts] + [q[1] for q in include]
        if constraint is not None and None not in (constraint.a1, constraint.b1, constraint.c1, constraint.d1):
            # c1 <= x1 + x2 <= -d1 and b1 <= x2 - x1 <= -a1
            us = (constraint.c1, -constraint.d1)
            vs = (constraint.b1, -constraint.a1)
            if us[0] <= us[1] and vs[0] <= vs[1]:
                for u in us:
                    for v in vs:
                        xs.append((u - v) / 2.0)
                        ys.append((u + v) / 2.0)
        pad = 2 * step
        return cls(min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad, step)

    @classmethod
    def bounding(cls, points, step: float = 0.05, margin: float = 0.0) -> "GridSpec":
        """Bounding box of the points, padded by ``margin``."""
        pts = points.points if isinstance(points, ProblemInstance) else tuple(points)
        xs = [p.r1 for p in pts]
        ys = [p.r2 for p in pts]
        return cls(min(xs) - margin, max(xs) + margin, min(ys) - margin, max(ys) + margin, step)


@dataclass(frozen=True)
class GridResult:
    value: float
    argmin: tuple[float, float] | None
    feasible: bool = True
    nodes: int = 0

    @property
    def infeasible_at_resolution(self) -> bool:
        return not self.feasible


# --- evaluators ------------------------------------------------------------


def _lam0(points) -> float:
    return lambda_from_coefficients(unconstrained_coefficients(points))


def _row_block_direct(points, cons, objective, lam0, x1_axis, x2_axis, rows):
    """Values on rows ``rows`` of the grid; ``nan`` marks filtered nodes."""
    r1 = np.array([p.r1 for p in points])
    r2 = np.array([p.r2 for p in points])
    w = np.array([p.w for p in points])
    x1 = x1_axis[rows][:, None]
    x2 = x2_axis[None, :]
    vals = np.full((x1.shape[0], x2.shape[1]), -np.inf)
    for k in range(r1.size):
        np.maximum(vals, np.abs(r1[k] - x1) + np.abs(r2[k] - x2) + w[k], out=vals)
    if cons is None:
        return vals
    a1, b1, c1, d1 = cons.as_tuple()
    phi1 = np.maximum.reduce(
        [
            np.broadcast_to(a1 - x1 + x2, vals.shape),
            np.broadcast_to(b1 + x1 - x2, vals.shape),
            np.broadcast_to(c1 - x1 - x2, vals.shape),
            np.broadcast_to(d1 + x1 + x2, vals.shape),
        ]
    )
    if objective is Objective.MERGED:
        return np.maximum(vals - lam0, phi1)
    return np.where(phi1 <= 0.0, vals, np.nan)


class _Rotated:
    """Precomputed diagonal profiles for the rotated evaluator."""

    def __init__(self, points, cons, objective, lam0, grid: GridSpec) -> None:
        n1, n2 = grid.shape
        h = grid.step
        # u_s = x1_i + x2_j with s = i + j; v_t = x2_j - x1_i with t = j - i + n1 - 1
        s = np.arange(n1 + n2 - 1)
        u = (grid.x1_min + grid.x2_min) + h * s
        v = (grid.x2_min - grid.x1_min) + h * (s - (n1 - 1))
        pu = np.array([p.r1 + p.r2 for p in points])
        pv = np.array([p.r2 - p.r1 for p in points])
        w = np.array([p.w for p in points])
        F = np.full(u.size, -np.inf)
        G = np.full(v.size, -np.inf)
        for k in range(w.size):
            np.maximum(F, np.abs(u - pu[k]) + w[k], out=F)
            np.maximum(G, np.abs(v - pv[k]) + w[k], out=G)
        self.n1, self.n2 = n1, n2
        self.mask_u = self.mask_v = None
        if cons is None:
            self.F, self.G = F, G
            return
        a1, b1, c1, d1 = cons.as_tuple()
        cu = np.maximum(c1 - u, d1 + u)
        cv = np.maximum(a1 + v, b1 - v)
        if objective is Objective.MERGED:
            self.F = np.maximum(F - lam0, cu)
            self.G = np.maximum(G - lam0, cv)
        else:
            self.F, self.G = F, G
            self.mask_u = cu <= 0.0
            self.mask_v = cv <= 0.0

    def rows(self, rows: range) -> np.ndarray:
        n1, n2 = self.n1, self.n2
        out = np.empty((len(rows), n2))
        for k, i in enumerate(rows):
            fu = self.F[i : i + n2]
            gv = self.G[n1 - 1 - i : n1 - 1 - i + n2]
            row = np.maximum(fu, gv)
            if self.mask_u is not None:
                ok = self.mask_u[i : i + n2] & self.mask_v[n1 - 1 - i : n1 - 1 - i + n2]
                row = np.where(ok, row, np.nan)
            out[k] = row
        return out


def _block_min(vals: np.ndarray, row0: int) -> tuple[float, int, int] | None:
    if np.all(np.isnan(vals)):
        return None
    flat = np.nanargmin(vals)  # first occurrence: smallest row, then column
    i, j = np.unravel_index(flat, vals.shape)
    return (float(vals[i, j]), row0 + int(i), int(j))


def grid_search_min(
    points,
    cons: RotatedRectConstraint | None,
    spec: GridSpec,
    objective: Objective | str = Objective.RAW,
    *,
    method: str = "rotated",
    workers: int = 1,
    block_rows: int | None = None,
) -> GridResult:
    """Exhaustive minimum of the chosen objective over the grid.

    RAW minimizes ``max_i(rho(r_i, x) + w_i)``, restricted to nodes with
    ``phi1(x) <= 0`` when ``cons`` is given.  MERGED minimizes
    ``max(phi(x) - lam0, phi1(x))`` over every node.  The reduction is a
    lexicographic ``(value, row, column)`` minimum, so any row partition and
    any number of ``workers`` give the same answer.
    """
    objective = Objective(objective)
    pts = points.points if isinstance(points, ProblemInstance) else tuple(points)
    if not pts:
        raise OracleUsageError("grid search needs at least one point")
    if objective is Objective.MERGED and cons is None:
        raise OracleUsageError("MERGED objective needs a constraint")
    lam0 = _lam0(pts) if objective is Objective.MERGED else 0.0
    n1, n2 = spec.shape
    x1_axis, x2_axis = spec.axes()

    if method == "rotated":
        rot = _Rotated(pts, cons, objective, lam0, spec)
        evaluate = rot.rows
    elif method == "direct":
        def evaluate(rows: range) -> np.ndarray:
            return _row_block_direct(pts, cons, objective, lam0, x1_axis, x2_axis, np.arange(rows.start, rows.stop))
    else:
        raise OracleUsageError(f"unknown method {method!r}")

    if block_rows is None:
        per_row = n2 * (len(pts) if method == "direct" else 1)
        block_rows = max(1, _DIRECT_CHUNK // max(per_row, 1))
    blocks = [range(i, min(i + block_rows, n1)) for i in range(0, n1, block_rows)]

    def run(rows: range):
        return _block_min(evaluate(rows), rows.start)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(run, blocks))
    else:
        partial = [run(b) for b in blocks]

    found = [p for p in partial if p is not None]
    if not found:
        return GridResult(value=math.inf, argmin=None, feasible=False, nodes=n1 * n2)
    value, i, j = min(found)
    return GridResult(value=value, argmin=(float(x1_axis[i]), float(x2_axis[j])), nodes=n1 * n2)


# --- report verification ---------------------------------------------------


@dataclass(frozen=True)
class VerificationVerdict:
    objective: Objective
    step: float
    grid_value: float
    grid_argmin: tuple[float, float] | None
    reported_value: float
    grid_gap: float
    residuals: dict[float, float]
    endpoints_feasible: tuple[bool, bool] | None
    endpoint_values: tuple[float, float] | None
    passed: bool
    failures: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "objective": self.objective.value,
            "step": self.step,
            "grid_value": self.grid_value,
            "grid_argmin": list(self.grid_argmin) if self.grid_argmin else None,
            "reported_value": self.reported_value,
            "grid_gap": self.grid_gap,
            "residuals": {str(k): v for k, v in self.residuals.items()},
            "endpoints_feasible": list(self.endpoints_feasible) if self.endpoints_feasible else None,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def _check_pairing(instance: ProblemInstance, report: SolutionReport) -> None:
    co0 = unconstrained_coefficients(instance.points)
    if instance.constraint is None:
        if report.constrained or report.coefficients != co0:
            raise OracleUsageError("report does not belong to this unconstrained instance")
        return
    if not report.constrained:
        raise OracleUsageError("constrained instance but unconstrained report")
    expected = merge_constraints(co0, _lam0(instance.points), instance.constraint)
    if report.coefficients != expected:
        raise OracleUsageError("report coefficients do not match the instance")


def verify_report(
    instance: ProblemInstance,
    report: SolutionReport,
    spec: GridSpec | None = None,
    *,
    step: float = 0.05,
    alphas: Sequence[float] = (0.0, 0.5, 1.0),
) -> VerificationVerdict:
    """Audit a report against the grid oracle.

    Checks ``lam - 1e-9 <= grid minimum <= lam + 3 * step``, attainment
    ``|objective(x(alpha)) - lam| <= 1e-9`` at the sampled alphas and, for
    exact constrained reports, feasibility of both endpoints.  Unconstrained
    reports are audited on the raw objective, constrained ones on the merged
    objective.
    """
    _check_pairing(instance, report)
    ends = (report.endpoint_alpha0, report.endpoint_alpha1)
    if spec is None:
        spec = GridSpec.auto(instance.points, instance.constraint, step=step, include=ends)

    if instance.constraint is None:
        objective = Objective.RAW
        def f(x):
            return evaluate_objective(instance.points, x)
    else:
        objective = Objective.MERGED
        def f(x):
            return evaluate_merged(instance, x)

    grid = grid_search_min(instance.points, instance.constraint, spec, objective)
    failures = []
    gap = grid.value - report.lam
    if gap < -RESIDUAL_TOL:
        failures.append(f"grid found {grid.value!r} below reported {report.lam!r}")
    if gap > GAP_FACTOR * spec.step:
        failures.append(f"grid minimum exceeds reported value by {gap:.3g} > {GAP_FACTOR} * step")

    residuals = {}
    for alpha in alphas:
        r = abs(f(report.point(alpha)) - report.lam)
        residuals[float(alpha)] = r
        if r > RESIDUAL_TOL:
            failures.append(f"objective at alpha={alpha} misses reported value by {r:.3g}")

    feasible = None
    end_values = None
    if instance.constraint is not None:
        feasible = tuple(evaluate_constraint(instance.constraint, e) <= RESIDUAL_TOL for e in ends)
        end_values = tuple(evaluate_objective(instance.points, e) for e in ends)
        if report.exact:
            if not all(feasible):
                failures.append("exact report with an infeasible endpoint")
            for ev in end_values:
                if abs(ev - report.lam0) > RESIDUAL_TOL:
                    failures.append(f"exact report endpoint value {ev!r} differs from lam0 {report.lam0!r}")

    return VerificationVerdict(
        objective=objective,
        step=spec.step,
        grid_value=grid.value,
        grid_argmin=grid.argmin,
        reported_value=report.lam,
        grid_gap=gap,
        residuals=residuals,
        endpoints_feasible=feasible,  # type: ignore[arg-type]
        endpoint_values=end_values,  # type: ignore[arg-type]
        passed=not failures,
        failures=tuple(failures),
    )


__all__ = [
    "GridResult",
    "GridSpec",
    "Objective",
    "OracleUsageError",
    "VerificationVerdict",
    "grid_search_min",
    "verify_report",
]
