"""
Rectilinear minimax single-facility location.

Minimize ``max_i (|r1_i - x1| + |r2_i - x2| + w_i)`` over the plane, optionally
restricted to a rectangle whose sides are at 45 degrees to the axes.  The
objective collapses to four terms

    a - x1 + x2,  b + x1 - x2,  c - x1 - x2,  d + x1 + x2

whose coefficients give the optimum and a segment of minimizers in closed
form.  The constrained problem folds the half-plane inequalities into the same
four-term shape after normalizing the unconstrained optimum to zero.

Closed-form arithmetic is plain floating point; the tropical layer backs the
cross-checks (:func:`spectral_point`, :func:`tropical_coefficients`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .tropical import (
    ONE,
    ZERO,
    ShapeError,
    TropicalMatrix,
    TropicalScalar,
    TropicalVector,
    eigenbasis,
    tsum,
)

EXACT_TOL = 1e-9
TIE_TOL = 1e-9

Point = tuple[float, float]


class LocationError(ValueError):
    """Invalid location problem input."""


def _finite(name: str, value) -> float:
    if isinstance(value, bool):
        raise LocationError(f"{name} must be a real number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise LocationError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class WeightedPoint:
    r1: float
    r2: float
    w: float = 0.0

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "w"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))

    @property
    def xy(self) -> Point:
        return (self.r1, self.r2)


@dataclass(frozen=True)
class RotatedRectConstraint:
    """Half-planes ``a1 - x1 + x2 <= 0``, ``b1 + x1 - x2 <= 0``,
    ``c1 - x1 - x2 <= 0``, ``d1 + x1 + x2 <= 0``.

    ``None`` marks an absent inequality (the tropical zero).
    """

    a1: float | None = None
    b1: float | None = None
    c1: float | None = None
    d1: float | None = None

    def __post_init__(self) -> None:
        for name in ("a1", "b1", "c1", "d1"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _finite(name, v))

    def as_tuple(self) -> tuple[float, float, float, float]:
        """Offsets as floats with ``-inf`` for absent entries."""
        return tuple(-math.inf if v is None else v for v in (self.a1, self.b1, self.c1, self.d1))  # type: ignore[return-value]

    def as_tropical(self) -> tuple[TropicalScalar, ...]:
        return tuple(TropicalScalar.of(v) for v in (self.a1, self.b1, self.c1, self.d1))

    @property
    def is_vacuous(self) -> bool:
        return all(v is None for v in (self.a1, self.b1, self.c1, self.d1))


@dataclass(frozen=True)
class ProblemInstance:
    points: tuple[WeightedPoint, ...]
    constraint: RotatedRectConstraint | None = None

    def __post_init__(self) -> None:
        pts = tuple(
            p if isinstance(p, WeightedPoint) else WeightedPoint(*p) for p in self.points
        )
        if len(pts) < 2:
            raise LocationError(f"at least two points are required, got {len(pts)}")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Coefficients:
    a: float
    b: float
    c: float
    d: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def as_tropical(self) -> tuple[TropicalScalar, ...]:
        return tuple(TropicalScalar.of(v) for v in self.as_tuple())


class CaseTag(str, enum.Enum):
    AB_DOMINANT = "AB_DOMINANT"
    CD_DOMINANT = "CD_DOMINANT"
    TIE = "TIE"


@dataclass(frozen=True)
class SolutionReport:
    """Optimal value and the segment of minimizers ``x(alpha)``, alpha in [0, 1].

    For a constrained solve ``lam`` is the optimum of the merged objective and
    ``lam0`` the unconstrained optimum; ``exact`` says whether ``lam`` is zero.
    """

    lam: float
    endpoint_alpha0: Point
    endpoint_alpha1: Point
    exact: bool
    case_tag: CaseTag
    coefficients: Coefficients
    alpha: float = 0.5
    point_alpha: Point = (0.0, 0.0)
    lam0: float | None = None
    base_coefficients: Coefficients | None = field(default=None, repr=False)

    @property
    def constrained(self) -> bool:
        return self.lam0 is not None

    def point(self, alpha: float) -> Point:
        return solution_point(self.coefficients, self.lam, alpha)


# --- metric and objectives -------------------------------------------------


def rectilinear_distance(p: Sequence[float], q: Sequence[float]) -> float:
    return abs(p[0] - q[0]) + abs(p[1] - q[1])


def rectilinear_distance_tropical(p: Sequence[float], q: Sequence[float]) -> TropicalScalar:
    """The same distance written as ``(s1^-1 r1 + r1^-1 s1)(s2^-1 r2 + r2^-1 s2)``."""
    r1, r2 = TropicalScalar(p[0]), TropicalScalar(p[1])
    s1, s2 = TropicalScalar(q[0]), TropicalScalar(q[1])
    return (s1.inverse() * r1 + r1.inverse() * s1) * (s2.inverse() * r2 + r2.inverse() * s2)


def _points(points: Iterable) -> tuple[WeightedPoint, ...]:
    if isinstance(points, ProblemInstance):
        return points.points
    return tuple(p if isinstance(p, WeightedPoint) else WeightedPoint(*p) for p in points)


def evaluate_objective(points, x: Sequence[float]) -> float:
    """``max_i (rho(r_i, x) + w_i)``."""
    return max(rectilinear_distance(p.xy, x) + p.w for p in _points(points))


def evaluate_constraint(cons: RotatedRectConstraint | None, x: Sequence[float]) -> float:
    """Largest constraint violation term; ``-inf`` when no inequality is given.

    ``x`` lies in the feasible set exactly when the result is ``<= 0``.
    """
    if cons is None:
        return -math.inf
    x1, x2 = x
    a1, b1, c1, d1 = cons.as_tuple()
    return max(a1 - x1 + x2, b1 + x1 - x2, c1 - x1 - x2, d1 + x1 + x2)


def is_feasible(cons: RotatedRectConstraint | None, x: Sequence[float], tol: float = 0.0) -> bool:
    return evaluate_constraint(cons, x) <= tol


def evaluate_merged(instance: ProblemInstance, x: Sequence[float]) -> float:
    """``max(phi(x) - lam0, phi1(x))`` with ``lam0`` the unconstrained optimum."""
    lam0 = lambda_from_coefficients(unconstrained_coefficients(instance.points))
    return max(evaluate_objective(instance.points, x) - lam0, evaluate_constraint(instance.constraint, x))


def evaluate_four_term(co: Coefficients, x: Sequence[float]) -> float:
    x1, x2 = x
    return max(co.a - x1 + x2, co.b + x1 - x2, co.c - x1 - x2, co.d + x1 + x2)


# --- coefficients ----------------------------------------------------------


def unconstrained_coefficients(points) -> Coefficients:
    pts = _points(points)
    if not pts:
        raise LocationError("coefficients need at least one point")
    arr = np.array([(p.r1, p.r2, p.w) for p in pts])
    r1, r2, w = arr[:, 0], arr[:, 1], arr[:, 2]
    return Coefficients(
        a=float(np.max(w + r1 - r2)),
        b=float(np.max(w - r1 + r2)),
        c=float(np.max(w + r1 + r2)),
        d=float(np.max(w - r1 - r2)),
    )


def tropical_coefficients(points) -> tuple[TropicalScalar, ...]:
    """Same coefficients computed with semiring operations only."""
    pts = _points(points)
    if not pts:
        raise LocationError("coefficients need at least one point")
    terms = []
    for p in pts:
        w, r1, r2 = TropicalScalar(p.w), TropicalScalar(p.r1), TropicalScalar(p.r2)
        terms.append(
            (
                w * r1 * r2.inverse(),
                w * r1.inverse() * r2,
                w * r1 * r2,
                w * r1.inverse() * r2.inverse(),
            )
        )
    return tuple(tsum(t[k] for t in terms) for k in range(4))


def lambda_from_coefficients(co: Coefficients) -> float:
    a, b, c, d = co.as_tuple()
    if not all(math.isfinite(v) for v in (a, b, c, d)):
        raise LocationError(f"all coefficients must be finite, got {co}")
    return max(a + b, c + d) / 2.0


def build_extended_matrix(co: Coefficients) -> TropicalMatrix:
    """3x3 matrix of the lifted problem over ``y = (x1, x2, x1^-1)``."""
    a, b, c, d = co.as_tropical()
    if any(v.is_zero for v in (a, b, c, d)):
        raise LocationError("extended matrix needs finite coefficients")
    return TropicalMatrix([[ZERO, a, ZERO], [b, ZERO, c], [ZERO, d, ZERO]])


def case_tag(co: Coefficients, tol: float = TIE_TOL) -> CaseTag:
    gap = (co.a + co.b) - (co.c + co.d)
    if abs(gap) <= tol:
        return CaseTag.TIE
    return CaseTag.AB_DOMINANT if gap > 0 else CaseTag.CD_DOMINANT


def solution_point(co: Coefficients, lam: float, alpha: float) -> Point:
    a, b, c, d = co.as_tuple()
    x1 = alpha / 2.0 * (a - d) - (1.0 - alpha) / 2.0 * (b - c)
    x2 = (2.0 * alpha - 1.0) * lam - alpha / 2.0 * (a + d) + (1.0 - alpha) / 2.0 * (b + c)
    return (x1, x2)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise LocationError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def _report(co: Coefficients, lam: float, alpha: float, exact: bool, **extra) -> SolutionReport:
    return SolutionReport(
        lam=lam,
        endpoint_alpha0=solution_point(co, lam, 0.0),
        endpoint_alpha1=solution_point(co, lam, 1.0),
        exact=exact,
        case_tag=case_tag(co),
        coefficients=co,
        alpha=alpha,
        point_alpha=solution_point(co, lam, alpha),
        **extra,
    )


def solve_unconstrained(points, alpha: float = 0.5) -> SolutionReport:
    pts = _points(points)
    if len(pts) < 2:
        raise LocationError(f"at least two points are required, got {len(pts)}")
    alpha = _check_alpha(alpha)
    co = unconstrained_coefficients(pts)
    return _report(co, lambda_from_coefficients(co), alpha, exact=True)


def merge_constraints(co0: Coefficients, lam0: float, cons: RotatedRectConstraint) -> Coefficients:
    """Normalize the unconstrained terms by ``lam0`` and fold in the half-planes."""
    if not math.isfinite(lam0):
        raise LocationError("lam0 must be finite")
    a1, b1, c1, d1 = cons.as_tuple()
    return Coefficients(
        a=max(co0.a - lam0, a1),
        b=max(co0.b - lam0, b1),
        c=max(co0.c - lam0, c1),
        d=max(co0.d - lam0, d1),
    )


def solve_constrained(instance: ProblemInstance, alpha: float = 0.5) -> SolutionReport:
    """Solve over the rotated rectangle, or report the merged-objective minimizer.

    ``exact`` is true when the merged optimum is zero: then ``x(alpha)`` is
    feasible and attains the unconstrained optimum ``lam0``.  Otherwise the
    returned segment minimizes ``max(phi - lam0, phi1)`` and may be infeasible.
    """
    if instance.constraint is None:
        return solve_unconstrained(instance.points, alpha)
    alpha = _check_alpha(alpha)
    co0 = unconstrained_coefficients(instance.points)
    lam0 = lambda_from_coefficients(co0)
    co = merge_constraints(co0, lam0, instance.constraint)
    lam = lambda_from_coefficients(co)
    return _report(co, lam, alpha, exact=abs(lam) <= EXACT_TOL, lam0=lam0, base_coefficients=co0)


def solve(instance: ProblemInstance, alpha: float = 0.5) -> SolutionReport:
    if instance.constraint is None:
        return solve_unconstrained(instance.points, alpha)
    return solve_constrained(instance, alpha)


# --- spectral cross-check --------------------------------------------------


def proper_solution_check(y, tol: float = EXACT_TOL) -> bool:
    """First and last entries of a lifted vector must be mutual inverses."""
    y = TropicalVector(y)
    if len(y) != 3:
        raise ShapeError(f"lifted vector must have 3 entries, got {len(y)}")
    if not y.is_finite:
        return False
    return abs((y[0] * y[2]).value - ONE.value) <= tol  # type: ignore[operator]


def spectral_lift(co: Coefficients, alpha: float) -> TropicalVector:
    """Minimizer of ``y^- A y`` from eigenvectors of ``A`` and ``A^T``,
    rescaled so that its first and last entries are reciprocal."""
    alpha = _check_alpha(alpha)
    A = build_extended_matrix(co)
    u = eigenbasis(A).first
    v = eigenbasis(A.T).first
    # entry-wise u_i^alpha (x) v_i^(alpha-1)
    y = TropicalVector([ui**alpha * vi ** (alpha - 1.0) for ui, vi in zip(u, v)])
    scale = TropicalScalar((y.array[0] + y.array[2]) / 2.0).inverse()
    return y * scale


def spectral_point(co: Coefficients, alpha: float) -> Point:
    y = spectral_lift(co, alpha)
    return (float(y.array[0]), float(y.array[1]))


__all__ = [
    "CaseTag",
    "Coefficients",
    "LocationError",
    "ProblemInstance",
    "RotatedRectConstraint",
    "SolutionReport",
    "WeightedPoint",
    "build_extended_matrix",
    "case_tag",
    "evaluate_constraint",
    "evaluate_four_term",
    "evaluate_merged",
    "evaluate_objective",
    "is_feasible",
    "lambda_from_coefficients",
    "merge_constraints",
    "proper_solution_check",
    "rectilinear_distance",
    "rectilinear_distance_tropical",
    "solution_point",
    "solve",
    "solve_constrained",
    "solve_unconstrained",
    "spectral_lift",
    "spectral_point",
    "tropical_coefficients",
    "unconstrained_coefficients",
]
