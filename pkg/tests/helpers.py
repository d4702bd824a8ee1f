"""Random instance generators and brute-force references shared by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np

from maxplus_location.location import RotatedRectConstraint, WeightedPoint
from maxplus_location.tropical import TropicalMatrix, is_irreducible

NEG_INF = -math.inf


def naive_product(B: list[list[float]], C: list[list[float]]) -> list[list[float]]:
    """Triple-loop max-plus product on plain floats (-inf is the zero)."""
    n, k, m = len(B), len(C), len(C[0])
    out = [[NEG_INF] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            best = NEG_INF
            for t in range(k):
                if B[i][t] == NEG_INF or C[t][j] == NEG_INF:
                    continue
                best = max(best, B[i][t] + C[t][j])
            out[i][j] = best
    return out


def max_cycle_mean(a: np.ndarray) -> float:
    """Largest mean weight over elementary cycles, by enumeration."""
    n = a.shape[0]
    best = NEG_INF
    for length in range(1, n + 1):
        for nodes in itertools.permutations(range(n), length):
            if nodes[0] != min(nodes):
                continue
            total = 0.0
            for s, t in zip(nodes, nodes[1:] + nodes[:1]):
                if a[s, t] == NEG_INF:
                    break
                total += a[s, t]
            else:
                best = max(best, total / length)
    return best


def random_eya(rng: np.random.Generator, scale: float = 10.0) -> tuple[float, float, float, float]:
    return tuple(float(v) for v in rng.uniform(-scale, scale, 4))  # type: ignore[return-value]


def random_irreducible(rng: np.random.Generator, n: int, zero_prob: float = 0.3, scale: float = 10.0) -> TropicalMatrix:
    while True:
        a = rng.uniform(-scale, scale, (n, n))
        a[rng.random((n, n)) < zero_prob] = NEG_INF
        A = TropicalMatrix(a)
        if is_irreducible(A):
            return A


def random_points(rng: np.random.Generator, m: int, coord: float = 100.0, weight: float = 10.0) -> list[WeightedPoint]:
    xy = rng.uniform(-coord, coord, (m, 2))
    w = rng.uniform(-weight, weight, m)
    return [WeightedPoint(float(x), float(y), float(v)) for (x, y), v in zip(xy, w)]


def random_constraint(rng: np.random.Generator, points, absent_prob: float = 0.2) -> RotatedRectConstraint:
    """Offsets drawn around the point cloud in rotated coordinates.

    ``u = x1 + x2`` is bounded by ``c1 <= u <= -d1`` and ``v = x2 - x1`` by
    ``b1 <= v <= -a1``; intervals may come out empty on purpose.
    """
    u = np.array([p.r1 + p.r2 for p in points])
    v = np.array([p.r2 - p.r1 for p in points])
    span_u = max(float(np.ptp(u)), 1.0)
    span_v = max(float(np.ptp(v)), 1.0)

    def interval(vals, span):
        lo = rng.uniform(vals.min() - 0.5 * span, vals.max())
        hi = lo + rng.uniform(-0.1 * span, span)
        return lo, hi

    u_lo, u_hi = interval(u, span_u)
    v_lo, v_hi = interval(v, span_v)
    vals = {"a1": -v_hi, "b1": v_lo, "c1": u_lo, "d1": -u_hi}
    for k in list(vals):
        if rng.random() < absent_prob:
            vals[k] = None
    return RotatedRectConstraint(**vals)
