import pytest

from helpers import random_constraint, random_points
from maxplus_location.location import (
    ProblemInstance,
    RotatedRectConstraint,
    WeightedPoint,
    evaluate_constraint,
    solve,
    solve_unconstrained,
)
from maxplus_location.oracle import (
    GridSpec,
    Objective,
    OracleUsageError,
    grid_search_min,
    verify_report,
)


def test_two_point_raw(two_points):
    res = grid_search_min(two_points, None, GridSpec(-1, 3, -1, 3, 0.01))
    assert res.value == pytest.approx(1.0, abs=1e-9)
    assert res.argmin == pytest.approx((1.0, 0.0), abs=1e-9)


def test_two_point_merged(two_points):
    res = grid_search_min(two_points, RotatedRectConstraint(c1=4), GridSpec(-1, 5, -1, 5, 0.01), Objective.MERGED)
    assert res.value == pytest.approx(1.5, abs=1e-9)


def test_single_cell_raw_mode():
    p = WeightedPoint(0.5, -0.25, 3.0)
    res = grid_search_min([p], None, GridSpec(0.5, 0.5, -0.25, -0.25, 1.0), method="direct")
    assert res.value == 3.0
    assert res.argmin == (0.5, -0.25)
    assert res.nodes == 1


def test_raw_constraint_excluding_everything(two_points):
    cons = RotatedRectConstraint(c1=100)
    for method in ("direct", "rotated"):
        res = grid_search_min(two_points, cons, GridSpec(-1, 3, -1, 3, 0.1), method=method)
        assert res.infeasible_at_resolution
        assert res.argmin is None


def test_raw_constraint_filters(two_points):
    cons = RotatedRectConstraint(c1=2)
    res = grid_search_min(two_points, cons, GridSpec(-1, 3, -1, 3, 0.05))
    assert evaluate_constraint(cons, res.argmin) <= 0
    # |x1| + |x2| >= x1 + x2 >= 2 on the feasible set, attained at (1, 1)
    assert res.value == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("objective", ["raw", "merged"])
def test_rotated_matches_direct(rng, objective):
    for _ in range(15):
        pts = random_points(rng, int(rng.integers(1, 8)), coord=5, weight=2)
        cons = random_constraint(rng, pts) if objective == "merged" or rng.random() < 0.5 else None
        if objective == "merged" and cons is None:
            continue
        spec = GridSpec(-6, 6, -7, 5.5, 0.25)
        a = grid_search_min(pts, cons, spec, objective, method="direct")
        b = grid_search_min(pts, cons, spec, objective, method="rotated")
        assert a.feasible == b.feasible
        if a.feasible:
            assert a.value == pytest.approx(b.value, abs=1e-9)


def test_partition_and_workers_do_not_matter(rng):
    pts = random_points(rng, 9, coord=10, weight=3)
    spec = GridSpec(-12, 12, -12, 12, 0.1)
    ref = grid_search_min(pts, None, spec)
    for kwargs in ({"block_rows": 1}, {"block_rows": 17}, {"block_rows": 7, "workers": 4}):
        assert grid_search_min(pts, None, spec, **kwargs) == ref
    assert grid_search_min(pts, None, spec, method="direct", block_rows=13, workers=3).argmin == ref.argmin


def test_lexicographic_tie_break():
    pts = [WeightedPoint(0, 0, 0), WeightedPoint(0, 0, 0)]
    cons = RotatedRectConstraint(c1=1)
    res = grid_search_min(pts, cons, GridSpec(-2, 2, -2, 2, 0.5))
    # feasible optima are all grid points with x1 + x2 = 1 and x1, x2 >= 0
    assert res.value == 1.0
    assert res.argmin == (0.0, 1.0)


def test_oracle_lower_bound_sanity(rng):
    for _ in range(10):
        pts = random_points(rng, int(rng.integers(2, 10)), coord=10, weight=2)
        rep = solve_unconstrained(pts)
        step = 0.1
        res = grid_search_min(pts, None, GridSpec.auto(pts, step=step))
        assert rep.lam - 1e-9 <= res.value <= rep.lam + 3 * step


def test_gridspec_validation():
    with pytest.raises(OracleUsageError):
        GridSpec(0, 1, 0, 1, 0)
    with pytest.raises(OracleUsageError):
        GridSpec(1, 0, 0, 1, 0.1)
    assert GridSpec(0, 1, 0, 0.5, 0.1).shape == (11, 6)


def test_auto_window_contains_points_and_includes(rng):
    pts = random_points(rng, 12)
    spec = GridSpec.auto(pts, RotatedRectConstraint(c1=500), step=0.5, include=[(1000, -1000)])
    assert all(spec.contains(p.xy) for p in pts)
    assert spec.contains((1000, -1000))


def test_auto_window_covers_rectangle():
    pts = [WeightedPoint(0, 0, 0), WeightedPoint(1, 1, 0)]
    # 10 <= x1 + x2 <= 12, -1 <= x2 - x1 <= 1
    spec = GridSpec.auto(pts, RotatedRectConstraint(a1=-1, b1=-1, c1=10, d1=-12), step=0.1)
    for corner in [(5.5, 4.5), (4.5, 5.5), (6.5, 5.5), (5.5, 6.5)]:
        assert spec.contains(corner)


def test_merged_needs_constraint(two_points):
    with pytest.raises(OracleUsageError):
        grid_search_min(two_points, None, GridSpec(0, 1, 0, 1, 0.5), "merged")


class TestVerify:
    def test_unconstrained_pair(self, two_points):
        inst = ProblemInstance(two_points)
        verdict = verify_report(inst, solve(inst), GridSpec(-1, 3, -1, 3, 0.01))
        assert verdict.passed, verdict.failures
        assert verdict.objective is Objective.RAW
        assert max(verdict.residuals.values()) <= 1e-9
        assert verdict.grid_gap <= 0.03

    def test_exact_constrained(self, two_points):
        inst = ProblemInstance(two_points, RotatedRectConstraint(c1=0))
        verdict = verify_report(inst, solve(inst), step=0.01)
        assert verdict.passed, verdict.failures
        assert verdict.endpoints_feasible == (True, True)

    def test_approximate_constrained(self, two_points):
        inst = ProblemInstance(two_points, RotatedRectConstraint(c1=4))
        verdict = verify_report(inst, solve(inst), step=0.01)
        assert verdict.passed, verdict.failures
        assert verdict.objective is Objective.MERGED
        assert verdict.endpoints_feasible == (False, False)

    def test_mismatch(self, two_points):
        inst = ProblemInstance(two_points)
        other = ProblemInstance([WeightedPoint(0, 0, 0), WeightedPoint(5, 0, 0)])
        with pytest.raises(OracleUsageError):
            verify_report(other, solve(inst))
        with pytest.raises(OracleUsageError):
            verify_report(ProblemInstance(two_points, RotatedRectConstraint(c1=4)), solve(inst))

    def test_detects_wrong_value(self, two_points):
        from dataclasses import replace

        inst = ProblemInstance(two_points)
        good = solve(inst)
        bad = replace(good, lam=good.lam + 0.5)
        verdict = verify_report(inst, bad, step=0.05)
        assert not verdict.passed

    def test_deterministic(self, rng):
        pts = random_points(rng, 8, coord=20)
        inst = ProblemInstance(pts, random_constraint(rng, pts))
        rep = solve(inst)
        assert verify_report(inst, rep, step=0.1) == verify_report(inst, rep, step=0.1)
