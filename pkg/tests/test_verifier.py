import math

import pytest

from konvex.builder import ConstructionParams, build_curve
from konvex.errors import NotSimpleError, PreconditionError
from konvex.geometry import ConvexPolygon, Point, Polyline, diameter, perimeter
from konvex.random_shapes import random_convex_polygon, random_star_ring
from konvex.verifier import (
    BoundReport,
    check_upper_bound,
    falsify,
    prop1_check,
    s_bound,
)

SQUARE = ConvexPolygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))


class TestSBound:
    def test_square_r2(self):
        assert s_bound(SQUARE, 2) == pytest.approx(4.0, abs=1e-12)

    def test_square_r3(self):
        assert s_bound(SQUARE, 3) == pytest.approx(4 + math.sqrt(2), rel=1e-12)

    def test_square_r5(self):
        assert s_bound(SQUARE, 5) == pytest.approx(8 + math.sqrt(2), rel=1e-12)

    def test_rejects_r_below_2(self):
        for r in (1, 0, -3):
            with pytest.raises(PreconditionError):
                s_bound(SQUARE, r)

    @pytest.mark.parametrize("seed", range(20))
    def test_step_by_two_adds_perimeter(self, seed):
        body = random_convex_polygon(seed, n_vertices=5 + seed)
        p = perimeter(body)
        for r in (2, 3, 4, 5):
            assert s_bound(body, r + 2) == pytest.approx(s_bound(body, r) + p, rel=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_odd_below_next_even_since_d_le_half_p(self, seed):
        body = random_convex_polygon(seed + 500, n_vertices=4 + seed % 30)
        d, _, _ = diameter(body)
        assert d <= perimeter(body) / 2 + 1e-12
        assert s_bound(body, 3) <= s_bound(body, 4) + 1e-12


class TestBoundReport:
    def test_recomputes_threshold(self):
        with pytest.raises(PreconditionError):
            BoundReport(2, 4.0, math.sqrt(2), 999.0, "upper_checked", {})


class TestCheckUpperBound:
    def test_lengthy_instance_is_stabbed(self):
        poly = Polyline(
            (
                Point(0, 0),
                Point(1, 0),
                Point(1, 1),
                Point(0, 1),
                Point(0, 0),
                Point("0.1", "0.05"),
            )
        )
        report = check_upper_bound(poly, SQUARE, 2)
        assert report.evidence["status"] == "stabbed"
        assert report.evidence["report"].count >= 3

    def test_exact_bound_is_within(self):
        report = check_upper_bound(SQUARE.as_polyline(), SQUARE, 2)
        assert report.evidence["status"] == "within_bound"

    def test_builder_output_round_trips_within_bound(self):
        for r in (2, 3):
            result = build_curve(
                SQUARE, ConstructionParams(r=r, eps=0.05 * s_bound(SQUARE, r), m=96, seed=5)
            )
            report = check_upper_bound(result.curve, SQUARE, r)
            assert report.evidence["status"] == "within_bound"

    def test_rejects_escaping_polyline(self):
        with pytest.raises(PreconditionError):
            check_upper_bound(Polyline((Point(0, 0), Point(9, 9))), SQUARE, 2)


class TestFalsify:
    def test_small_run_has_no_violations(self):
        report = falsify(SQUARE, 2, trials=120, seed=4)
        ev = report.evidence
        assert ev["violations"] == []
        assert 0 < ev["max_ratio"] <= 1.0
        assert ev["qualifying"] >= 1
        assert set(ev["generators"]) >= {"walk", "star", "smooth_loop"}

    def test_deterministic_for_fixed_seed(self):
        a = falsify(SQUARE, 2, trials=40, seed=9)
        b = falsify(SQUARE, 2, trials=40, seed=9)
        assert a.evidence["max_ratio"] == b.evidence["max_ratio"]

    def test_rejects_zero_trials(self):
        with pytest.raises(PreconditionError):
            falsify(SQUARE, 2, trials=0, seed=1)


class TestProp1:
    def test_square_ring(self):
        res = prop1_check(SQUARE.as_polyline())
        assert res.convex and res.max_mult == 2 and res.consistent

    def test_triangle(self):
        tri = ConvexPolygon((Point(0, 0), Point(1, 0), Point(0, 1)))
        res = prop1_check(tri.as_polyline())
        assert res.convex and res.max_mult == 2 and res.consistent

    def test_l_shaped_hexagon(self):
        ring = Polyline(
            (Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 1), Point(1, 2), Point(0, 2)),
            closed=True,
        )
        res = prop1_check(ring)
        assert not res.convex
        assert res.max_mult >= 4
        assert res.consistent

    def test_spiky_star_rings(self):
        for seed in range(10):
            ring = random_star_ring(seed, SQUARE, n_vertices=9)
            res = prop1_check(ring)
            assert not res.convex
            assert res.max_mult >= 4
            assert res.consistent

    def test_rejects_open_polyline(self):
        with pytest.raises(PreconditionError):
            prop1_check(Polyline((Point(0, 0), Point(1, 0))))

    def test_rejects_self_intersecting_ring(self):
        bowtie = Polyline(
            (Point(0, 0), Point(1, 1), Point(1, 0), Point(0, 1)), closed=True
        )
        with pytest.raises(NotSimpleError):
            prop1_check(bowtie)

    def test_rejects_spur(self):
        spur = Polyline(
            (Point(0, 0), Point(2, 0), Point(1, 0), Point(1, 1)), closed=True
        )
        with pytest.raises(NotSimpleError):
            prop1_check(spur)
