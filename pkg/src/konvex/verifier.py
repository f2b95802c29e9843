"""Threshold bounds and empirical verification of both bound directions.

s(K, r) is the threshold length: any curve in K longer than s admits a line
meeting it at least r + 1 times, and below s a curve with multiplicity at
most r exists.  check_upper_bound realizes the first direction
constructively, the builder realizes the second, and falsify hammers the
inequality with random curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotSimpleError, PreconditionError
from .geometry import (
    COLLINEAR,
    EXTERIOR,
    LEFT,
    RIGHT,
    ConvexPolygon,
    Point,
    Polyline,
    contains,
    diameter,
    orientation,
    perimeter,
    polyline_length,
)
from .stabbing import (
    MultiplicityReport,
    find_stabbing_line,
    max_line_multiplicity,
)

SIDE_UPPER = "upper_checked"
SIDE_LOWER = "lower_realized"
SIDE_FALSIFICATION = "falsification"


def s_bound(body: ConvexPolygon, r: int) -> float:
    """Threshold length: r*p/2 for even r, (r-1)*p/2 + d for odd r."""
    if r < 2:
        raise PreconditionError("the multiplicity budget r must be at least 2")
    p = perimeter(body)
    if r % 2 == 0:
        return r * p / 2.0
    d, _, _ = diameter(body)
    return (r - 1) * p / 2.0 + d


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound check; recomputes s from (p, d, r) on creation."""

    r: int
    perimeter: float
    diameter: float
    s: float
    side: str
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r % 2 == 0:
            expected = self.r * self.perimeter / 2.0
        else:
            expected = (self.r - 1) * self.perimeter / 2.0 + self.diameter
        if not math.isclose(self.s, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise PreconditionError("inconsistent threshold in report")


def _report_base(body: ConvexPolygon, r: int, side: str, evidence: dict) -> BoundReport:
    p = perimeter(body)
    d, _, _ = diameter(body)
    return BoundReport(r, p, d, s_bound(body, r), side, evidence)


def check_upper_bound(poly: Polyline, body: ConvexPolygon, r: int) -> BoundReport:
    """If the polyline is longer than s(K, r), produce a verified line meeting
    it r + 1 times; otherwise report that it is within the bound."""
    for v in poly.vertices:
        if contains(body, v) == EXTERIOR:
            raise PreconditionError("polyline is not contained in the body")
    length = polyline_length(poly)
    threshold = s_bound(body, r)
    if length > threshold:
        line, report = find_stabbing_line(poly, r, body)
        evidence = {"status": "stabbed", "length": length, "line": line, "report": report}
    else:
        evidence = {"status": "within_bound", "length": length}
    return _report_base(body, r, SIDE_UPPER, evidence)


def falsify(body: ConvexPolygon, r: int, trials: int, seed: int = 0) -> BoundReport:
    """Random curves with measured multiplicity <= r must not exceed s(K, r).

    Generates a seeded mix of interior random walks, star loops, smoothed
    loops and a couple of near-extremal builder curves; any curve whose
    measured multiplicity stays within r but whose length exceeds s is
    recorded as a violation (none are expected: a violation would indicate
    an implementation bug, so it is reported data rather than an error).
    """
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    if r < 2:
        raise PreconditionError("the multiplicity budget r must be at least 2")
    threshold = s_bound(body, r)
    max_ratio = 0.0
    qualifying = 0
    violations: list[dict] = []
    by_generator: dict[str, int] = {}

    builder_slots = {trials // 3, (2 * trials) // 3} if trials >= 50 else set()

    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        if t in builder_slots:
            kind = "builder"
            curve = _builder_curve(body, r, seed + t)
            if curve is None:
                kind = "walk"
                curve = _walk_curve(rng, body)
        else:
            pick = t % 4
            if pick in (0, 1):
                kind = "walk"
                curve = _walk_curve(rng, body)
            elif pick == 2:
                kind = "star"
                from .random_shapes import random_star_ring

                curve = random_star_ring(rng, body, n_vertices=int(rng.integers(6, 13)))
            else:
                kind = "smooth_loop"
                from .random_shapes import random_star_ring

                curve = random_star_ring(
                    rng, body, n_vertices=int(rng.integers(6, 13)), spiky=False
                )
        by_generator[kind] = by_generator.get(kind, 0) + 1
        count = max_line_multiplicity(curve).count
        if count > r:
            continue
        qualifying += 1
        ratio = polyline_length(curve) / threshold
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0:
            violations.append(
                {"trial": t, "generator": kind, "ratio": ratio, "count": count}
            )

    evidence = {
        "trials": trials,
        "qualifying": qualifying,
        "max_ratio": max_ratio,
        "violations": violations,
        "generators": by_generator,
        "seed": seed,
    }
    return _report_base(body, r, SIDE_FALSIFICATION, evidence)


def _walk_curve(rng: np.random.Generator, body: ConvexPolygon) -> Polyline:
    from .random_shapes import random_walk_polyline

    n = int(rng.integers(3, 11))
    return random_walk_polyline(rng, body, n_segments=n)


def _builder_curve(body: ConvexPolygon, r: int, seed: int):
    from .builder import ConstructionParams, build_curve
    from .errors import ConstructionError

    try:
        params = ConstructionParams(
            r=r, eps=0.05 * s_bound(body, r), m=96, seed=seed, max_retries=4
        )
        return build_curve(body, params).curve
    except ConstructionError:
        return None


@dataclass(frozen=True)
class Prop1Result:
    convex: bool
    max_mult: int
    consistent: bool
    report: MultiplicityReport


def prop1_check(poly: Polyline) -> Prop1Result:
    """Discrete convexity characterization for a simple closed ring.

    convex: all turns consistently oriented.  consistent: convex holds
    exactly when no line meets the ring in more than 3 components; strictly
    convex rings are met in exactly 2.
    """
    if not poly.closed:
        raise PreconditionError("prop1_check needs a closed polyline")
    _require_simple(poly)
    verts = poly.vertices
    n = len(verts)
    turns = {
        orientation(verts[i], verts[(i + 1) % n], verts[(i + 2) % n]) for i in range(n)
    }
    convex = not (LEFT in turns and RIGHT in turns)
    report = max_line_multiplicity(poly)
    consistent = convex == (report.count <= 3)
    return Prop1Result(convex, report.count, consistent, report)


def _require_simple(poly: Polyline) -> None:
    """Exact self-intersection scan; adjacency may share only its endpoint."""
    verts = poly.vertices
    n = len(verts)
    segs = [(i, (i + 1) % n) for i in range(n)] if poly.closed else [
        (i, i + 1) for i in range(n - 1)
    ]
    boxes = []
    for a, b in segs:
        (ax, ay), (bx, by) = verts[a].xy, verts[b].xy
        boxes.append((min(ax, bx), min(ay, by), max(ax, bx), max(ay, by)))
    m = len(segs)
    for i in range(m):
        for j in range(i + 1, m):
            adjacent = segs[i][1] == segs[j][0] or segs[j][1] == segs[i][0]
            bi, bj = boxes[i], boxes[j]
            if bi[2] < bj[0] or bj[2] < bi[0] or bi[3] < bj[1] or bj[3] < bi[1]:
                continue
            if adjacent:
                if _adjacent_overlap(verts, segs[i], segs[j]):
                    raise NotSimpleError(f"spur at segments {i} and {j}")
            elif _segments_touch(
                verts[segs[i][0]], verts[segs[i][1]], verts[segs[j][0]], verts[segs[j][1]]
            ):
                raise NotSimpleError(f"segments {i} and {j} intersect")


def _adjacent_overlap(verts, si, sj) -> bool:
    shared = si[1] if si[1] == sj[0] else si[0]
    e1 = si[0] if si[1] == shared else si[1]
    e2 = sj[1] if sj[0] == shared else sj[0]
    v, a, b = verts[shared], verts[e1], verts[e2]
    if orientation(v, a, b) != COLLINEAR:
        return False
    dot = (a.x - v.x) * (b.x - v.x) + (a.y - v.y) * (b.y - v.y)
    return dot > 0  # doubling back along the same ray


def _segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    for (p, q, r, o) in ((a, b, c, o1), (a, b, d, o2), (c, d, a, o3), (c, d, b, o4)):
        if o == COLLINEAR and _on_segment(p, q, r):
            return True
    return False


def _on_segment(p: Point, q: Point, r: Point) -> bool:
    """r collinear with pq assumed; is it within the closed segment box."""
    return (
        min(p.x, q.x) <= r.x <= max(p.x, q.x)
        and min(p.y, q.y) <= r.y <= max(p.y, q.y)
    )
