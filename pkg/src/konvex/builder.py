"""Construction of long curves that no line meets more than r times.

The curve winds n = floor(r/2) times just inside the body's boundary as a
chain of nested strictly convex loops.  Each loop is opened by skipping a
small arc fraction near a common angular sector, and the next loop passes
exactly through the previous loop's stopping vertex, so a line can meet
each loop at most twice: the whole chain stays within the budget r = 2n.

For odd r the innermost loop stops just short of one endpoint of a
near-diameter chord, and a slightly bowed arc runs down that chord.  Any
line meeting the bow twice is nearly parallel to the chord and therefore
passes through the innermost loop's opening, trading one loop crossing
for the two arc crossings: 2n + 1 = r total.

None of this is trusted: every result is re-verified by the candidate
enumeration before being returned, and construction parameters are
re-tuned and re-jittered on failure up to max_retries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConstructionError, DegeneracyError, PreconditionError
from .geometry import (
    EXTERIOR,
    INTERIOR,
    RIGHT,
    ConvexPolygon,
    Point,
    Polyline,
    contains,
    convex_hull,
    diameter,
    dist_sq,
    orientation,
    perimeter,
    polyline_length,
)
from .random_shapes import snap_point
from .stabbing import MultiplicityReport, max_line_multiplicity

_MIN_SAMPLES = 8
_INSET_FLOOR = 1e-7


@dataclass(frozen=True)
class ConstructionParams:
    """Tuning knobs for the extremal curve builder.

    n = r // 2 loops are built; eps is the admissible length slack below the
    threshold s(K, r).  inset is the nesting depth per loop (None picks
    eps / (8 n d) and the builder shrinks it if the length budget fails);
    gap is the arc fraction removed from each loop at the common sector.
    """

    r: int
    eps: float
    m: int = 256
    inset: float | None = None
    gap: float = 0.01
    seed: int = 0
    max_retries: int = 16

    def __post_init__(self):
        if self.r < 2:
            raise PreconditionError("multiplicity budget r must be at least 2")
        if not self.eps > 0:
            raise PreconditionError("eps must be positive")
        if self.m < _MIN_SAMPLES:
            raise PreconditionError(f"need at least {_MIN_SAMPLES} samples per loop")
        if not 0 < self.gap <= 0.2:
            raise PreconditionError("gap fraction must be in (0, 0.2]")
        if self.inset is not None and not self.inset > 0:
            raise PreconditionError("inset must be positive")
        if self.max_retries < 1:
            raise PreconditionError("max_retries must be at least 1")

    @property
    def n_loops(self) -> int:
        return self.r // 2


@dataclass(frozen=True)
class ConstructionResult:
    curve: Polyline
    achieved_length: float
    multiplicity: MultiplicityReport
    target: float
    retries_used: int
    params: ConstructionParams


def _offset_polygon(
    base: ConvexPolygon, depth: float
) -> list[tuple[float, float]] | None:
    """Inner parallel polygon: every edge moved inward by depth, corners
    mitered.  None when the offset degenerates (depth too large)."""
    ring = base.float_ring()
    n = len(ring)
    lines = []
    for i in range(n):
        (ax, ay), (bx, by) = ring[i], ring[(i + 1) % n]
        dx, dy = bx - ax, by - ay
        length = math.hypot(dx, dy)
        nx, ny = -dy / length, dx / length  # inward normal of a ccw edge
        lines.append((nx, ny, nx * ax + ny * ay + depth))
    verts = []
    for i in range(n):
        n1x, n1y, c1 = lines[i - 1]
        n2x, n2y, c2 = lines[i]
        det = n1x * n2y - n1y * n2x
        if abs(det) < 1e-14:
            return None
        verts.append(((c1 * n2y - c2 * n1y) / det, (n1x * c2 - n2x * c1) / det))
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        cx, cy = verts[(i + 2) % n]
        if (bx - ax) * (cy - by) - (by - ay) * (cx - bx) <= 0:
            return None
    return verts


def _sample_offset(
    verts: list[tuple[float, float]], m: int, start_vertex: int
) -> list[tuple[tuple[float, float], int, float]]:
    """m equal-arc samples of an offset polygon starting at one of its
    vertices; each sample carries (point, edge index, edge parameter)."""
    n = len(verts)
    order = [(start_vertex + k) % n for k in range(n)]
    lengths = [
        math.dist(verts[order[k]], verts[order[(k + 1) % n]]) for k in range(n)
    ]
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    samples = []
    for pos in np.arange(m) * (total / m):
        k = min(int(np.searchsorted(cum, pos, side="right")) - 1, n - 1)
        t = (pos - cum[k]) / lengths[k]
        (ax, ay) = verts[order[k]]
        (bx, by) = verts[order[(k + 1) % n]]
        samples.append(((ax + t * (bx - ax), ay + t * (by - ay)), order[k], t))
    return samples


def _turn_angles(verts: list[tuple[float, float]]) -> list[float]:
    n = len(verts)
    turns = []
    for i in range(n):
        (ax, ay), (bx, by), (cx, cy) = verts[i - 1], verts[i], verts[(i + 1) % n]
        a1 = math.atan2(by - ay, bx - ax)
        a2 = math.atan2(cy - by, cx - bx)
        turns.append((a2 - a1) % (2.0 * math.pi))
    return turns


def _inset_ring(
    base: ConvexPolygon,
    depth: float,
    m: int,
    rng: np.random.Generator,
    through: Point | None = None,
    anchor_vertex: int = 0,
    nesting_step: float | None = None,
    attempts: int = 8,
) -> ConvexPolygon:
    """Strictly convex ring of m samples hugging the inner offset at `depth`.

    Samples sit on the inward parallel polygon and dip further inward by a
    convex per-edge bump profile (amplitude at most depth/8), so consecutive
    triples turn strictly left by construction; a straight offset edge alone
    would leave collinear samples.  A tiny per-vertex jitter bounded by the
    local convexity margin keeps vertex triples generic.  `through` adds one
    prescribed outer vertex (a junction); the strict hull then drops the few
    samples it shadows.
    """
    if depth <= 0:
        raise PreconditionError("inset depth must be positive")
    offset = _offset_polygon(base, depth)
    if offset is None:
        raise DegeneracyError("inset depth too large for this body")
    samples = _sample_offset(offset, m, anchor_vertex)
    turns = _turn_angles(offset)
    edge_len = [
        math.dist(offset[i], offset[(i + 1) % len(offset)]) for i in range(len(offset))
    ]
    ring_f = base.float_ring()
    n_edges = len(ring_f)
    normals = []
    for i in range(n_edges):
        (ax, ay), (bx, by) = ring_f[i], ring_f[(i + 1) % n_edges]
        length = math.hypot(bx - ax, by - ay)
        normals.append((-(by - ay) / length, (bx - ax) / length))

    amp_cap = depth / 8.0
    if nesting_step is not None:
        amp_cap = min(amp_cap, nesting_step / 4.0)
    for i in range(n_edges):
        theta = min(turns[i], turns[(i + 1) % n_edges])
        amp_cap_edge = theta * edge_len[i] / (16.0)
        # a single global cap keeps the profile analysis uniform
        amp_cap = min(amp_cap, max(amp_cap_edge, depth / 64.0))

    for _ in range(attempts):
        amps = rng.uniform(0.35, 1.0, n_edges) * amp_cap
        pts: list[Point] = []
        for (x, y), edge, t in samples:
            # outward sine bump: vanishes at the edge ends, so the profile
            # height depth - bump is convex along each edge and continuous
            # across corners; the corner turn supplies the rest.
            bump = amps[edge] * math.sin(math.pi * t)
            margin = 0.125 * amps[edge] * math.sin(math.pi * t) * (math.pi / max(m, 1)) ** 2
            bump += rng.uniform(0.0, margin) if margin > 0 else 0.0
            nx, ny = normals[edge]
            pts.append(snap_point(x - bump * nx, y - bump * ny))
        if through is not None:
            pts.append(through)
        try:
            ring = convex_hull(pts)
        except DegeneracyError:
            continue
        if len(ring) < max(8, m // 4):
            continue
        if through is not None and through not in ring.ring:
            continue
        return ring
    raise DegeneracyError("could not build a strictly convex inset ring")


def inset_loop(body: ConvexPolygon, depth: float, m: int, seed: int = 0) -> Polyline:
    """Closed strictly convex loop sampled just inside the body's boundary."""
    rng = np.random.default_rng(seed)
    ring = _inset_ring(body, depth, m, rng)
    return ring.as_polyline()


def _arc_walk(
    ring: ConvexPolygon, start_idx: int, arc_budget: float, direction: int = 1
) -> list[int]:
    """Vertex indices from start_idx along the ring (direction +1 ccw, -1 cw)
    until the arc budget runs out."""
    verts = ring.ring
    n = len(verts)
    out = [start_idx]
    walked = 0.0
    for step in range(1, n):
        a = verts[(start_idx + direction * (step - 1)) % n]
        b_idx = (start_idx + direction * step) % n
        walked += math.dist(a.xy, verts[b_idx].xy)
        if walked > arc_budget:
            break
        out.append(b_idx)
    return out


def _anchor_index(ring: ConvexPolygon, direction: tuple[float, float]) -> int:
    """Ring vertex whose direction from the centroid best matches `direction`."""
    cx, cy = ring.centroid()
    best, best_dot = 0, -math.inf
    norm = math.hypot(*direction)
    ux, uy = direction[0] / norm, direction[1] / norm
    for idx, v in enumerate(ring.ring):
        x, y = v.xy
        r = math.hypot(x - cx, y - cy)
        if r == 0:
            continue
        dot = ((x - cx) * ux + (y - cy) * uy) / r
        if dot > best_dot:
            best, best_dot = idx, dot
    return best


def _bowed_arc(
    a: Point,
    b: Point,
    toward: Point,
    bow: float,
    m: int,
) -> list[Point]:
    """Strictly convex arc from a to b, bulging toward `toward` by a sine
    bump of height bow; includes both endpoints."""
    (ax, ay), (bx, by) = a.xy, b.xy
    chord = math.dist((ax, ay), (bx, by))
    if chord == 0:
        raise PreconditionError("arc endpoints coincide")
    side = orientation(a, b, toward)
    nx, ny = -(by - ay) / chord, (bx - ax) / chord
    if side == RIGHT:
        nx, ny = -nx, -ny
    pts = [a]
    for i in range(1, m):
        t = i / m
        h = bow * math.sin(math.pi * t)
        pts.append(
            snap_point(ax + t * (bx - ax) + h * nx, ay + t * (by - ay) + h * ny)
        )
    pts.append(b)
    return pts


def _no_three_collinear(points: list[Point]) -> bool:
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orientation(points[i], points[j], points[k]) == 0:
                    return False
    return True


def diameter_chord_arc(
    inner: ConvexPolygon, bow: float, m: int, seed: int = 0
) -> Polyline:
    """Open bowed arc spanning the diameter pair of the inner body.

    The bump points toward the centroid; all vertices stay strictly inside
    the body (except the endpoints, which are its diameter vertices) and no
    three vertices are collinear.
    """
    if bow <= 0:
        raise PreconditionError("bow must be positive")
    del seed  # deterministic; kept for interface stability
    _, a, b = diameter(inner)
    cx, cy = inner.centroid()
    pts = _bowed_arc(a, b, snap_point(cx, cy), bow, m)
    for p in pts[1:-1]:
        if contains(inner, p) != INTERIOR:
            raise DegeneracyError("bow too large: arc leaves the body")
    if not _no_three_collinear(pts):
        raise DegeneracyError("arc degenerated to collinear samples")
    return Polyline(tuple(pts))


def _chain_loops(
    body: ConvexPolygon,
    params: ConstructionParams,
    rng: np.random.Generator,
    inset: float,
    gap: float,
    n_loops: int,
    anchor_idx: int,
    anchor_dir: tuple[float, float],
) -> tuple[list[ConvexPolygon], list[list[Point]], list[int]]:
    """Nested rings plus their opened traversals, chained through junctions.

    Ring j sits at depth j * inset inside the body; run j starts at the
    junction vertex shared with run j-1, and the skipped arc of each ring
    sits just before its start, in the sector of the anchor corner (where
    the body's own turning keeps junction hull shadows short).
    """
    rings: list[ConvexPolygon] = []
    opens: list[list[Point]] = []
    starts: list[int] = []
    junction: Point | None = None
    for j in range(1, n_loops + 1):
        ring = _inset_ring(
            body,
            j * inset,
            params.m,
            rng,
            through=junction,
            anchor_vertex=anchor_idx,
            nesting_step=inset,
        )
        verts = ring.ring
        n = len(verts)
        p_ring = perimeter(ring)
        corner_idx = _anchor_index(ring, anchor_dir)
        if junction is None:
            # start at the anchor corner; the run then stops one gap arc
            # short of it, safely off the corner diagonal, so the next
            # ring's junction has one short (corner-side) tangent
            start_idx = corner_idx
            direction = 1
        else:
            start_idx = verts.index(junction)
            # go along the longer adjacent hull edge first: the short one is
            # the corner-side tangent of the junction, which the skipped arc
            # should cover
            e_ccw = math.dist(verts[start_idx].xy, verts[(start_idx + 1) % n].xy)
            e_cw = math.dist(verts[start_idx].xy, verts[(start_idx - 1) % n].xy)
            direction = 1 if e_ccw >= e_cw else -1
        run = _arc_walk(ring, start_idx, (1.0 - gap) * p_ring, direction)
        # a stop on or next to the corner apex would leave the next junction
        # with two long tangents; back off until clearly off the diagonal
        while len(run) > 3:
            offset = (run[-1] - corner_idx) % n
            if min(offset, n - offset) <= 1 and run[-1] != start_idx:
                run.pop()
            else:
                break
        if len(run) < 3:
            raise DegeneracyError("opened loop too short")
        rings.append(ring)
        opens.append([verts[k] for k in run])
        starts.append(start_idx)
        junction = opens[-1][-1]
    return rings, opens, starts


def _assemble(opens: list[list[Point]]) -> list[Point]:
    verts = list(opens[0])
    for run in opens[1:]:
        assert run[0] == verts[-1]
        verts.extend(run[1:])
    return verts


def _verified_result(
    body: ConvexPolygon,
    params: ConstructionParams,
    verts: list[Point],
    target: float,
    retries_used: int,
) -> tuple[ConstructionResult | None, MultiplicityReport | None]:
    curve = Polyline(tuple(verts))
    length = polyline_length(curve)
    if length < target - params.eps:
        return None, None
    if any(contains(body, v) == EXTERIOR for v in curve.vertices):
        return None, None
    report = max_line_multiplicity(curve)
    if report.count > params.r:
        return None, report
    return ConstructionResult(curve, length, report, target, retries_used, params), None


def _gap_anchor(body: ConvexPolygon) -> tuple[int, tuple[float, float]]:
    """Common sector: the first diameter endpoint, as (ring index, direction
    from the centroid)."""
    _, da, _ = diameter(body)
    idx = body.ring.index(da)
    cx, cy = body.centroid()
    x, y = da.xy
    direction = (x - cx, y - cy)
    if direction == (0.0, 0.0):
        direction = (1.0, 0.0)
    return idx, direction


def _default_inset(body: ConvexPolygon, params: ConstructionParams) -> float:
    d, _, _ = diameter(body)
    return params.eps / (8.0 * max(1, params.n_loops) * d)


def build_even_curve(body: ConvexPolygon, params: ConstructionParams) -> ConstructionResult:
    """Open curve of length at least s(K, r) - eps with multiplicity <= r, r even.

    r/2 nested strictly convex loops, each opened near the common sector and
    entered exactly at the previous loop's stopping vertex.
    """
    if params.r % 2 != 0:
        raise PreconditionError("build_even_curve needs an even r")
    target = _s_bound(body, params.r)
    anchor_idx, anchor_dir = _gap_anchor(body)
    n = params.n_loops
    failing_report: MultiplicityReport | None = None
    for retry in range(params.max_retries):
        rng = np.random.default_rng([params.seed, retry])
        default_inset = params.inset if params.inset is not None else _default_inset(body, params)
        inset, gap, m_params = default_inset, params.gap, params
        inset_min = max(default_inset / 32.0, _INSET_FLOOR)
        for _shrink in range(12):
            try:
                _, opens, _ = _chain_loops(
                    body, m_params, rng, inset, gap, n, anchor_idx, anchor_dir
                )
            except DegeneracyError:
                inset /= 2.0
                if inset < _INSET_FLOOR:
                    break
                continue
            verts = _assemble(opens)
            length = polyline_length(Polyline(tuple(verts)))
            if length >= target - 0.9 * params.eps:
                result, failure = _verified_result(body, params, verts, target, retry)
                if result is not None:
                    return result
                failing_report = failure or failing_report
                break  # verification failed; re-jitter
            # too short: tighten the inset first, then the gap, then densify
            if inset > inset_min:
                inset /= 2.0
            elif gap > 0.0025:
                gap /= 2.0
            else:
                m_params = replace(m_params, m=min(2 * m_params.m, 4096))
                inset, gap = default_inset / 8.0, params.gap / 2.0
    raise ConstructionError(
        f"even construction failed after {params.max_retries} retries", failing_report
    )


def build_odd_curve(body: ConvexPolygon, params: ConstructionParams) -> ConstructionResult:
    """Open curve of length at least s(K, r) - eps with multiplicity <= r, r odd.

    floor(r/2) nested loops as in the even case; the innermost stops just
    short of the sector, and a bowed arc runs to the ring vertex farthest
    from the stop, realizing the near-diameter term of the threshold.
    """
    if params.r % 2 != 1:
        raise PreconditionError("build_odd_curve needs an odd r")
    if params.r < 3:
        raise PreconditionError("odd construction needs r >= 3")
    target = _s_bound(body, params.r)
    anchor_idx, anchor_dir = _gap_anchor(body)
    n = params.n_loops
    failing_report: MultiplicityReport | None = None
    for retry in range(params.max_retries):
        rng = np.random.default_rng([params.seed, 10_000 + retry])
        default_inset = params.inset if params.inset is not None else _default_inset(body, params)
        inset, gap, m_params = default_inset, params.gap, params
        inset_min = max(default_inset / 32.0, _INSET_FLOOR)
        for _shrink in range(12):
            try:
                rings, opens, starts = _chain_loops(
                    body, m_params, rng, inset, gap, n, anchor_idx, anchor_dir
                )
                inner = rings[-1]
                stop = opens[-1][-1]
                far = _farthest_vertex(inner, stop)
                start_vertex = inner.ring[starts[-1]]
                gap_chord = math.dist(stop.xy, start_vertex.xy)
                bow = max(gap_chord / 12.0, 1e-6)
                arc = _bowed_arc(stop, far, start_vertex, bow, max(16, m_params.m // 8))
                _check_arc(inner, arc, start_vertex)
            except (DegeneracyError, PreconditionError):
                inset /= 2.0
                if inset < _INSET_FLOOR:
                    break
                continue
            verts = _assemble(opens) + arc[1:]
            length = polyline_length(Polyline(tuple(verts)))
            if length >= target - 0.9 * params.eps:
                result, failure = _verified_result(body, params, verts, target, retry)
                if result is not None:
                    return result
                failing_report = failure or failing_report
                break
            if inset > inset_min:
                inset /= 2.0
            elif gap > 0.0025:
                gap /= 2.0
            else:
                m_params = replace(m_params, m=min(2 * m_params.m, 4096))
                inset, gap = default_inset / 8.0, params.gap / 2.0
    raise ConstructionError(
        f"odd construction failed after {params.max_retries} retries", failing_report
    )


def _farthest_vertex(ring: ConvexPolygon, origin: Point) -> Point:
    best = ring.ring[0]
    best_d = dist_sq(origin, best)
    for v in ring.ring[1:]:
        d = dist_sq(origin, v)
        if d > best_d:
            best, best_d = v, d
    return best


def _check_arc(inner: ConvexPolygon, arc: list[Point], triangle_apex: Point) -> None:
    """Interior arc vertices must sit strictly inside the inner ring and
    strictly inside the triangle (apex, far end, stop); no 3 collinear."""
    a, b = arc[0], arc[-1]
    for p in arc[1:-1]:
        if contains(inner, p) != INTERIOR:
            raise DegeneracyError("arc leaves the inner ring")
        if not (
            orientation(a, b, p) == orientation(a, b, triangle_apex)
            and orientation(b, triangle_apex, p) == orientation(b, triangle_apex, a)
            and orientation(triangle_apex, a, p) == orientation(triangle_apex, a, b)
        ):
            raise DegeneracyError("arc leaves its guard triangle")
    if not _no_three_collinear(arc):
        raise DegeneracyError("arc has collinear vertices")


def build_curve(body: ConvexPolygon, params: ConstructionParams) -> ConstructionResult:
    """Dispatch on the parity of r."""
    if params.r % 2 == 0:
        return build_even_curve(body, params)
    return build_odd_curve(body, params)


def _s_bound(body: ConvexPolygon, r: int) -> float:
    from .verifier import s_bound  # deferred: verifier builds on this module

    return s_bound(body, r)
