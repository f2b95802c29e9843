"""Exact planar primitives and convex-polygon metrics.

Coordinates are stored as exact rationals (`fractions.Fraction`), so the
sign predicates (orientation, point-in-polygon, point-on-line) are exact:
no epsilons, no tie-breaking heuristics.  Metric quantities (lengths,
widths, angles) are computed in double precision from float views of the
same coordinates.

Decimal strings ingest exactly ("0.1" becomes 1/10); Python floats ingest
as their exact binary value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DegeneracyError, PreconditionError

Coordinate = Fraction | int | float | str

# Orientation signs.
LEFT = 1
COLLINEAR = 0
RIGHT = -1

# Containment classes.
INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


def to_fraction(value: Coordinate) -> Fraction:
    """Convert a coordinate to an exact rational.

    Strings are read as exact decimals ("0.1" -> 1/10, "1e-9" -> 1/10^9)
    or ratios ("3/7"); floats convert to their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise PreconditionError(f"non-finite coordinate: {value!r}")
        return Fraction(value)
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a coordinate")


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_fraction(self.x))
        object.__setattr__(self, "y", to_fraction(self.y))

    @property
    def xy(self) -> tuple[float, float]:
        """Double-precision view for metric work."""
        return (float(self.x), float(self.y))

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.x, self.y))

    def __repr__(self) -> str:
        return f"Point({str(self.x)!r}, {str(self.y)!r})"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    def length(self) -> float:
        return math.dist(self.a.xy, self.b.xy)

    def angle(self) -> float:
        """Angle with the x axis, in [0, pi). Undefined (0.0) if degenerate."""
        if self.degenerate:
            return 0.0
        ax, ay = self.a.xy
        bx, by = self.b.xy
        alpha = math.atan2(by - ay, bx - ax)
        if alpha < 0.0:
            alpha += math.pi
        if alpha >= math.pi:
            alpha -= math.pi
        return alpha


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Exact cross product (a - o) x (b - o); twice the signed triangle area."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orientation(p: Point, q: Point, r: Point) -> int:
    """Exact turn direction of the triple: LEFT, RIGHT or COLLINEAR."""
    c = cross(p, q, r)
    if c > 0:
        return LEFT
    if c < 0:
        return RIGHT
    return COLLINEAR


def dist_sq(a: Point, b: Point) -> Fraction:
    """Exact squared distance."""
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


@dataclass(frozen=True)
class Polyline:
    """A broken line: ordered vertices, open or closed.

    For closed polylines the closing segment is implicit; the first vertex
    is not repeated in storage.  Consecutive vertices must be distinct.
    """

    vertices: tuple[Point, ...]
    closed: bool = False

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise PreconditionError("a polyline needs at least 2 vertices")
        for u, v in zip(verts, verts[1:]):
            if u == v:
                raise PreconditionError("consecutive polyline vertices must be distinct")
        if self.closed and verts[0] == verts[-1]:
            raise PreconditionError(
                "closed polyline must not repeat its first vertex in storage"
            )

    def __len__(self) -> int:
        return len(self.vertices)

    def segments(self) -> Iterator[Segment]:
        verts = self.vertices
        for u, v in zip(verts, verts[1:]):
            yield Segment(u, v)
        if self.closed:
            yield Segment(verts[-1], verts[0])

    def segment_count(self) -> int:
        return len(self.vertices) - (0 if self.closed else 1)

    def float_vertices(self) -> list[tuple[float, float]]:
        return [v.xy for v in self.vertices]


def polyline_length(poly: Polyline) -> float:
    """Total Euclidean length; closed polylines include the closing segment."""
    return sum(seg.length() for seg in poly.segments())


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon: counterclockwise ring, no 3 collinear vertices.

    The constructor validates with exact predicates and rejects rather than
    repairs; use convex_hull() to build one from unordered points.
    """

    ring: tuple[Point, ...]

    def __post_init__(self):
        ring = tuple(self.ring)
        object.__setattr__(self, "ring", ring)
        n = len(ring)
        if n < 3:
            raise DegeneracyError("a convex polygon needs at least 3 vertices")
        if len({(p.x, p.y) for p in ring}) != n:
            raise PreconditionError("convex polygon ring has repeated vertices")
        for i in range(n):
            if orientation(ring[i], ring[(i + 1) % n], ring[(i + 2) % n]) != LEFT:
                raise PreconditionError(
                    "ring is not strictly convex counterclockwise "
                    f"(violation at vertex {(i + 1) % n})"
                )

    def __len__(self) -> int:
        return len(self.ring)

    def as_polyline(self) -> Polyline:
        return Polyline(self.ring, closed=True)

    def centroid(self) -> tuple[float, float]:
        """Area centroid, in doubles (used for inward directions, not predicates)."""
        ax = ay = area = 0.0
        x0, y0 = self.ring[0].xy
        for i in range(1, len(self.ring) - 1):
            x1, y1 = self.ring[i].xy
            x2, y2 = self.ring[i + 1].xy
            t = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
            area += t
            ax += t * (x0 + x1 + x2)
            ay += t * (y0 + y1 + y2)
        return (ax / (3.0 * area), ay / (3.0 * area))

    def float_ring(self) -> list[tuple[float, float]]:
        return [v.xy for v in self.ring]


def perimeter(polygon: ConvexPolygon) -> float:
    """Closed ring length; identical to polyline_length of the closed ring."""
    return polyline_length(polygon.as_polyline())


def _antipodal_pairs(ring: Sequence[Point]) -> Iterator[tuple[int, int]]:
    """Vertex index pairs visited by rotating calipers (superset of the diameter pair)."""
    n = len(ring)
    j = 1
    for i in range(n):
        i2 = (i + 1) % n
        while True:
            j2 = (j + 1) % n
            if abs(cross(ring[i], ring[i2], ring[j2])) > abs(
                cross(ring[i], ring[i2], ring[j])
            ):
                j = j2
            else:
                break
        yield (i, j)
        yield (i2, j)
        # parallel-edge tie: both far vertices are antipodal to edge (i, i2)
        j2 = (j + 1) % n
        if abs(cross(ring[i], ring[i2], ring[j2])) == abs(
            cross(ring[i], ring[i2], ring[j])
        ):
            yield (i, j2)
            yield (i2, j2)


def diameter(polygon: ConvexPolygon) -> tuple[float, Point, Point]:
    """Maximum vertex-pair distance and one realizing pair (rotating calipers).

    Pair selection compares exact squared distances, so the result matches a
    brute-force scan bit for bit; ties resolve to the lexicographically
    smallest index pair.
    """
    ring = polygon.ring
    n = len(ring)
    best: tuple[Fraction, tuple[int, int]] | None = None
    for i, j in _antipodal_pairs(ring):
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        d2 = dist_sq(ring[i], ring[j])
        if best is None or d2 > best[0] or (d2 == best[0] and key < best[1]):
            best = (d2, key)
    assert best is not None and n >= 3
    i, j = best[1]
    return (math.sqrt(float(best[0])), ring[i], ring[j])


def diameter_bruteforce(polygon: ConvexPolygon) -> tuple[float, Point, Point]:
    """O(n^2) exact pair scan; the independent oracle for diameter()."""
    ring = polygon.ring
    best_d2 = Fraction(-1)
    best = (0, 1)
    for i in range(len(ring)):
        for j in range(i + 1, len(ring)):
            d2 = dist_sq(ring[i], ring[j])
            if d2 > best_d2:
                best_d2 = d2
                best = (i, j)
    return (math.sqrt(float(best_d2)), ring[best[0]], ring[best[1]])


def width(polygon: ConvexPolygon, alpha: float) -> float:
    """Length of the projection of the polygon onto the direction-alpha line.

    Evaluated from vertex projection extremes; pi-periodic in alpha.
    """
    c, s = math.cos(alpha), math.sin(alpha)
    dots = [c * x + s * y for x, y in polygon.float_ring()]
    return max(dots) - min(dots)


def contains(polygon: ConvexPolygon, p: Point) -> str:
    """Classify a point against the polygon with exact edge orientations."""
    ring = polygon.ring
    n = len(ring)
    on_edge = False
    for i in range(n):
        side = orientation(ring[i], ring[(i + 1) % n], p)
        if side == RIGHT:
            return EXTERIOR
        if side == COLLINEAR:
            on_edge = True
    return BOUNDARY if on_edge else INTERIOR


def convex_hull(points: Sequence[Point]) -> ConvexPolygon:
    """Counterclockwise convex hull with collinear boundary points dropped.

    Raises DegeneracyError when the input spans no area (fewer than 3
    distinct points, or all collinear).
    """
    unique = sorted(set((p.x, p.y) for p in points))
    pts = [Point(x, y) for x, y in unique]
    if len(pts) < 3:
        raise DegeneracyError("convex hull needs at least 3 distinct points")

    def half(chain_pts: list[Point]) -> list[Point]:
        chain: list[Point] = []
        for p in chain_pts:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) != LEFT:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise DegeneracyError("points are collinear; hull is degenerate")
    return ConvexPolygon(tuple(ring))


def rigid_motion(
    p: Point, cos_t: Coordinate, sin_t: Coordinate, shift: tuple[Coordinate, Coordinate]
) -> Point:
    """Rotate by an exact rational rotation (cos_t^2 + sin_t^2 must be 1) then translate.

    Rational rotations (e.g. cos 3/5, sin 4/5) preserve all exact predicates
    and all distances; used by tests for motion-invariance checks.
    """
    c = to_fraction(cos_t)
    s = to_fraction(sin_t)
    if c * c + s * s != 1:
        raise PreconditionError("not an exact rotation: cos^2 + sin^2 != 1")
    dx = to_fraction(shift[0])
    dy = to_fraction(shift[1])
    return Point(c * p.x - s * p.y + dx, s * p.x + c * p.y + dy)


@dataclass(frozen=True)
class Line:
    """Oriented straight line nx*x + ny*y = c with exact rational coefficients.

    The normal (nx, ny) is generally not unit length (unit normals of
    rational lines are irrational); norm_sq() gives its exact squared norm
    and unit() a normalized double-precision view.  side_of() is exact.
    """

    nx: Fraction
    ny: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "nx", to_fraction(self.nx))
        object.__setattr__(self, "ny", to_fraction(self.ny))
        object.__setattr__(self, "c", to_fraction(self.c))
        if self.nx == 0 and self.ny == 0:
            raise PreconditionError("line normal must be nonzero")

    @classmethod
    def from_points(cls, p: Point, q: Point) -> "Line":
        """The line through two distinct points; its LEFT side is the left of p->q."""
        if p == q:
            raise PreconditionError("two distinct points are required")
        nx = -(q.y - p.y)
        ny = q.x - p.x
        return cls(nx, ny, nx * p.x + ny * p.y)

    @classmethod
    def from_direction_offset(cls, alpha: float, offset: float) -> "Line":
        """Points x with <(cos a, sin a), x> = offset: the line perpendicular
        to direction alpha at signed distance offset along it."""
        return cls(Fraction(math.cos(alpha)), Fraction(math.sin(alpha)), Fraction(offset))

    def norm_sq(self) -> Fraction:
        return self.nx * self.nx + self.ny * self.ny

    def unit(self) -> tuple[float, float, float]:
        """(nx, ny, c) scaled to a unit normal, in doubles."""
        scale = math.sqrt(float(self.norm_sq()))
        return (float(self.nx) / scale, float(self.ny) / scale, float(self.c) / scale)

    def side_of(self, p: Point) -> int:
        """Exact sign of nx*x + ny*y - c at p: LEFT, RIGHT or COLLINEAR (on line)."""
        v = self.nx * p.x + self.ny * p.y - self.c
        if v > 0:
            return LEFT
        if v < 0:
            return RIGHT
        return COLLINEAR

    def value_at(self, p: Point) -> Fraction:
        return self.nx * p.x + self.ny * p.y - self.c

    def along(self, p: Point) -> Fraction:
        """Exact coordinate of p along the line direction (ny, -nx).

        Restricted to points on the line this is an injective affine chart
        (increasing from p to q for from_points lines), which is all interval
        bookkeeping needs; it is not arc length.
        """
        return self.ny * p.x - self.nx * p.y

    def translated(self, delta: float) -> "Line":
        """Parallel line moved by delta along the unit normal."""
        return Line(self.nx, self.ny, self.c + Fraction(delta) * Fraction(math.sqrt(float(self.norm_sq()))))
