"""Text and JSON serialization for geometry and reports.

Geometry files are line based: one `x y` pair per line, `#` starts a
comment, and polylines carry an `open`/`closed` header (polygon files have
no header).  Coordinates are written as exact decimal strings whenever the
value has a finite decimal expansion, falling back to `p/q`; both forms
parse back to the identical rational, so serialize/parse round-trips are
bit-exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable

from .errors import ParseError, PreconditionError
from .geometry import ConvexPolygon, Line, Point, Polyline
from .projections import ProjectionProfile
from .stabbing import Component, MultiplicityReport


def fraction_to_str(value: Fraction) -> str:
    """Exact decimal string when the denominator is 2^a 5^b, else 'p/q'."""
    den = value.denominator
    twos = fives = 0
    rest = den
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{value.numerator}/{den}"
    digits = max(twos, fives)
    scaled = value.numerator * 10**digits // den
    if digits == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    out = f"{sign}{body[:-digits]}.{body[-digits:]}".rstrip("0").rstrip(".")
    return out if out not in ("", "-") else "0"


def _parse_coordinate(token: str, line_no: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coordinate {token!r}", line_no) from exc


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            yield line_no, stripped


def _parse_points(rows: list[tuple[int, str]]) -> list[Point]:
    points = []
    for line_no, row in rows:
        tokens = row.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'x y', got {row!r}", line_no)
        points.append(
            Point(_parse_coordinate(tokens[0], line_no), _parse_coordinate(tokens[1], line_no))
        )
    return points


def parse_polyline(text: str) -> Polyline:
    rows = list(_content_lines(text))
    if not rows:
        raise ParseError("empty polyline file")
    head_no, head = rows[0]
    if head not in ("open", "closed"):
        raise ParseError(f"expected header 'open' or 'closed', got {head!r}", head_no)
    points = _parse_points(rows[1:])
    try:
        return Polyline(tuple(points), closed=(head == "closed"))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc


def serialize_polyline(poly: Polyline) -> str:
    lines = ["closed" if poly.closed else "open"]
    lines += [f"{fraction_to_str(v.x)} {fraction_to_str(v.y)}" for v in poly.vertices]
    return "\n".join(lines) + "\n"


def parse_polygon(text: str) -> ConvexPolygon:
    rows = list(_content_lines(text))
    if rows and rows[0][1] == "closed":  # tolerated header
        rows = rows[1:]
    if rows and rows[0][1] == "open":
        raise ParseError("a polygon file cannot be 'open'", rows[0][0])
    points = _parse_points(rows)
    try:
        return ConvexPolygon(tuple(points))
    except PreconditionError as exc:
        raise ParseError(f"not a strictly convex counterclockwise ring: {exc}") from exc


def serialize_polygon(polygon: ConvexPolygon) -> str:
    lines = [f"{fraction_to_str(v.x)} {fraction_to_str(v.y)}" for v in polygon.ring]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def line_to_dict(line: Line) -> dict:
    return {
        "nx": fraction_to_str(line.nx),
        "ny": fraction_to_str(line.ny),
        "c": fraction_to_str(line.c),
    }


def line_from_dict(doc: dict) -> Line:
    return Line(Fraction(doc["nx"]), Fraction(doc["ny"]), Fraction(doc["c"]))


def multiplicity_report_to_dict(report: MultiplicityReport) -> dict:
    return {
        "count": report.count,
        "method": report.method,
        "witness": line_to_dict(report.witness),
        "components": [
            {
                "segments": list(c.segments),
                "kind": c.kind,
                "start": list(c.start),
                "end": list(c.end),
            }
            for c in report.components
        ],
    }


def multiplicity_report_from_dict(doc: dict) -> MultiplicityReport:
    components = tuple(
        Component(tuple(c["segments"]), tuple(c["start"]), tuple(c["end"]))
        for c in doc["components"]
    )
    return MultiplicityReport(
        doc["count"], line_from_dict(doc["witness"]), doc["method"], components
    )


def _jsonable(value):
    from .builder import ConstructionParams, ConstructionResult
    from .verifier import BoundReport, Prop1Result

    if isinstance(value, Line):
        return line_to_dict(value)
    if isinstance(value, MultiplicityReport):
        return multiplicity_report_to_dict(value)
    if isinstance(value, BoundReport):
        return {
            "r": value.r,
            "perimeter": value.perimeter,
            "diameter": value.diameter,
            "s": value.s,
            "side": value.side,
            "evidence": _jsonable(value.evidence),
        }
    if isinstance(value, Prop1Result):
        return {
            "convex": value.convex,
            "max_mult": value.max_mult,
            "consistent": value.consistent,
            "report": multiplicity_report_to_dict(value.report),
        }
    if isinstance(value, ConstructionResult):
        return {
            "achieved_length": value.achieved_length,
            "target": value.target,
            "eps": value.params.eps,
            "retries_used": value.retries_used,
            "multiplicity": multiplicity_report_to_dict(value.multiplicity),
            "params": _jsonable(value.params),
            "vertices": len(value.curve),
        }
    if isinstance(value, ConstructionParams):
        return {
            "r": value.r,
            "eps": value.eps,
            "m": value.m,
            "inset": value.inset,
            "gap": value.gap,
            "seed": value.seed,
            "max_retries": value.max_retries,
        }
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def to_json(value, indent: int | None = 2) -> str:
    return json.dumps(_jsonable(value), indent=indent, sort_keys=True)


def profile_to_csv(profile: ProjectionProfile) -> str:
    rows = ["alpha,value"]
    rows += [f"{alpha!r},{value!r}" for alpha, value in profile.evaluations]
    return "\n".join(rows) + "\n"
