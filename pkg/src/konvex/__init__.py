"""konvex: exact planar convex geometry, line-stabbing multiplicity of
polylines, Cauchy/Crofton projection identities, and extremal curve
construction inside convex bodies."""

from .builder import (
    ConstructionParams,
    ConstructionResult,
    build_curve,
    build_even_curve,
    build_odd_curve,
    diameter_chord_arc,
    inset_loop,
)
from .errors import (
    ConstructionError,
    DegeneracyError,
    KonvexError,
    NotSimpleError,
    ParseError,
    PreconditionError,
    VerificationError,
)
from .geometry import (
    BOUNDARY,
    COLLINEAR,
    EXTERIOR,
    INTERIOR,
    LEFT,
    RIGHT,
    ConvexPolygon,
    Line,
    Point,
    Polyline,
    Segment,
    contains,
    convex_hull,
    diameter,
    orientation,
    perimeter,
    polyline_length,
    width,
)
from .projections import (
    ChordTerm,
    ProjectionProfile,
    cauchy_width_integral,
    chord_term,
    crofton_length,
    projection_length,
)
from .stabbing import (
    Component,
    MultiplicityReport,
    find_stabbing_line,
    line_multiplicity,
    max_line_multiplicity,
    projection_witness,
    proper_crossings,
    random_line_oracle,
)
from .verifier import (
    BoundReport,
    Prop1Result,
    check_upper_bound,
    falsify,
    prop1_check,
    s_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY",
    "BoundReport",
    "COLLINEAR",
    "ChordTerm",
    "Component",
    "ConstructionError",
    "ConstructionParams",
    "ConstructionResult",
    "ConvexPolygon",
    "DegeneracyError",
    "EXTERIOR",
    "INTERIOR",
    "KonvexError",
    "LEFT",
    "Line",
    "MultiplicityReport",
    "NotSimpleError",
    "ParseError",
    "Point",
    "Polyline",
    "PreconditionError",
    "ProjectionProfile",
    "Prop1Result",
    "RIGHT",
    "Segment",
    "VerificationError",
    "build_curve",
    "build_even_curve",
    "build_odd_curve",
    "cauchy_width_integral",
    "check_upper_bound",
    "chord_term",
    "contains",
    "convex_hull",
    "crofton_length",
    "diameter",
    "diameter_chord_arc",
    "falsify",
    "find_stabbing_line",
    "inset_loop",
    "line_multiplicity",
    "max_line_multiplicity",
    "orientation",
    "perimeter",
    "polyline_length",
    "projection_length",
    "projection_witness",
    "prop1_check",
    "proper_crossings",
    "random_line_oracle",
    "s_bound",
    "width",
]
