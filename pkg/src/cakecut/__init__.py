"""cakecut: exact halfspace-depth engine for the cake-division pointing game."""

from .cake import (
    Cake,
    measure,
    quantile,
    quantile_many,
    sample_points,
    tail,
    tail_many,
    validate_cake,
)
from .depth import (
    Cut,
    DepthCertificate,
    DepthMethod,
    HellyReport,
    MaximinResult,
    best_cut,
    depth_at,
    depth_grid,
    helly_certificate,
    level_set,
    maximin_point,
)
from .errors import (
    CakecutError,
    DegeneratePolygon,
    DegenerateSimplex,
    DimensionOutOfRange,
    EmptyCake,
    MixedDimensions,
    NoConvergence,
    OverlappingPieces,
    ParseError,
    SelfIntersecting,
    StrategyDimensionMismatch,
    UnsupportedDimension,
    WrongDirectionCount,
    WrongOrientation,
    ZeroDirection,
)
from .extremal import (
    StarBody,
    regular_simplex,
    star_body,
    verify_star_depth,
    verify_star_structure,
)
from .game import (
    Centerpoint,
    Centroid,
    ExactMin,
    FixedPoint,
    GameRound,
    ManualCut,
    SampledMin,
    play_round,
    run_experiment,
)
from .geometry import (
    ConvexRegion,
    Simplex,
    box_region,
    clip_convex,
    normalize,
    simplex_tail_fraction,
    simplex_volume,
    triangulate_polygon,
)
from .render import render_svg
from .serialize import cake_id, decode_cake, encode_cake, parse_document

__version__ = "0.1.0"

__all__ = [
    "Cake",
    "CakecutError",
    "Centerpoint",
    "Centroid",
    "ConvexRegion",
    "Cut",
    "DegeneratePolygon",
    "DegenerateSimplex",
    "DepthCertificate",
    "DepthMethod",
    "DimensionOutOfRange",
    "EmptyCake",
    "ExactMin",
    "FixedPoint",
    "GameRound",
    "HellyReport",
    "ManualCut",
    "MaximinResult",
    "MixedDimensions",
    "NoConvergence",
    "OverlappingPieces",
    "ParseError",
    "SampledMin",
    "SelfIntersecting",
    "Simplex",
    "StarBody",
    "StrategyDimensionMismatch",
    "UnsupportedDimension",
    "WrongDirectionCount",
    "WrongOrientation",
    "ZeroDirection",
    "best_cut",
    "box_region",
    "cake_id",
    "clip_convex",
    "decode_cake",
    "depth_at",
    "depth_grid",
    "encode_cake",
    "helly_certificate",
    "level_set",
    "maximin_point",
    "measure",
    "normalize",
    "parse_document",
    "play_round",
    "quantile",
    "quantile_many",
    "regular_simplex",
    "render_svg",
    "run_experiment",
    "sample_points",
    "simplex_tail_fraction",
    "simplex_volume",
    "star_body",
    "tail",
    "tail_many",
    "triangulate_polygon",
    "validate_cake",
    "verify_star_depth",
    "verify_star_structure",
]
