"""Exception types shared across the package."""


class CakecutError(Exception):
    """Base class for every domain error raised by cakecut."""


class ZeroDirection(CakecutError):
    """A direction vector too close to zero to define a halfspace."""


class DegenerateSimplex(CakecutError):
    """Vertices are affinely dependent (volume below the degeneracy cutoff)."""


class UnsupportedDimension(CakecutError):
    """Operation only implemented for a restricted set of dimensions."""


class SelfIntersecting(CakecutError):
    """Polygon boundary crosses itself."""


class WrongOrientation(CakecutError):
    """Polygon loop is clockwise; counter-clockwise input required."""


class DegeneratePolygon(CakecutError):
    """Polygon has fewer than three usable vertices or vanishing area."""


class EmptyCake(CakecutError):
    """A cake needs at least one simplex piece."""


class MixedDimensions(CakecutError):
    """Cake pieces do not all share one ambient dimension."""


class OverlappingPieces(CakecutError):
    """Two cake pieces share interior volume."""

    def __init__(self, i: int, j: int, estimate: float):
        self.pair = (i, j)
        self.estimate = estimate
        super().__init__(
            f"pieces {i} and {j} overlap (estimated shared fraction {estimate:.3g})"
        )


class DimensionOutOfRange(CakecutError):
    """Requested dimension outside the supported 1..8 range."""


class WrongDirectionCount(CakecutError):
    """A certificate in dimension n requires exactly n+1 directions."""


class StrategyDimensionMismatch(CakecutError):
    """Strategy parameters are incompatible with the cake's dimension."""


class NoConvergence(CakecutError):
    """Iterative search exhausted its round budget before reaching tolerance.

    The best result found so far is attached as ``best``.
    """

    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)


class ParseError(CakecutError):
    """Cake document text is malformed; message carries the position."""


class BindFailure(CakecutError):
    """HTTP server could not bind its port."""
