"""Validated simplicial cakes: measure, directional tails, and quantiles.

A cake is a finite union of interior-disjoint nondegenerate simplices.
Pieces may share boundary facets (measure zero); shared interior volume is
rejected at validation time. All tail fractions are exact per piece, so
the cake tail is exact too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCake, MixedDimensions, OverlappingPieces
from .geometry import (
    Simplex,
    _clip_polygon,
    _polygon_area,
    _tail_fraction_batch,
    normalize,
)

# bisection stops at 1e-12 in offset or 1e-10 in fraction, whichever first
QUANTILE_OFFSET_TOL = 1e-12
QUANTILE_FRACTION_TOL = 1e-10
QUANTILE_MAX_ITER = 200

OVERLAP_SAMPLES = 100_000
OVERLAP_AREA_RTOL = 1e-10  # 2D exact test: shared area <= rtol * total
OVERLAP_COUNT_LIMIT = 3    # MC test: hits above ~3 sigma of zero fail


@dataclass
class Cake:
    """Immutable union of interior-disjoint simplices with cached measure."""

    dim: int
    pieces: list[Simplex]
    total_measure: float = field(init=False)
    bbox: tuple[np.ndarray, np.ndarray] = field(init=False)
    validation: dict = field(default_factory=dict)

    def __post_init__(self):
        vols = [p.volume for p in self.pieces]
        self.total_measure = float(sum(vols))
        stacked = np.vstack([p.vertices for p in self.pieces])
        self.bbox = (stacked.min(axis=0), stacked.max(axis=0))

    @property
    def piece_count(self) -> int:
        return len(self.pieces)

    def vertices(self) -> np.ndarray:
        return np.vstack([p.vertices for p in self.pieces])

    def scale(self) -> float:
        lo, hi = self.bbox
        return float(np.linalg.norm(hi - lo))

    def centroid(self) -> np.ndarray:
        """Measure-weighted average of piece centroids."""
        acc = np.zeros(self.dim)
        for p in self.pieces:
            acc += p.volume * p.centroid()
        return acc / self.total_measure

    def contains(self, point, tol: float = 1e-9) -> bool:
        return any(p.contains(point, tol) for p in self.pieces)

    def inflated_bbox(self, factor: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.bbox
        pad = factor * (hi - lo) / 2.0
        return lo - pad, hi + pad


def _interval_overlap(p: Simplex, q: Simplex) -> float:
    a0, a1 = sorted(p.vertices[:, 0])
    b0, b1 = sorted(q.vertices[:, 0])
    return max(0.0, min(a1, b1) - max(a0, b0))


def _triangle_overlap_area(p: Simplex, q: Simplex) -> float:
    poly = p.vertices
    for i in range(3):
        # inward halfplane of edge (i, i+1) of the positively oriented q
        v0, v1 = q.vertices[i], q.vertices[(i + 1) % 3]
        edge = v1 - v0
        outward = np.array([edge[1], -edge[0]])
        poly = _clip_polygon(poly, outward, float(outward @ v0))
        if poly.shape[0] == 0:
            return 0.0
    return _polygon_area(poly)


def _sample_simplex(s: Simplex, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points from one simplex via normalized exponential weights."""
    w = rng.exponential(size=(count, s.dim + 1))
    w /= w.sum(axis=1, keepdims=True)
    return w @ s.vertices


def _mc_overlap_count(
    p: Simplex, q: Simplex, samples: int, rng: np.random.Generator
) -> int:
    pts = _sample_simplex(p, samples, rng)
    n = q.dim
    mat = (q.vertices[1:] - q.vertices[0]).T
    lam = np.linalg.solve(mat, (pts - q.vertices[0]).T).T
    margin = 1e-9
    inside = np.all(lam > margin, axis=1) & (lam.sum(axis=1) < 1.0 - margin)
    return int(inside.sum())


def validate_cake(pieces, seed: int = 0) -> Cake:
    """Build a Cake, certifying pairwise interior-disjointness.

    1D and 2D use exact interval/clipping tests; higher dimensions use
    Monte Carlo with OVERLAP_SAMPLES points per ordered pair. The method
    used is recorded in ``Cake.validation``.
    """
    pieces = [p if isinstance(p, Simplex) else Simplex(p) for p in pieces]
    if not pieces:
        raise EmptyCake("a cake needs at least one piece")
    dim = pieces[0].dim
    if any(p.dim != dim for p in pieces):
        dims = sorted({p.dim for p in pieces})
        raise MixedDimensions(f"pieces span dimensions {dims}")

    total = sum(p.volume for p in pieces)
    if dim == 1:
        validation = {"method": "interval-1d"}
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                shared = _interval_overlap(pieces[i], pieces[j])
                if shared > OVERLAP_AREA_RTOL * total:
                    raise OverlappingPieces(i, j, shared / total)
    elif dim == 2:
        validation = {"method": "exact-clip-2d"}
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                shared = _triangle_overlap_area(pieces[i], pieces[j])
                if shared > OVERLAP_AREA_RTOL * total:
                    raise OverlappingPieces(i, j, shared / total)
    else:
        validation = {
            "method": "monte-carlo",
            "samples_per_pair": OVERLAP_SAMPLES,
            "seed": seed,
        }
        rng = np.random.default_rng(seed)
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                hits = _mc_overlap_count(pieces[i], pieces[j], OVERLAP_SAMPLES, rng)
                if hits > OVERLAP_COUNT_LIMIT:
                    raise OverlappingPieces(i, j, hits / OVERLAP_SAMPLES)
    return Cake(dim, pieces, validation=validation)


def measure(cake: Cake) -> float:
    return cake.total_measure


def tail(cake: Cake, direction, offset: float) -> float:
    """Fraction of the cake in the closed halfspace <y, a> >= offset.

    Accepts any nonzero direction; it is normalized together with the
    offset so the halfspace is unchanged.
    """
    a = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(a))
    u = normalize(a)
    s = offset / norm
    acc = 0.0
    for p in cake.pieces:
        heights = p.vertices @ u - s
        acc += p.volume * float(_tail_fraction_batch(heights[None, :])[0])
    return acc / cake.total_measure


def tail_many(cake: Cake, directions: np.ndarray, offsets) -> np.ndarray:
    """Vectorized tail over m (unit direction, offset) queries."""
    directions = np.asarray(directions, dtype=float)
    offsets = np.broadcast_to(
        np.asarray(offsets, dtype=float), (directions.shape[0],)
    )
    acc = np.zeros(directions.shape[0])
    for p in cake.pieces:
        heights = directions @ p.vertices.T - offsets[:, None]
        acc += p.volume * _tail_fraction_batch(heights)
    return acc / cake.total_measure


def quantile(cake: Cake, direction, t: float) -> float:
    """Offset s with tail(cake, a, s) = t, by bisection over the support."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {t}")
    a = normalize(direction)
    return float(quantile_many(cake, a[None, :], t)[0])


def quantile_many(cake: Cake, directions: np.ndarray, t) -> np.ndarray:
    """Vectorized quantile: one bisection pass drives all m directions.

    Maintains tail(lo) >= t >= tail(hi); the midpoint is within
    QUANTILE_OFFSET_TOL of the crossing unless the fraction tolerance
    binds first.
    """
    directions = np.asarray(directions, dtype=float)
    m = directions.shape[0]
    t = np.broadcast_to(np.asarray(t, dtype=float), (m,))
    verts = cake.vertices()
    proj = directions @ verts.T
    lo = proj.min(axis=1)
    hi = proj.max(axis=1)
    active = np.ones(m, dtype=bool)
    for _ in range(QUANTILE_MAX_ITER):
        mid = 0.5 * (lo + hi)
        frac = tail_many(cake, directions[active], mid[active])
        ge = np.zeros(m, dtype=bool)
        ge[active] = frac >= t[active]
        hit = np.zeros(m, dtype=bool)
        hit[active] = np.abs(frac - t[active]) <= QUANTILE_FRACTION_TOL
        lo = np.where(active & ge & ~hit, mid, lo)
        hi = np.where(active & ~ge & ~hit, mid, hi)
        # the fraction tolerance binds at mid itself: collapse to it
        lo = np.where(hit, mid, lo)
        hi = np.where(hit, mid, hi)
        active &= ~hit
        active &= (hi - lo) > QUANTILE_OFFSET_TOL
        if not active.any():
            break
    return 0.5 * (lo + hi)


def sample_points(cake: Cake, count: int, seed: int) -> np.ndarray:
    """count i.i.d. uniform points on the cake, deterministic given seed.

    A piece is chosen with probability proportional to its volume, then a
    point is drawn with Dirichlet(1,..,1) barycentric weights.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    vols = np.array([p.volume for p in cake.pieces])
    which = rng.choice(len(cake.pieces), size=count, p=vols / vols.sum())
    w = rng.exponential(size=(count, cake.dim + 1))
    w /= w.sum(axis=1, keepdims=True)
    stacked = np.stack([p.vertices for p in cake.pieces])
    return np.einsum("ij,ijk->ik", w, stacked[which])
