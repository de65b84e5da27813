"""Dimension-generic geometric kernel.

Provides the exact primitives everything else is built on:

- ``normalize`` for unit directions,
- ``Simplex`` with exact volume and the simplex/halfspace volume fraction
  (a Varsi-style convex recurrence on vertex heights, no sampling),
- ``ConvexRegion`` with halfspace clipping in 2D and 3D,
- ear-clipping triangulation of simple polygons.

All reals are float64; degeneracy cutoffs are relative to bounding-box
diagonals so coordinates may live at any scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegeneratePolygon,
    DegenerateSimplex,
    SelfIntersecting,
    UnsupportedDimension,
    WrongOrientation,
    ZeroDirection,
)

# volume > VOLUME_RTOL * bbox_diag^n is required of every simplex
VOLUME_RTOL = 1e-12


def normalize(v) -> np.ndarray:
    """Return v scaled to unit Euclidean norm.

    Raises ZeroDirection when every coordinate is (numerically) zero.
    """
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if not math.isfinite(norm) or norm < 1e-300:
        raise ZeroDirection(f"cannot normalize {v.tolist()!r}")
    return v / norm


def as_unit(v) -> np.ndarray:
    """Coerce v to a unit direction, re-normalizing small drift."""
    return normalize(v)


@dataclass
class Simplex:
    """n+1 affinely independent vertices in R^n, stored in positive orientation.

    Treated as immutable after construction; the vertex array is set
    read-only and ``volume``/``scale`` are cached.
    """

    vertices: np.ndarray
    volume: float = field(init=False)
    scale: float = field(init=False)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] != verts.shape[1] + 1:
            raise DegenerateSimplex(
                f"need (n+1, n) vertex array, got shape {verts.shape}"
            )
        if not np.all(np.isfinite(verts)):
            raise DegenerateSimplex("non-finite vertex coordinate")
        n = verts.shape[1]
        span = verts.max(axis=0) - verts.min(axis=0)
        scale = float(np.linalg.norm(span))
        edges = verts[1:] - verts[0]
        det = float(np.linalg.det(edges))
        volume = abs(det) / math.factorial(n)
        if scale <= 0.0 or volume <= VOLUME_RTOL * scale**n:
            raise DegenerateSimplex(
                f"volume {volume:.3g} below degeneracy cutoff for scale {scale:.3g}"
            )
        if det < 0:  # canonicalize: swapping two vertices flips the sign
            verts[[0, 1]] = verts[[1, 0]]
        verts.setflags(write=False)
        self.vertices = verts
        self.volume = volume
        self.scale = scale

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def barycentric(self, point) -> np.ndarray:
        """Barycentric coordinates of a point (sum to 1, any sign)."""
        point = np.asarray(point, dtype=float)
        n = self.dim
        m = np.vstack([self.vertices.T, np.ones(n + 1)])
        rhs = np.append(point, 1.0)
        return np.linalg.solve(m, rhs)

    def contains(self, point, tol: float = 1e-9) -> bool:
        return bool(np.all(self.barycentric(point) >= -tol))


def simplex_volume(s: Simplex) -> float:
    """Lebesgue measure of the simplex: |det of edge matrix| / n!."""
    return s.volume


def _tail_fraction_batch(heights: np.ndarray) -> np.ndarray:
    """Fraction of a simplex on the closed nonnegative side of a hyperplane.

    ``heights`` is (m, n+1): one row of signed vertex heights per query.
    Vertices exactly on the hyperplane carry no measure and are folded
    into the nonpositive group, which keeps boundary cases exact; the
    recurrence divides by (positive + magnitude) > 0 and forms only
    convex combinations, so every intermediate stays in [0, 1].
    """
    h = np.asarray(heights, dtype=float)
    m, d = h.shape
    out = np.empty(m)
    h_desc = -np.sort(-h, axis=1)
    n_pos = (h_desc > 0).sum(axis=1)
    for j in np.unique(n_pos):
        rows = np.nonzero(n_pos == j)[0]
        k_neg = d - j
        if j == 0:
            out[rows] = 0.0
            continue
        if k_neg == 0:
            out[rows] = 1.0
            continue
        alpha = h_desc[rows, :j]          # positive heights, descending
        zeta = -h_desc[rows, j:]          # |negative heights|, ascending
        acc = np.zeros((len(rows), k_neg + 1))
        acc[:, 0] = 1.0
        for jj in range(j):
            a = alpha[:, jj]
            for kk in range(1, k_neg + 1):
                z = zeta[:, kk - 1]
                acc[:, kk] = (a * acc[:, kk - 1] + z * acc[:, kk]) / (a + z)
        out[rows] = acc[:, k_neg]
    return out


def simplex_tail_fraction(s: Simplex, direction, offset: float) -> float:
    """Exact fraction of the simplex in the closed halfspace <y, a> >= offset."""
    a = np.asarray(direction, dtype=float)
    heights = s.vertices @ a - offset
    return float(_tail_fraction_batch(heights[None, :])[0])


# ---------------------------------------------------------------------------
# convex regions and clipping (2D and 3D)
# ---------------------------------------------------------------------------


@dataclass
class ConvexRegion:
    """Convex hull of a vertex list; 2D stores a CCW polygon, 3D adds facets.

    The empty region is an empty vertex list. Zero-measure regions (a
    point, an edge, a flat cap) are legal and non-empty.
    """

    dim: int
    vertices: np.ndarray
    facets: list[list[int]] | None = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, self.dim)

    @property
    def is_empty(self) -> bool:
        return self.vertices.shape[0] == 0

    def measure(self) -> float:
        """Area in 2D, volume in 3D; zero for flat or empty regions."""
        if self.is_empty:
            return 0.0
        if self.dim == 2:
            return _polygon_area(self.vertices)
        if self.dim == 3:
            return _polyhedron_volume(self.vertices, self.facets or [])
        raise UnsupportedDimension(f"measure of dim-{self.dim} region")

    def centroid(self) -> np.ndarray:
        """Vertex centroid (interior for non-flat convex regions)."""
        if self.is_empty:
            raise ValueError("empty region has no centroid")
        return self.vertices.mean(axis=0)


def box_region(lo, hi) -> ConvexRegion:
    """Axis-aligned box as a ConvexRegion (dim 2 or 3)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    dim = lo.shape[0]
    if dim == 2:
        verts = np.array(
            [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]
        )
        return ConvexRegion(2, verts)
    if dim == 3:
        corners = np.array(
            [
                [lo[0], lo[1], lo[2]],
                [hi[0], lo[1], lo[2]],
                [hi[0], hi[1], lo[2]],
                [lo[0], hi[1], lo[2]],
                [lo[0], lo[1], hi[2]],
                [hi[0], lo[1], hi[2]],
                [hi[0], hi[1], hi[2]],
                [lo[0], hi[1], hi[2]],
            ]
        )
        facets = [
            [0, 3, 2, 1],
            [4, 5, 6, 7],
            [0, 1, 5, 4],
            [1, 2, 6, 5],
            [2, 3, 7, 6],
            [3, 0, 4, 7],
        ]
        return ConvexRegion(3, corners, facets)
    raise UnsupportedDimension(f"box_region for dim {dim}")


def _polygon_area(verts: np.ndarray) -> float:
    if verts.shape[0] < 3:
        return 0.0
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _polygon_signed_area2(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _polyhedron_volume(verts: np.ndarray, facets: list[list[int]]) -> float:
    if verts.shape[0] < 4 or not facets:
        return 0.0
    center = verts.mean(axis=0)
    total = 0.0
    for facet in facets:
        if len(facet) < 3:
            continue
        base = verts[facet[0]] - center
        for i in range(1, len(facet) - 1):
            u = verts[facet[i]] - center
            w = verts[facet[i + 1]] - center
            total += abs(float(np.dot(base, np.cross(u, w)))) / 6.0
    return total


def _dedup_ring(points: list[np.ndarray], tol: float) -> np.ndarray:
    """Drop consecutive (cyclically) duplicates from a vertex ring."""
    if not points:
        return np.zeros((0, len(points[0]) if points else 0))
    kept: list[np.ndarray] = []
    for p in points:
        if kept and np.linalg.norm(p - kept[-1]) <= tol:
            continue
        kept.append(p)
    while len(kept) > 1 and np.linalg.norm(kept[0] - kept[-1]) <= tol:
        kept.pop()
    return np.asarray(kept)


def _clip_polygon(verts: np.ndarray, a: np.ndarray, offset: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex CCW polygon to <y, a> <= offset."""
    if verts.shape[0] == 0:
        return verts
    scale = max(1.0, float(np.abs(verts).max()))
    eps = 1e-12 * scale
    d = verts @ a - offset
    keep = d <= eps
    if bool(keep.all()):
        return verts
    if not bool(keep.any()):
        return np.zeros((0, 2))
    out: list[np.ndarray] = []
    m = verts.shape[0]
    for i in range(m):
        j = (i + 1) % m
        if keep[i]:
            out.append(verts[i])
        if keep[i] != keep[j]:
            di, dj = d[i], d[j]
            if abs(di) <= eps:
                cut = verts[i]
            elif abs(dj) <= eps:
                cut = verts[j]
            else:
                t = di / (di - dj)
                cut = verts[i] + t * (verts[j] - verts[i])
            out.append(cut)
    ring = _dedup_ring(out, eps)
    return ring if ring.shape[0] > 0 else np.zeros((0, 2))


def _plane_basis(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two orthonormal vectors spanning the plane with normal a."""
    pivot = np.zeros(3)
    pivot[int(np.argmin(np.abs(a)))] = 1.0
    u = np.cross(a, pivot)
    u /= np.linalg.norm(u)
    w = np.cross(a, u)
    return u, w


def _clip_polyhedron(
    verts: np.ndarray, facets: list[list[int]], a: np.ndarray, offset: float
) -> tuple[np.ndarray, list[list[int]]]:
    """Clip a convex polyhedron to <y, a> <= offset, rebuilding the cap facet."""
    scale = max(1.0, float(np.abs(verts).max()))
    eps = 1e-12 * scale
    d = verts @ a - offset
    keep = d <= eps
    if bool(keep.all()):
        return verts, facets
    if not bool(keep.any()):
        return np.zeros((0, 3)), []

    points: list[np.ndarray] = [verts[i] for i in range(verts.shape[0])]
    cut_cache: dict[tuple[int, int], int] = {}

    def cut_index(i: int, j: int) -> int:
        # snap to an endpoint already lying on the plane
        if abs(d[i]) <= eps:
            return i
        if abs(d[j]) <= eps:
            return j
        key = (i, j) if i < j else (j, i)
        if key not in cut_cache:
            t = d[i] / (d[i] - d[j])
            points.append(verts[i] + t * (verts[j] - verts[i]))
            cut_cache[key] = len(points) - 1
        return cut_cache[key]

    new_facets: list[list[int]] = []
    cap_ids: set[int] = set()
    for facet in facets:
        ring: list[int] = []
        m = len(facet)
        for ii in range(m):
            i, j = facet[ii], facet[(ii + 1) % m]
            if keep[i]:
                ring.append(i)
                if abs(d[i]) <= eps:
                    cap_ids.add(i)
            if keep[i] != keep[j]:
                ci = cut_index(i, j)
                ring.append(ci)
                cap_ids.add(ci)
        ring = [v for k, v in enumerate(ring) if v != ring[k - 1] or len(ring) == 1]
        if len(ring) >= 3 and len(set(ring)) >= 3:
            new_facets.append(ring)

    if len(cap_ids) >= 3:
        ids = sorted(cap_ids)
        pts = np.asarray([points[i] for i in ids])
        center = pts.mean(axis=0)
        u, w = _plane_basis(a)
        ang = np.arctan2((pts - center) @ w, (pts - center) @ u)
        new_facets.append([ids[k] for k in np.argsort(ang)])

    used = sorted({i for facet in new_facets for i in facet})
    if not used:
        # flat leftovers: every kept vertex without a surviving facet
        used = sorted(
            {i for i in range(len(verts)) if keep[i]} | set(cut_cache.values())
        )
        if not used:
            return np.zeros((0, 3)), []
        return np.asarray([points[i] for i in used]), []
    remap = {old: new for new, old in enumerate(used)}
    new_verts = np.asarray([points[i] for i in used])
    return new_verts, [[remap[i] for i in facet] for facet in new_facets]


def clip_convex(region: ConvexRegion, direction, offset: float) -> ConvexRegion:
    """Intersect a region with the closed halfspace <y, a> <= offset.

    Idempotent: a region already inside the halfspace is returned as-is.
    """
    a = np.asarray(direction, dtype=float)
    if region.dim == 2:
        if region.is_empty:
            return region
        clipped = _clip_polygon(region.vertices, a, offset)
        if clipped is region.vertices:
            return region
        return ConvexRegion(2, clipped)
    if region.dim == 3:
        if region.is_empty:
            return region
        verts, facets = _clip_polyhedron(
            region.vertices, region.facets or [], a, offset
        )
        if verts is region.vertices:
            return region
        return ConvexRegion(3, verts, facets)
    raise UnsupportedDimension(f"clip_convex supports dims 2 and 3, got {region.dim}")


# ---------------------------------------------------------------------------
# polygon triangulation
# ---------------------------------------------------------------------------


def _cross2(o: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    return float((p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]))


def _point_on_segment(p, a, b, eps) -> bool:
    if abs(_cross2(a, b, p)) > eps:
        return False
    return bool(
        min(a[0], b[0]) - eps <= p[0] <= max(a[0], b[0]) + eps
        and min(a[1], b[1]) - eps <= p[1] <= max(a[1], b[1]) + eps
    )


def _segments_intersect(p1, p2, q1, q2, eps) -> bool:
    d1 = _cross2(q1, q2, p1)
    d2 = _cross2(q1, q2, p2)
    d3 = _cross2(p1, p2, q1)
    d4 = _cross2(p1, p2, q2)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True
    for p, a, b in ((p1, q1, q2), (p2, q1, q2), (q1, p1, p2), (q2, p1, p2)):
        if _point_on_segment(p, a, b, eps):
            return True
    return False


def triangulate_polygon(loop) -> list[Simplex]:
    """Ear-clipping triangulation of a simple CCW polygon into Simplex pieces.

    Collinear vertices are dropped without emitting slivers, so the
    triangle areas still sum to the shoelace area of the loop.
    """
    pts = np.asarray(loop, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DegeneratePolygon(f"need at least 3 2D vertices, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DegeneratePolygon("non-finite vertex coordinate")
    scale = max(1.0, float(np.abs(pts).max()))
    eps = 1e-12 * scale
    area_eps = 1e-14 * scale * scale

    # repeated consecutive vertices are degenerate input
    m = pts.shape[0]
    for i in range(m):
        if np.linalg.norm(pts[i] - pts[(i + 1) % m]) <= eps:
            raise DegeneratePolygon(f"vertices {i} and {(i + 1) % m} coincide")

    # simplicity first: non-adjacent edges may not touch at all
    for i in range(m):
        for j in range(i + 1, m):
            if j == i + 1 or (i == 0 and j == m - 1):
                continue
            if _segments_intersect(
                pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m], eps
            ):
                raise SelfIntersecting(f"edges {i} and {j} intersect")

    area2 = _polygon_signed_area2(pts)
    if abs(area2) <= 2 * area_eps * m:
        raise DegeneratePolygon("polygon area is numerically zero")
    if area2 < 0:
        raise WrongOrientation("loop is clockwise; expected counter-clockwise")

    idx = list(range(m))
    triangles: list[Simplex] = []

    def emit(i0: int, i1: int, i2: int):
        tri = pts[[i0, i1, i2]]
        if abs(_cross2(tri[0], tri[1], tri[2])) <= 2 * area_eps:
            return
        try:
            triangles.append(Simplex(tri))
        except DegenerateSimplex:
            pass  # sliver below the simplex cutoff; area loss is ~1e-14 relative

    def diagonal_ok(ip: int, inx: int) -> bool:
        # the chord (ip, inx) must avoid every non-incident remaining edge
        # and run through the polygon interior
        a, b = pts[ip], pts[inx]
        n_cur = len(idx)
        for k in range(n_cur):
            u, v = idx[k], idx[(k + 1) % n_cur]
            if ip in (u, v) or inx in (u, v):
                continue
            if _segments_intersect(a, b, pts[u], pts[v], eps):
                return False
        return _point_in_ring(pts[idx], 0.5 * (a + b))

    guard = 4 * m * m
    while len(idx) > 3 and guard > 0:
        guard -= 1
        n_cur = len(idx)
        clipped = False
        for k in range(n_cur):
            ip, ic, inx = idx[k - 1], idx[k], idx[(k + 1) % n_cur]
            cross = _cross2(pts[ip], pts[ic], pts[inx])
            if cross < -eps:
                continue  # reflex corner
            if cross <= eps:
                # collinear corner or spike: drop the vertex, no triangle
                idx.pop(k)
                clipped = True
                break
            if not diagonal_ok(ip, inx):
                continue
            emit(ip, ic, inx)
            idx.pop(k)
            clipped = True
            break
        if not clipped:
            raise DegeneratePolygon("no ear found; polygon is numerically degenerate")
    if len(idx) == 3:
        emit(idx[0], idx[1], idx[2])
    if not triangles:
        raise DegeneratePolygon("triangulation produced no positive-area pieces")
    return triangles


def _triangle_barycentric(tri: np.ndarray, p: np.ndarray) -> np.ndarray:
    area = _cross2(tri[0], tri[1], tri[2])
    l0 = _cross2(p, tri[1], tri[2]) / area
    l1 = _cross2(tri[0], p, tri[2]) / area
    return np.array([l0, l1, 1.0 - l0 - l1])


def _point_in_ring(ring: np.ndarray, p: np.ndarray) -> bool:
    """Crossing-number containment test for a simple polygon."""
    inside = False
    m = ring.shape[0]
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x_cross = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0])
            if p[0] < x_cross:
                inside = not inside
    return inside
