"""Halfspace depth of points, best cuts, level sets, and the maximin point.

depth(x) = min over unit directions a of tail(cake, a, <x, a>). In 2D the
minimum is found by an exact angular sweep over the critical angles (one
per line through x and a cake vertex) with golden-section refinement in
between; in 3D and above by a deterministic sphere lattice with local
refinement. The maximin point comes from a cutting-direction loop whose
feasibility oracle is the (outer) depth level set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cake import Cake, quantile_many, tail_many
from .errors import UnsupportedDimension, WrongDirectionCount, NoConvergence
from .geometry import ConvexRegion, box_region, clip_convex, normalize

SWEEP_TOL = 1e-6          # declared value tolerance of the 2D sweep
SWEEP_ANGLE_TOL = 1e-10   # golden-section bracket width
SPHERE_LATTICE = 4096
SPHERE_REFINE_STARTS = 16
SPHERE_VALUE_TOL = 1e-5   # declared tolerance of the refined sphere estimate
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

MAXIMIN_MAX_ROUNDS = 200
MAXIMIN_INIT_DIRS_2D = 32
MAXIMIN_INIT_DIRS_3D = 128


class DepthMethod(str, Enum):
    EXACT_SWEEP_2D = "exact_sweep_2d"
    SAMPLED_SPHERE = "sampled_sphere"
    BOUND_ONLY = "bound_only"


@dataclass
class Cut:
    """A halfspace through ``anchor`` with inner normal ``direction``."""

    anchor: np.ndarray
    direction: np.ndarray
    fraction: float


@dataclass
class DepthCertificate:
    point: np.ndarray
    lower: float
    upper: float
    witness: Cut
    method: DepthMethod


@dataclass
class HellyReport:
    directions: np.ndarray
    epsilon: float
    level: float
    feasible: bool
    witness: np.ndarray | None
    witness_tails: np.ndarray | None
    witness_in_cake: bool


@dataclass
class MaximinResult:
    point: np.ndarray
    lower: float
    upper: float
    rounds: int
    in_cake: bool


# ---------------------------------------------------------------------------
# direction lattices
# ---------------------------------------------------------------------------


def circle_directions(count: int, phase: float = 0.0) -> np.ndarray:
    ang = phase + 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(ang), np.sin(ang)])


def fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic low-discrepancy lattice on the unit 2-sphere."""
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    golden = np.pi * (3.0 - math.sqrt(5.0))
    ang = golden * i
    return np.column_stack([r * np.cos(ang), r * np.sin(ang), z])


def sphere_lattice(dim: int, count: int, seed: int = 0) -> np.ndarray:
    """Quasi-uniform unit directions in any dimension.

    2D and 3D are deterministic lattices; higher dimensions fall back to
    seeded Gaussian directions (still deterministic for a fixed seed).
    """
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        return circle_directions(count)
    if dim == 3:
        return fibonacci_sphere(count)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _antipodal_fibonacci(count: int) -> np.ndarray:
    half = fibonacci_sphere(count // 2)
    return np.vstack([half, -half])


# ---------------------------------------------------------------------------
# 2D exact sweep
# ---------------------------------------------------------------------------


def _tails_at_angles(cake: Cake, x: np.ndarray, angles: np.ndarray) -> np.ndarray:
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    return tail_many(cake, dirs, dirs @ x)


def _golden_min(f, lo, hi, tol, max_iter=90):
    """Vectorized golden-section minimization over per-row brackets.

    ``f`` maps an (m,) abscissa array to (m,) values. Returns the best
    (x, f) pair seen per row, which is never worse than any probe.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    best_x = np.where(f1 <= f2, x1, x2)
    best_f = np.minimum(f1, f2)
    for _ in range(max_iter):
        if float(np.max(hi - lo)) <= tol:
            break
        left = f1 <= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x1n = hi - INVPHI * (hi - lo)
        x2n = lo + INVPHI * (hi - lo)
        probe = np.where(left, x1n, x2n)
        fp = f(probe)
        old_x1, old_f1, old_x2, old_f2 = x1, f1, x2, f2
        x1 = np.where(left, x1n, old_x2)
        f1 = np.where(left, fp, old_f2)
        x2 = np.where(left, old_x1, x2n)
        f2 = np.where(left, old_f1, fp)
        better = fp < best_f
        best_x = np.where(better, probe, best_x)
        best_f = np.where(better, fp, best_f)
    return best_x, best_f


def _critical_angles(cake: Cake, x: np.ndarray) -> np.ndarray:
    verts = np.unique(np.round(cake.vertices(), 12), axis=0)
    diffs = verts - x
    norms = np.linalg.norm(diffs, axis=1)
    diffs = diffs[norms > 1e-12 * max(1.0, cake.scale())]
    # normal of the line through x and v, both orientations
    base = np.arctan2(diffs[:, 0], -diffs[:, 1])
    angles = np.concatenate([base, base + np.pi]) % (2.0 * np.pi)
    angles = np.sort(angles)
    keep = np.ones(len(angles), dtype=bool)
    keep[1:] = np.diff(angles) > 1e-12
    return angles[keep]


def _sweep_2d(cake: Cake, x: np.ndarray) -> tuple[float, float]:
    """Minimize tail over all cut angles through x; returns (angle, value)."""
    crit = _critical_angles(cake, x)
    if crit.size == 0:
        crit = np.array([0.0])
    ext = np.append(crit, crit[0] + 2.0 * np.pi)
    spans = np.diff(ext)

    # 9-point subdivision of every critical interval, one batched call
    steps = np.linspace(0.0, 1.0, 9)
    grid = ext[:-1, None] + spans[:, None] * steps[None, :]
    vals = _tails_at_angles(cake, x, grid.ravel()).reshape(grid.shape)

    k = np.argmin(vals, axis=1)
    rows = np.arange(grid.shape[0])
    lo = grid[rows, np.maximum(k - 1, 0)]
    hi = grid[rows, np.minimum(k + 1, 8)]
    gx, gf = _golden_min(
        lambda ang: _tails_at_angles(cake, x, ang), lo, hi, SWEEP_ANGLE_TOL
    )

    cand_ang = np.concatenate([grid.ravel(), gx])
    cand_val = np.concatenate([vals.ravel(), gf])
    fmin = float(cand_val.min())
    ties = cand_ang[cand_val <= fmin + 1e-15] % (2.0 * np.pi)
    return float(ties.min()), fmin


# ---------------------------------------------------------------------------
# sampled sphere (n >= 3)
# ---------------------------------------------------------------------------


def _tangent_basis(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    mat = np.eye(n) - np.outer(u, u)
    q, _ = np.linalg.qr(np.column_stack([u, mat]))
    return q[:, 1:n].T


def _refine_on_sphere(cake: Cake, x: np.ndarray, u: np.ndarray, step: float):
    """Coordinate descent along tangent great circles, then a zoom search."""

    def value(d: np.ndarray) -> float:
        return float(tail_many(cake, d[None, :], d[None, :] @ x)[0])

    best = value(u)
    for _ in range(6):
        improved = 0.0
        for w in _tangent_basis(u):
            lo, hi = np.array([-step]), np.array([step])

            def along(delta, u=u, w=w):
                d = np.cos(delta)[:, None] * u + np.sin(delta)[:, None] * w
                return tail_many(cake, d, d @ x)

            dx, df = _golden_min(along, lo, hi, 1e-9)
            if df[0] < best - 1e-12:
                improved += best - df[0]
                best = float(df[0])
                u = math.cos(dx[0]) * u + math.sin(dx[0]) * w
                u /= np.linalg.norm(u)
        step *= 0.5
        if improved < 1e-8:
            break

    # zoom pattern search catches kink minima that stall coordinate descent
    radius = 4.0 * step
    rng = np.random.default_rng(12345)
    for _ in range(6):
        cloud = u + radius * rng.normal(size=(160, u.shape[0]))
        cloud /= np.linalg.norm(cloud, axis=1, keepdims=True)
        cloud = np.vstack([cloud, u])
        fr = tail_many(cake, cloud, cloud @ x)
        k = int(np.argmin(fr))
        if fr[k] < best:
            best = float(fr[k])
            u = cloud[k]
        radius *= 0.25
    return u, best


def _sampled_sphere(cake: Cake, x: np.ndarray) -> tuple[np.ndarray, float]:
    dirs = sphere_lattice(cake.dim, SPHERE_LATTICE)
    fr = tail_many(cake, dirs, dirs @ x)
    order = np.argsort(fr)[:SPHERE_REFINE_STARTS]
    spacing = math.sqrt(4.0 * math.pi / SPHERE_LATTICE)
    best_u, best_f = dirs[order[0]], float(fr[order[0]])
    for idx in order:
        u, f = _refine_on_sphere(cake, x, dirs[idx].copy(), spacing)
        if f < best_f:
            best_u, best_f = u, f
    return best_u, best_f


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def depth_at(cake: Cake, point) -> DepthCertificate:
    """Halfspace depth of a point with a certified [lower, upper] bracket.

    2D: exact sweep, lower = upper - SWEEP_TOL. 1D: the two directions are
    evaluated exactly, so lower = upper. n >= 3: sampled sphere, upper is
    the refined best and no positive lower bound is claimed.
    """
    x = np.asarray(point, dtype=float)
    n = cake.dim
    if n == 1:
        dirs = np.array([[1.0], [-1.0]])
        fr = tail_many(cake, dirs, dirs @ x)
        k = int(np.argmin(fr))
        cut = Cut(x, dirs[k], float(fr[k]))
        return DepthCertificate(x, float(fr[k]), float(fr[k]), cut, DepthMethod.EXACT_SWEEP_2D)
    if n == 2:
        ang, val = _sweep_2d(cake, x)
        a = np.array([math.cos(ang), math.sin(ang)])
        cut = Cut(x, a, val)
        return DepthCertificate(x, max(0.0, val - SWEEP_TOL), val, cut, DepthMethod.EXACT_SWEEP_2D)
    u, val = _sampled_sphere(cake, x)
    cut = Cut(x, u, val)
    return DepthCertificate(x, 0.0, val, cut, DepthMethod.SAMPLED_SPHERE)


def best_cut(cake: Cake, point, mode: str = "min") -> Cut:
    """Havel's best response at a point.

    ``min`` is the depth witness; ``max`` solves the reversed problem, so
    its fraction is 1 - depth up to the sweep tolerance.
    """
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    x = np.asarray(point, dtype=float)
    cert = depth_at(cake, x)
    if mode == "min":
        return cert.witness
    a = -cert.witness.direction
    frac = float(tail_many(cake, a[None, :], a[None, :] @ x)[0])
    return Cut(x, a, frac)


def level_set(cake: Cake, t: float, directions) -> ConvexRegion:
    """Outer approximation of {x : depth(x) >= t} from finitely many cuts."""
    if cake.dim not in (2, 3):
        raise UnsupportedDimension(f"level_set supports dims 2 and 3, got {cake.dim}")
    dirs = np.asarray([normalize(d) for d in directions], dtype=float)
    if dirs.shape[0] == 0:
        raise ValueError("need at least one direction")
    offsets = quantile_many(cake, dirs, t)
    lo, hi = cake.inflated_bbox(0.1)
    region = box_region(lo, hi)
    for a, q in zip(dirs, offsets):
        region = clip_convex(region, a, float(q))
        if region.is_empty:
            break
    return region


def _certified_lower(val: float, dim: int) -> float:
    slack = SWEEP_TOL if dim <= 2 else SPHERE_VALUE_TOL
    return max(0.0, val - slack)


def _maximin_1d(cake: Cake, tol: float) -> MaximinResult:
    lo, hi = cake.bbox[0][0], cake.bbox[1][0]

    def neg_depth(xs: np.ndarray) -> np.ndarray:
        pts = xs[:, None]
        right = tail_many(cake, np.ones((len(xs), 1)), pts[:, 0])
        left = tail_many(cake, -np.ones((len(xs), 1)), -pts[:, 0])
        return -np.minimum(right, left)

    bx, bf = _golden_min(neg_depth, np.array([lo]), np.array([hi]), 1e-12)
    val = -float(bf[0])
    point = np.array([float(bx[0])])
    return MaximinResult(point, val, min(0.5, val + 1e-9), 1, cake.contains(point))


def maximin_point(cake: Cake, tol: float = 1e-3) -> MaximinResult:
    """Maximize depth over points via an adaptive cutting-direction loop.

    Keeps a direction set D; each round bisects the largest level t whose
    outer level set is nonempty, probes the region's vertex centroid with
    depth_at, and adds the witness direction to D. The returned bracket
    satisfies lower <= max depth <= upper.
    """
    if tol < 1e-4:
        raise ValueError(f"tol must be >= 1e-4, got {tol}")
    n = cake.dim
    if n == 1:
        return _maximin_1d(cake, tol)
    if n not in (2, 3):
        raise UnsupportedDimension(f"maximin_point supports dims 1-3, got {n}")

    if n == 2:
        dirs = [circle_directions(MAXIMIN_INIT_DIRS_2D)[i] for i in range(MAXIMIN_INIT_DIRS_2D)]
    else:
        lattice = _antipodal_fibonacci(MAXIMIN_INIT_DIRS_3D)
        dirs = [lattice[i] for i in range(lattice.shape[0])]

    # depth never exceeds 1/2, and D contains antipodal pairs, so a level
    # slightly above 1/2 starts infeasible
    t_hi = 0.5 + 1e-3
    while not level_set(cake, t_hi, dirs).is_empty:
        t_hi = 0.5 + 2.0 * (t_hi - 0.5)
        if t_hi >= 0.999:
            t_hi = 1.0 - 1e-9
            break

    best_val = -1.0
    best_point: np.ndarray | None = None
    t_res = max(tol / 8.0, 1e-7)

    for round_no in range(1, MAXIMIN_MAX_ROUNDS + 1):
        blo = max(1e-6, best_val)
        bhi = t_hi
        feas_region = None
        while bhi - blo > t_res:
            mid = 0.5 * (blo + bhi)
            region = level_set(cake, mid, dirs)
            if region.is_empty:
                bhi = mid
            else:
                blo = mid
                feas_region = region
        t_hi = min(t_hi, bhi)
        if feas_region is None:
            feas_region = level_set(cake, blo, dirs)
        if feas_region.is_empty:
            break  # only at numeric exhaustion; keep best-so-far

        x_star = feas_region.centroid()
        cert = depth_at(cake, x_star)
        if cert.upper > best_val:
            best_val = cert.upper
            best_point = x_star
        w = cert.witness.direction
        if all(np.linalg.norm(w - d) > 1e-9 for d in dirs):
            dirs.append(w)

        lower = _certified_lower(best_val, n)
        if t_hi - lower <= tol:
            return MaximinResult(
                best_point, lower, t_hi, round_no, cake.contains(best_point)
            )

    result = MaximinResult(
        best_point if best_point is not None else cake.centroid(),
        _certified_lower(best_val, n) if best_val >= 0 else 0.0,
        t_hi,
        MAXIMIN_MAX_ROUNDS,
        best_point is not None and cake.contains(best_point),
    )
    raise NoConvergence(
        f"maximin bracket {result.upper - result.lower:.3g} > tol {tol:.3g} "
        f"after {MAXIMIN_MAX_ROUNDS} rounds",
        best=result,
    )


def helly_certificate(
    cake: Cake, directions, epsilon: float = 1e-6, level: float | None = None
) -> HellyReport:
    """Intersect the n+1 halfspaces at level 1/(n+1) - epsilon and report.

    ``level`` overrides the default level for diagnostics (for example a
    level above the depth bound, which can make triples infeasible).
    """
    n = cake.dim
    if n not in (2, 3):
        raise UnsupportedDimension(
            f"helly_certificate supports dims 2 and 3, got {n}"
        )
    dirs = np.asarray([normalize(d) for d in directions], dtype=float)
    if dirs.shape[0] != n + 1:
        raise WrongDirectionCount(f"need exactly {n + 1} directions, got {dirs.shape[0]}")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    t = (1.0 / (n + 1) - epsilon) if level is None else level
    if not 0.0 < t < 1.0:
        raise ValueError(f"certificate level {t} outside (0, 1)")

    offsets = quantile_many(cake, dirs, t)
    lo, hi = cake.inflated_bbox(0.1)
    region = box_region(lo, hi)
    for a, q in zip(dirs, offsets):
        region = clip_convex(region, a, float(q))
        if region.is_empty:
            break
    if region.is_empty:
        return HellyReport(dirs, epsilon, t, False, None, None, False)
    witness = region.centroid()
    tails = tail_many(cake, dirs, dirs @ witness)
    return HellyReport(dirs, epsilon, t, True, witness, tails, cake.contains(witness))


# ---------------------------------------------------------------------------
# depth maps (heatmap rendering support)
# ---------------------------------------------------------------------------


def depth_grid(
    cake: Cake, resolution: int, fan: int = 512, refine: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Depth over a resolution x resolution grid of the inflated bbox.

    Starts from a shared direction-fan upper estimate, then greedily
    replaces the top cells with exact sweep values until no unrefined
    estimate can beat the best exact value. The grid maximum is therefore
    an exact depth, never an overestimate.
    """
    if cake.dim != 2:
        raise UnsupportedDimension("depth_grid is 2D only")
    lo, hi = cake.inflated_bbox(0.1)
    xs = lo[0] + (np.arange(resolution) + 0.5) * (hi[0] - lo[0]) / resolution
    ys = lo[1] + (np.arange(resolution) + 0.5) * (hi[1] - lo[1]) / resolution
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])

    # fixed-direction batch evaluation: per fan direction, all grid points
    from .geometry import _tail_fraction_batch

    vals = np.full(pts.shape[0], np.inf)
    for a in circle_directions(fan):
        offs = pts @ a
        acc = np.zeros(pts.shape[0])
        for p in cake.pieces:
            heights = (p.vertices @ a)[None, :] - offs[:, None]
            acc += p.volume * _tail_fraction_batch(heights)
        np.minimum(vals, acc / cake.total_measure, out=vals)

    if refine:
        order = np.argsort(-vals)
        best_exact = -np.inf
        budget = 4096
        pos = 0
        for pos, idx in enumerate(order):
            if vals[idx] <= best_exact or pos >= budget:
                break
            exact = depth_at(cake, pts[idx]).upper
            vals[idx] = exact
            best_exact = max(best_exact, exact)
        # cells never refined keep fan estimates; clamp any leftovers above
        # the certified maximum (only reachable if the budget ran out)
        np.minimum(vals, max(best_exact, 0.0), out=vals)

    return vals.reshape(resolution, resolution), xs, ys
