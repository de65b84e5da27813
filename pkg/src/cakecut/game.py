"""The pointing game: Pavel places a point, Havel answers with a cut.

Havel is modeled as the minimizer (the inner infimum of the game value);
the maximizing reading stays available through best_cut(mode="max").
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .cake import Cake, tail_many
from .depth import Cut, best_cut, maximin_point, sphere_lattice
from .errors import StrategyDimensionMismatch
from .geometry import normalize


@dataclass
class Centroid:
    """Place at the measure-weighted centroid (the naive baseline)."""


@dataclass
class Centerpoint:
    """Place at the maximin point, solved to the given bracket tolerance."""

    tol: float = 1e-3

    def __post_init__(self):
        if self.tol < 1e-4:
            raise ValueError(f"tol must be >= 1e-4, got {self.tol}")


@dataclass
class FixedPoint:
    point: np.ndarray

    def __post_init__(self):
        self.point = np.asarray(self.point, dtype=float)
        if not np.all(np.isfinite(self.point)):
            raise ValueError("fixed point must be finite")


@dataclass
class ExactMin:
    """Havel plays the exact minimizing cut (depth witness)."""


@dataclass
class SampledMin:
    """Havel minimizes over a deterministic lattice of cut directions."""

    count: int = 256

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass
class ManualCut:
    direction: np.ndarray

    def __post_init__(self):
        self.direction = normalize(self.direction)


PavelStrategy = Centroid | Centerpoint | FixedPoint
HavelStrategy = ExactMin | SampledMin | ManualCut


@dataclass
class GameRound:
    cake_id: str
    pavel_point: np.ndarray
    havel_cut: Cut
    fraction: float
    bound: float


@dataclass
class ExperimentSummary:
    rounds: list[GameRound]
    min_fraction: float
    csv_text: str = field(repr=False, default="")


def _resolve_point(cake: Cake, strategy: PavelStrategy) -> np.ndarray:
    if isinstance(strategy, Centroid):
        return cake.centroid()
    if isinstance(strategy, Centerpoint):
        if cake.dim > 3:
            raise StrategyDimensionMismatch(
                f"Centerpoint needs dim <= 3, cake has dim {cake.dim}"
            )
        return maximin_point(cake, strategy.tol).point
    if isinstance(strategy, FixedPoint):
        if strategy.point.shape != (cake.dim,):
            raise StrategyDimensionMismatch(
                f"fixed point has {strategy.point.shape[0]} coords, cake dim {cake.dim}"
            )
        return strategy.point
    raise TypeError(f"unknown Pavel strategy {strategy!r}")


def _resolve_cut(cake: Cake, point: np.ndarray, strategy: HavelStrategy) -> Cut:
    if isinstance(strategy, ExactMin):
        return best_cut(cake, point, "min")
    if isinstance(strategy, SampledMin):
        dirs = sphere_lattice(cake.dim, strategy.count)
        fr = tail_many(cake, dirs, dirs @ point)
        k = int(np.argmin(fr))
        return Cut(point, dirs[k], float(fr[k]))
    if isinstance(strategy, ManualCut):
        a = strategy.direction
        if a.shape != (cake.dim,):
            raise StrategyDimensionMismatch(
                f"manual direction has {a.shape[0]} coords, cake dim {cake.dim}"
            )
        frac = float(tail_many(cake, a[None, :], a[None, :] @ point)[0])
        return Cut(point, a, frac)
    raise TypeError(f"unknown Havel strategy {strategy!r}")


def play_round(
    cake: Cake,
    pavel: PavelStrategy,
    havel: HavelStrategy,
    cake_id: str = "cake",
) -> GameRound:
    point = _resolve_point(cake, pavel)
    cut = _resolve_cut(cake, point, havel)
    bound = 1.0 / (cake.dim + 1)
    return GameRound(cake_id, point, cut, cut.fraction, bound)


def run_experiment(
    cakes,
    pavel: PavelStrategy,
    havel: HavelStrategy,
    out=None,
    ids=None,
) -> ExperimentSummary:
    """One round per cake, emitted as a CSV table in input order.

    ``out`` may be a path or writable text stream; the CSV text is also
    returned on the summary.
    """
    cakes = list(cakes)
    if not cakes:
        raise ValueError("experiment needs a nonempty cake suite")
    if ids is None:
        ids = [f"cake{i}" for i in range(len(cakes))]

    max_dim = max(c.dim for c in cakes)
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = (
        ["cake_id", "n"]
        + [f"pavel_x{i}" for i in range(max_dim)]
        + ["fraction", "bound", "fraction_minus_bound"]
    )
    writer.writerow(header)

    rounds = []
    for cid, cake in zip(ids, cakes):
        rnd = play_round(cake, pavel, havel, cake_id=cid)
        rounds.append(rnd)
        coords = [repr(float(v)) for v in rnd.pavel_point]
        coords += [""] * (max_dim - cake.dim)
        writer.writerow(
            [cid, cake.dim]
            + coords
            + [
                repr(rnd.fraction),
                repr(rnd.bound),
                repr(rnd.fraction - rnd.bound),
            ]
        )

    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)
    return ExperimentSummary(rounds, min(r.fraction for r in rounds), text)
