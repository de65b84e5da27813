import numpy as np
import pytest
from scipy.spatial import Delaunay

from cakecut import DegenerateSimplex, OverlappingPieces, Simplex, star_body, validate_cake


def square_cake():
    return validate_cake(
        [
            np.array([[0, 0], [1, 0], [1, 1]], float),
            np.array([[0, 0], [1, 1], [0, 1]], float),
        ]
    )


def triangle_cake():
    return validate_cake([np.array([[0, 0], [1, 0], [0, 1]], float)])


@pytest.fixture(scope="session")
def square():
    return square_cake()


@pytest.fixture(scope="session")
def triangle():
    return triangle_cake()


@pytest.fixture(scope="session")
def star2():
    return star_body(2)


@pytest.fixture(scope="session")
def star3():
    return star_body(3)


def random_simplex(rng, n):
    while True:
        try:
            return Simplex(rng.normal(size=(n + 1, n)))
        except DegenerateSimplex:
            continue


def random_cake_2d(rng, min_pieces=3, max_pieces=12):
    """Interior-disjoint triangles from a Delaunay triangulation subset."""
    while True:
        npts = int(rng.integers(7, 16))
        pts = rng.uniform(-1, 1, (npts, 2))
        simps = []
        for t in Delaunay(pts).simplices:
            try:
                s = Simplex(pts[t])
            except DegenerateSimplex:
                continue
            if s.volume > 1e-3:
                simps.append(s)
        if len(simps) < min_pieces:
            continue
        k = int(rng.integers(min_pieces, min(max_pieces, len(simps)) + 1))
        chosen = [simps[i] for i in rng.choice(len(simps), size=k, replace=False)]
        try:
            return validate_cake(chosen)
        except OverlappingPieces:
            continue


def random_cake_3d(rng, min_pieces=2, max_pieces=6):
    while True:
        npts = int(rng.integers(6, 10))
        pts = rng.uniform(-1, 1, (npts, 3))
        simps = []
        total = 0.0
        for t in Delaunay(pts).simplices:
            try:
                s = Simplex(pts[t])
            except DegenerateSimplex:
                continue
            total += s.volume
            simps.append(s)
        simps = [s for s in simps if s.volume > 0.02 * total]
        if len(simps) < min_pieces:
            continue
        k = int(rng.integers(min_pieces, min(max_pieces, len(simps)) + 1))
        chosen = [simps[i] for i in rng.choice(len(simps), size=k, replace=False)]
        try:
            return validate_cake(chosen)
        except OverlappingPieces:
            continue


def random_unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)
