import numpy as np
import pytest

from cakecut import (
    DepthMethod,
    NoConvergence,
    Simplex,
    UnsupportedDimension,
    WrongDirectionCount,
    best_cut,
    depth_at,
    helly_certificate,
    level_set,
    maximin_point,
    tail,
    tail_many,
    validate_cake,
)
from cakecut.depth import circle_directions
from conftest import random_cake_2d, random_unit


class TestDepthAt:
    def test_square_center(self, square):
        cert = depth_at(square, [0.5, 0.5])
        assert cert.upper == pytest.approx(0.5, abs=1e-9)
        assert cert.method is DepthMethod.EXACT_SWEEP_2D
        assert cert.lower <= cert.upper

    def test_square_corner(self, square):
        assert depth_at(square, [0.0, 0.0]).upper == pytest.approx(0.0, abs=1e-9)

    def test_square_offcenter(self, square):
        assert depth_at(square, [0.25, 0.5]).upper == pytest.approx(0.25, abs=1e-5)

    def test_star2_origin(self, star2):
        cert = depth_at(star2.cake, [0.0, 0.0])
        assert -1e-9 <= cert.upper - 1 / 3 <= 1e-3

    def test_triangle_centroid(self, triangle):
        cert = depth_at(triangle, [1 / 3, 1 / 3])
        assert cert.upper == pytest.approx(4 / 9, abs=1e-5)

    def test_witness_consistency(self):
        rng = np.random.default_rng(20)
        cake = random_cake_2d(rng)
        for _ in range(20):
            x = rng.uniform(-1, 1, 2)
            cert = depth_at(cake, x)
            w = cert.witness
            assert np.allclose(w.anchor, x)
            assert abs(
                w.fraction - tail(cake, w.direction, float(w.direction @ x))
            ) <= 1e-9

    def test_depth_at_most_half(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            cake = random_cake_2d(rng)
            for _ in range(20):
                x = rng.uniform(-1.5, 1.5, 2)
                assert depth_at(cake, x).upper <= 0.5 + 1e-6

    def test_grid_oracle_agreement(self):
        # 50 random cakes: sweep matches a 20000-angle grid within 1e-5
        rng = np.random.default_rng(22)
        angles = 2 * np.pi * np.arange(20000) / 20000
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
        for _ in range(50):
            cake = random_cake_2d(rng)
            p = cake.pieces[int(rng.integers(cake.piece_count))].centroid()
            x = 0.5 * p + 0.5 * cake.centroid()
            cert = depth_at(cake, x)
            grid_min = float(tail_many(cake, dirs, dirs @ x).min())
            assert abs(cert.upper - grid_min) <= 1e-5

    def test_rigid_invariance(self):
        rng = np.random.default_rng(23)
        cake = random_cake_2d(rng)
        x = cake.centroid()
        base = depth_at(cake, x).upper
        for _ in range(25):
            th = rng.uniform(0, 2 * np.pi)
            rot = np.array(
                [[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]
            )
            v = rng.normal(size=2)
            moved = validate_cake(
                [Simplex(p.vertices @ rot.T + v) for p in cake.pieces]
            )
            assert depth_at(moved, rot @ x + v).upper == pytest.approx(
                base, abs=1e-6
            )

    def test_positive_scaling(self):
        rng = np.random.default_rng(24)
        cake = random_cake_2d(rng)
        x = cake.centroid()
        base = depth_at(cake, x).upper
        for k in (0.5, 3.0):
            scaled = validate_cake([Simplex(k * p.vertices) for p in cake.pieces])
            assert depth_at(scaled, k * x).upper == pytest.approx(base, abs=1e-6)

    def test_quasi_concavity(self):
        rng = np.random.default_rng(25)
        cake = random_cake_2d(rng)
        for _ in range(60):
            x = rng.uniform(-1, 1, 2)
            y = rng.uniform(-1, 1, 2)
            th = rng.uniform(0.05, 0.95)
            dx = depth_at(cake, x).upper
            dy = depth_at(cake, y).upper
            dm = depth_at(cake, th * x + (1 - th) * y).upper
            assert dm >= min(dx, dy) - 1e-5

    def test_3d_sampled_sphere(self, star3):
        cert = depth_at(star3.cake, np.zeros(3))
        assert cert.method is DepthMethod.SAMPLED_SPHERE
        assert cert.lower == 0.0
        assert -1e-9 <= cert.upper - 0.25 <= 1e-3


class TestBestCut:
    def test_square_center_min(self, square):
        cut = best_cut(square, [0.5, 0.5], "min")
        assert cut.fraction == pytest.approx(0.5, abs=1e-9)

    def test_square_offcenter_max(self, square):
        cut = best_cut(square, [0.25, 0.5], "max")
        assert cut.fraction == pytest.approx(0.75, abs=1e-5)

    def test_max_is_complement_of_min(self):
        rng = np.random.default_rng(26)
        cake = random_cake_2d(rng)
        for _ in range(20):
            x = rng.uniform(-0.5, 0.5, 2)
            lo = best_cut(cake, x, "min").fraction
            hi = best_cut(cake, x, "max").fraction
            assert abs(hi - (1 - lo)) <= 1e-6

    def test_triangle_centroid_min(self, triangle):
        cut = best_cut(triangle, [1 / 3, 1 / 3], "min")
        assert cut.fraction == pytest.approx(4 / 9, abs=1e-5)


class TestLevelSet:
    def test_square_quarter(self, square):
        region = level_set(square, 0.25, [[1, 0], [-1, 0], [0, 1], [0, -1]])
        assert region.measure() == pytest.approx(0.25, abs=1e-9)
        lo = region.vertices.min(axis=0)
        hi = region.vertices.max(axis=0)
        assert np.allclose(lo, [0.25, 0.25], atol=1e-9)
        assert np.allclose(hi, [0.75, 0.75], atol=1e-9)

    def test_square_above_half_empty(self, square):
        region = level_set(square, 0.6, circle_directions(64))
        assert region.is_empty

    def test_nested(self, star2):
        dirs = circle_directions(32)
        r1 = level_set(star2.cake, 0.15, dirs)
        r2 = level_set(star2.cake, 0.30, dirs)
        # every vertex of the tighter region lies in the looser one
        for v in r2.vertices:
            for a in dirs:
                q = np.max(r1.vertices @ a)
                assert float(v @ a) <= q + 1e-9

    def test_outer_approximation(self, star2):
        # vertices of the level set never have depth above t (plus slack)
        dirs = circle_directions(48)
        for t in (0.2, 0.3):
            region = level_set(star2.cake, t, dirs)
            for v in region.vertices:
                assert depth_at(star2.cake, v).upper <= t + 1e-6

    def test_unsupported_dim(self):
        cake = validate_cake([np.array([[0.0], [1.0]])])
        with pytest.raises(UnsupportedDimension):
            level_set(cake, 0.3, [[1.0]])


class TestMaximin:
    def test_square(self, square):
        mm = maximin_point(square, 1e-3)
        assert np.allclose(mm.point, [0.5, 0.5], atol=1e-3)
        assert mm.lower <= 0.5 <= mm.upper
        assert mm.in_cake

    def test_star2(self, star2):
        mm = maximin_point(star2.cake, 1e-3)
        assert np.linalg.norm(mm.point) <= 1e-3 * star2.cake.scale()
        assert mm.lower <= 1 / 3 + 1e-12 <= mm.upper + 1e-3

    def test_triangle(self, triangle):
        mm = maximin_point(triangle, 1e-3)
        assert np.allclose(mm.point, [1 / 3, 1 / 3], atol=1e-3)
        assert mm.lower <= 4 / 9 <= mm.upper

    def test_bracket_valid(self):
        rng = np.random.default_rng(27)
        for _ in range(5):
            cake = random_cake_2d(rng)
            mm = maximin_point(cake, 1e-3)
            assert mm.upper - mm.lower <= 1e-3 + 1e-12
            # the point's exact depth sits inside the bracket
            d = depth_at(cake, mm.point).upper
            assert mm.lower <= d + 1e-12
            assert d <= mm.upper + 1e-9

    def test_tol_too_small(self, square):
        with pytest.raises(ValueError):
            maximin_point(square, 1e-5)


class TestHelly:
    def test_square_axis_triple(self, square):
        dirs = [[1, 0], [0, 1], [-np.sqrt(2) / 2, -np.sqrt(2) / 2]]
        rep = helly_certificate(square, dirs, epsilon=0.0)
        assert rep.feasible
        assert rep.witness_tails.min() >= 1 / 3 - 1e-9

    def test_wrong_count(self, square):
        with pytest.raises(WrongDirectionCount):
            helly_certificate(square, [[1, 0], [0, 1]], 1e-6)

    def test_random_triples_feasible(self, star2):
        rng = np.random.default_rng(28)
        for _ in range(100):
            dirs = [random_unit(rng, 2) for _ in range(3)]
            rep = helly_certificate(star2.cake, dirs, epsilon=1e-6)
            assert rep.feasible
            assert rep.witness_tails.min() >= 1 / 3 - 1e-6 - 1e-9

    def test_diagnostic_level_can_fail(self, square):
        rng = np.random.default_rng(29)
        feasible = []
        for _ in range(200):
            dirs = [random_unit(rng, 2) for _ in range(3)]
            rep = helly_certificate(square, dirs, epsilon=0.0, level=0.6)
            feasible.append(rep.feasible)
        assert not all(feasible)
