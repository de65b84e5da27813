import json
import xml.etree.ElementTree as ET
from importlib import resources

import numpy as np
import pytest
from fastapi.testclient import TestClient

from cakecut import (
    ParseError,
    best_cut,
    decode_cake,
    depth_at,
    encode_cake,
    maximin_point,
    parse_document,
    render_svg,
    star_body,
    verify_star_structure,
)
from cakecut.cli import main
from cakecut.depth import depth_grid
from cakecut.server import create_app
from conftest import random_cake_2d

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _classes(svg_text):
    counts = {}
    for el in ET.fromstring(svg_text).iter():
        cls = el.get("class")
        if cls:
            counts[cls] = counts.get(cls, 0) + 1
    return counts


class TestSerialization:
    def test_round_trip_bit_exact(self, square):
        back = decode_cake(encode_cake(square))
        assert back.total_measure == 1.0
        assert back.piece_count == 2
        for a, b in zip(square.pieces, back.pieces):
            assert np.array_equal(a.vertices, b.vertices)

    def test_round_trip_random(self):
        rng = np.random.default_rng(50)
        for _ in range(10):
            cake = random_cake_2d(rng)
            back = decode_cake(encode_cake(cake))
            for a, b in zip(cake.pieces, back.pieces):
                assert np.array_equal(a.vertices, b.vertices)

    def test_shipped_documents_round_trip(self):
        data_dir = resources.files("cakecut") / "data"
        names = [p.name for p in data_dir.iterdir() if p.name.endswith(".json")]
        assert sorted(names) == ["lshape.json", "square.json", "star2.json", "triangle.json"]
        for name in names:
            text = (data_dir / name).read_text()
            cake = decode_cake(text)
            again = decode_cake(encode_cake(cake, name=name[:-5]))
            for a, b in zip(cake.pieces, again.pieces):
                assert np.array_equal(a.vertices, b.vertices)

    def test_wrong_vertex_length(self):
        with pytest.raises(ParseError, match=r"pieces\[0\]\[2\]"):
            decode_cake('{"dim": 2, "pieces": [[[0,0],[1,0],[0,1,5]]]}')

    def test_position_annotated(self):
        with pytest.raises(ParseError, match="line 1 column"):
            decode_cake('{"dim": 2 "pieces": []}')

    def test_star2_export_structure(self, star2):
        text = encode_cake(star2.cake, name="star2")
        doc = parse_document(text)
        assert doc["name"] == "star2"
        back = decode_cake(text)
        ratio = back.total_measure / star2.simplex.volume
        assert ratio == pytest.approx(3.0, rel=1e-12)


class TestRenderSvg:
    def test_cut_structure(self, square):
        cut = best_cut(square, [0.5, 0.5], "min")
        svg = render_svg(square, cut=cut)
        counts = _classes(svg)
        assert counts["piece"] == 2
        assert counts["cut-line"] == 1
        assert counts["cut-shade"] == 1

    def test_square_heatmap_max_near_center(self, square):
        values, xs, ys = depth_grid(square, 128)
        i, j = np.unravel_index(np.argmax(values), values.shape)
        lo, hi = square.inflated_bbox(0.1)
        cell = (hi - lo) / 128
        assert abs(xs[i] - 0.5) <= 2 * cell[0]
        assert abs(ys[j] - 0.5) <= 2 * cell[1]

    def test_star_heatmap_max_near_origin(self, star2):
        values, xs, ys = depth_grid(star2.cake, 128)
        i, j = np.unravel_index(np.argmax(values), values.shape)
        lo, hi = star2.cake.inflated_bbox(0.1)
        cell = (hi - lo) / 128
        assert abs(xs[i]) <= 2 * cell[0]
        assert abs(ys[j]) <= 2 * cell[1]

    def test_heatmap_bounded_by_maximin(self, star2):
        values, _, _ = depth_grid(star2.cake, 64)
        mm = maximin_point(star2.cake, 1e-3)
        assert values.max() <= mm.upper + 1e-6

    def test_heatmap_svg_isoline(self, square):
        svg = render_svg(square, heatmap=16)
        counts = _classes(svg)
        assert counts["cell"] == 256
        assert counts["legend-isoline"] == 1
        root = ET.fromstring(svg)
        labels = [el.text for el in root.iter(f"{SVG_NS}text")]
        assert any("1/(n+1)" in t and repr(1 / 3) in t for t in labels)

    def test_heatmap_cells_carry_depth(self, square):
        svg = render_svg(square, heatmap=8)
        root = ET.fromstring(svg)
        depths = [
            float(el.get("data-depth"))
            for el in root.iter(f"{SVG_NS}rect")
            if el.get("class") == "cell"
        ]
        assert len(depths) == 64
        assert max(depths) <= 0.5 + 1e-6


class TestApi:
    def test_post_cake_and_depth(self, client):
        doc = {"dim": 2, "pieces": [[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]]}
        r = client.post("/cakes", json=doc)
        assert r.status_code == 201
        body = r.json()
        assert body["measure"] == 1.0
        assert body["dim"] == 2
        r = client.post("/depth", json={"cake_id": body["id"], "point": [0.5, 0.5]})
        assert r.status_code == 200
        assert r.json()["upper"] == pytest.approx(0.5, abs=1e-9)

    def test_star_bestcut(self, client):
        r = client.get("/star/2")
        star_id = r.json()["id"]
        r = client.post(
            "/bestcut", json={"cake_id": star_id, "point": [0, 0], "mode": "min"}
        )
        body = r.json()
        assert body["fraction"] == pytest.approx(1 / 3, abs=1e-6)
        assert "line" in body
        assert len(body["line"]) == 2

    def test_tail_endpoint(self, client):
        doc = {"dim": 2, "pieces": [[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]]}
        cid = client.post("/cakes", json=doc).json()["id"]
        r = client.post(
            "/tail", json={"cake_id": cid, "direction": [1, 0], "offset": 0.25}
        )
        assert r.json()["fraction"] == pytest.approx(0.75, abs=1e-12)
        r = client.post(
            "/tail", json={"cake_id": cid, "direction": [0, 1], "point": [0.5, 0.25]}
        )
        assert r.json()["fraction"] == pytest.approx(0.75, abs=1e-12)

    def test_unknown_cake_404(self, client):
        r = client.get("/cakes/doesnotexist")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_cake"

    def test_overlap_rejected(self, client):
        doc = {"dim": 2, "pieces": [[[0, 0], [1, 0], [0, 1]], [[0, 0], [1, 0], [0, 1]]]}
        r = client.post("/cakes", json=doc)
        assert r.status_code == 422
        assert r.json()["code"] == "overlapping_pieces"
        assert r.json()["detail"]["pair"] == [0, 1]

    def test_parse_error_code(self, client):
        r = client.post("/cakes", json={"dim": 2})
        assert r.status_code == 422
        assert r.json()["code"] == "parse_error"

    def test_polygon_endpoint(self, client):
        r = client.post(
            "/polygons",
            json={"loop": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]},
        )
        assert r.status_code == 201
        assert r.json()["measure"] == pytest.approx(3.0, rel=1e-12)

    def test_centerpoint_and_game(self, client):
        star_id = client.get("/star/2").json()["id"]
        r = client.post("/centerpoint", json={"cake_id": star_id, "tol": 1e-3})
        body = r.json()
        assert body["lower"] <= 1 / 3 + 1e-9
        assert body["upper"] >= 1 / 3 - 1e-3
        r = client.post(
            "/game/round",
            json={
                "cake_id": star_id,
                "pavel": {"kind": "centerpoint"},
                "havel": {"kind": "exact"},
            },
        )
        assert r.json()["fraction"] == pytest.approx(1 / 3, abs=2e-3)

    def test_render_endpoint(self, client):
        doc = {"dim": 2, "pieces": [[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]]}
        cid = client.post("/cakes", json=doc).json()["id"]
        r = client.get(f"/cakes/{cid}/render", params={"heatmap": 8})
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("image/svg+xml")
        assert r.text.startswith("<svg")

    def test_document_round_trip(self, client, square):
        cid = client.post("/cakes", json=json.loads(encode_cake(square))).json()["id"]
        r = client.get(f"/cakes/{cid}/document")
        back = decode_cake(r.text)
        for a, b in zip(square.pieces, back.pieces):
            assert np.array_equal(a.vertices, b.vertices)


class TestCli:
    def test_validate_and_info(self, tmp_path, capsys, square):
        path = tmp_path / "square.json"
        path.write_text(encode_cake(square))
        assert main(["validate", str(path)]) == 0
        assert main(["info", str(path)]) == 0
        out = capsys.readouterr().out
        assert '"measure": 1.0' in out

    def test_validate_overlap_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"dim": 2, "pieces": [[[0,0],[1,0],[0,1]], [[0,0],[1,0],[0,1]]]}'
        )
        assert main(["validate", str(path)]) == 2

    def test_cli_api_depth_agree(self, tmp_path, capsys, client, square):
        path = tmp_path / "square.json"
        path.write_text(encode_cake(square))
        assert main(["depth", str(path), "0.3", "0.6"]) == 0
        cli_out = json.loads(capsys.readouterr().out)
        cid = client.post("/cakes", json=json.loads(encode_cake(square))).json()["id"]
        api_out = client.post(
            "/depth", json={"cake_id": cid, "point": [0.3, 0.6]}
        ).json()
        assert abs(cli_out["upper"] - api_out["upper"]) < 1e-12
        assert abs(cli_out["lower"] - api_out["lower"]) < 1e-12
        assert cli_out["witness_direction"] == api_out["witness_direction"]

    def test_star_and_verify_theorem_n1(self, tmp_path, capsys):
        out = tmp_path / "star1.json"
        assert main(["star", "1", "-o", str(out)]) == 0
        assert decode_cake(out.read_text()).total_measure == pytest.approx(4.0)
        assert main(["verify-theorem", "1", "--samples", "256"]) == 0
        text = capsys.readouterr().out
        assert "RESULT: PASS" in text

    def test_game_round(self, tmp_path, capsys, square):
        path = tmp_path / "square.json"
        path.write_text(encode_cake(square))
        assert main(["game", str(path), "--pavel", "centroid", "--havel", "exact"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["fraction"] == pytest.approx(0.5, abs=1e-6)

    def test_game_csv(self, tmp_path, capsys, square, triangle):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        p1.write_text(encode_cake(square))
        p2.write_text(encode_cake(triangle))
        csv_path = tmp_path / "out.csv"
        rc = main(
            ["game", str(p1), str(p2), "--pavel", "centroid", "--havel", "exact",
             "--csv", str(csv_path)]
        )
        assert rc == 0
        lines = csv_path.read_text().strip().splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("cake_id,n,pavel_x0")

    def test_render_cut(self, tmp_path, square):
        path = tmp_path / "square.json"
        path.write_text(encode_cake(square))
        out = tmp_path / "out.svg"
        assert main(["render", str(path), "--cut", "0.5,0.5", "-o", str(out)]) == 0
        counts = _classes(out.read_text())
        assert counts["piece"] == 2
        assert counts["cut-line"] == 1

    def test_cli_bestcut_and_centerpoint(self, tmp_path, capsys, square):
        path = tmp_path / "square.json"
        path.write_text(encode_cake(square))
        assert main(["bestcut", str(path), "0.25", "0.5", "--mode", "max"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["fraction"] == pytest.approx(0.75, abs=1e-5)
        assert main(["centerpoint", str(path), "--tol", "1e-3"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["point"] == pytest.approx([0.5, 0.5], abs=1e-3)


def test_serve_bind_failure():
    import socket

    from cakecut.errors import BindFailure
    from cakecut.server import serve

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    try:
        with pytest.raises(BindFailure):
            serve(port=port)
    finally:
        sock.close()
