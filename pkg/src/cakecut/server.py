"""HTTP API serving the engine to the web UI and scripts.

All geometry stays server-side; responses are JSON with plain decimal
numbers. Failures use one shape: {"code", "message", "detail"} with a
machine-readable code from ERROR_CODES.
"""

from __future__ import annotations

import os
import socket
import threading

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import errors as err
from .cake import Cake, tail, validate_cake
from .depth import Cut, best_cut, depth_at, maximin_point
from .extremal import star_body
from .game import (
    Centerpoint,
    Centroid,
    ExactMin,
    FixedPoint,
    ManualCut,
    SampledMin,
    play_round,
)
from .geometry import normalize, triangulate_polygon
from .render import _line_through_box, render_svg
from .serialize import cake_id, encode_cake, parse_document

DEFAULT_PORT = 8000

ERROR_CODES = {
    err.ParseError: "parse_error",
    err.ZeroDirection: "zero_direction",
    err.DegenerateSimplex: "degenerate_simplex",
    err.UnsupportedDimension: "unsupported_dimension",
    err.SelfIntersecting: "self_intersecting",
    err.WrongOrientation: "wrong_orientation",
    err.DegeneratePolygon: "degenerate_polygon",
    err.EmptyCake: "empty_cake",
    err.MixedDimensions: "mixed_dimensions",
    err.OverlappingPieces: "overlapping_pieces",
    err.DimensionOutOfRange: "dimension_out_of_range",
    err.WrongDirectionCount: "wrong_direction_count",
    err.StrategyDimensionMismatch: "strategy_dimension_mismatch",
    err.NoConvergence: "no_convergence",
}


class ApiFailure(Exception):
    def __init__(self, code: str, message: str, detail=None, status: int = 400):
        self.code = code
        self.message = message
        self.detail = detail if detail is not None else {}
        self.status = status


class CakeStore:
    """In-memory cake store keyed by content hash; inserts are atomic."""

    def __init__(self):
        self._lock = threading.Lock()
        self._cakes: dict[str, tuple[Cake, str | None]] = {}

    def put(self, cake: Cake, name: str | None = None) -> str:
        cid = cake_id(cake)
        with self._lock:
            self._cakes.setdefault(cid, (cake, name))
        return cid

    def get(self, cid: str) -> tuple[Cake, str | None]:
        with self._lock:
            entry = self._cakes.get(cid)
        if entry is None:
            raise ApiFailure("unknown_cake", f"no cake with id {cid!r}", status=404)
        return entry


def _need(body: dict, field: str):
    if field not in body:
        raise ApiFailure("invalid_request", f"missing field {field!r}")
    return body[field]


def _as_point(value, dim: int, field: str = "point") -> np.ndarray:
    try:
        p = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ApiFailure("invalid_request", f"{field} must be an array of numbers")
    if p.shape != (dim,) or not np.all(np.isfinite(p)):
        raise ApiFailure(
            "invalid_request", f"{field} must be {dim} finite numbers, got {value!r}"
        )
    return p


def _cut_payload(cake: Cake, cut: Cut) -> dict:
    payload = {
        "anchor": [float(v) for v in cut.anchor],
        "direction": [float(v) for v in cut.direction],
        "fraction": cut.fraction,
    }
    if cake.dim == 2:
        lo, hi = cake.inflated_bbox(0.1)
        seg = _line_through_box(np.asarray(cut.anchor), np.asarray(cut.direction), lo, hi)
        if seg is not None:
            payload["line"] = [[float(v) for v in p] for p in seg]
    return payload


def _parse_pavel(payload: dict):
    kind = payload.get("kind", "centroid")
    if kind == "centroid":
        return Centroid()
    if kind == "centerpoint":
        return Centerpoint(tol=float(payload.get("tol", 1e-3)))
    if kind == "fixed":
        return FixedPoint(np.asarray(_need(payload, "point"), dtype=float))
    raise ApiFailure("invalid_request", f"unknown pavel kind {kind!r}")


def _parse_havel(payload: dict):
    kind = payload.get("kind", "exact")
    if kind == "exact":
        return ExactMin()
    if kind == "sampled":
        return SampledMin(count=int(payload.get("count", 256)))
    if kind == "manual":
        return ManualCut(np.asarray(_need(payload, "direction"), dtype=float))
    raise ApiFailure("invalid_request", f"unknown havel kind {kind!r}")


def create_app(store: CakeStore | None = None) -> FastAPI:
    app = FastAPI(title="cakecut", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    cakes = store if store is not None else CakeStore()
    app.state.store = cakes

    @app.exception_handler(ApiFailure)
    async def _api_failure(_: Request, exc: ApiFailure):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(err.CakecutError)
    async def _domain_failure(_: Request, exc: err.CakecutError):
        code = ERROR_CODES.get(type(exc), "internal_error")
        detail = {}
        if isinstance(exc, err.OverlappingPieces):
            detail = {"pair": list(exc.pair), "estimate": exc.estimate}
        return JSONResponse(
            status_code=422,
            content={"code": code, "message": str(exc), "detail": detail},
        )

    async def _json_body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise ApiFailure("invalid_request", "request body must be JSON")
        if not isinstance(body, dict):
            raise ApiFailure("invalid_request", "request body must be a JSON object")
        return body

    @app.post("/cakes", status_code=201)
    async def post_cake(request: Request):
        body = await _json_body(request)
        import json as _json

        doc = parse_document(_json.dumps(body))
        seed = int(body.get("seed", 0))
        cake = validate_cake(
            [np.asarray(p, dtype=float) for p in doc["pieces"]], seed=seed
        )
        cid = cakes.put(cake, doc.get("name"))
        return {"id": cid, "measure": cake.total_measure, "dim": cake.dim}

    @app.get("/cakes/{cid}")
    async def get_cake(cid: str):
        cake, name = cakes.get(cid)
        return {
            "id": cid,
            "dim": cake.dim,
            "measure": cake.total_measure,
            "name": name,
            "pieces": [p.vertices.tolist() for p in cake.pieces],
            "bbox": [cake.bbox[0].tolist(), cake.bbox[1].tolist()],
            "bound": 1.0 / (cake.dim + 1),
        }

    @app.get("/star/{n}")
    async def get_star(n: int, seed: int = 0):
        star = star_body(n, seed=seed)
        cid = cakes.put(star.cake, f"star{n}")
        return {
            "id": cid,
            "dim": n,
            "measure": star.cake.total_measure,
            "bound": 1.0 / (n + 1),
        }

    @app.post("/polygons", status_code=201)
    async def post_polygon(request: Request):
        body = await _json_body(request)
        loop = _need(body, "loop")
        try:
            arr = np.asarray(loop, dtype=float)
        except (TypeError, ValueError):
            raise ApiFailure("invalid_request", "loop must be an array of [x, y] pairs")
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ApiFailure("invalid_request", "loop must be an array of [x, y] pairs")
        pieces = triangulate_polygon(arr)
        cake = validate_cake(pieces)
        cid = cakes.put(cake, body.get("name"))
        return {
            "id": cid,
            "measure": cake.total_measure,
            "dim": 2,
            "pieces": cake.piece_count,
        }

    @app.post("/depth")
    async def post_depth(request: Request):
        body = await _json_body(request)
        cake, _ = cakes.get(str(_need(body, "cake_id")))
        point = _as_point(_need(body, "point"), cake.dim)
        cert = depth_at(cake, point)
        return {
            "lower": cert.lower,
            "upper": cert.upper,
            "witness_direction": [float(v) for v in cert.witness.direction],
            "witness_fraction": cert.witness.fraction,
            "method": cert.method.value,
            "bound": 1.0 / (cake.dim + 1),
        }

    @app.post("/bestcut")
    async def post_bestcut(request: Request):
        body = await _json_body(request)
        cake, _ = cakes.get(str(_need(body, "cake_id")))
        point = _as_point(_need(body, "point"), cake.dim)
        mode = body.get("mode", "min")
        if mode not in ("min", "max"):
            raise ApiFailure("invalid_request", f"mode must be 'min' or 'max', got {mode!r}")
        cut = best_cut(cake, point, mode)
        payload = _cut_payload(cake, cut)
        payload["fraction"] = cut.fraction
        payload["bound"] = 1.0 / (cake.dim + 1)
        return payload

    @app.post("/tail")
    async def post_tail(request: Request):
        body = await _json_body(request)
        cake, _ = cakes.get(str(_need(body, "cake_id")))
        direction = _as_point(_need(body, "direction"), cake.dim, "direction")
        if "offset" in body:
            offset = float(body["offset"])
        elif "point" in body:
            point = _as_point(body["point"], cake.dim)
            offset = float(normalize(direction) @ point) * float(
                np.linalg.norm(direction)
            )
        else:
            raise ApiFailure("invalid_request", "need either offset or point")
        return {"fraction": tail(cake, direction, offset)}

    @app.post("/centerpoint")
    async def post_centerpoint(request: Request):
        body = await _json_body(request)
        cake, _ = cakes.get(str(_need(body, "cake_id")))
        tol = float(body.get("tol", 1e-3))
        result = maximin_point(cake, tol)
        return {
            "point": [float(v) for v in result.point],
            "lower": result.lower,
            "upper": result.upper,
            "rounds": result.rounds,
            "in_cake": result.in_cake,
            "bound": 1.0 / (cake.dim + 1),
        }

    @app.post("/game/round")
    async def post_game_round(request: Request):
        body = await _json_body(request)
        cid = str(_need(body, "cake_id"))
        cake, _ = cakes.get(cid)
        pavel = _parse_pavel(body.get("pavel", {}))
        havel = _parse_havel(body.get("havel", {}))
        rnd = play_round(cake, pavel, havel, cake_id=cid)
        return {
            "cake_id": rnd.cake_id,
            "pavel_point": [float(v) for v in rnd.pavel_point],
            "cut": _cut_payload(cake, rnd.havel_cut),
            "fraction": rnd.fraction,
            "bound": rnd.bound,
            "fraction_minus_bound": rnd.fraction - rnd.bound,
        }

    @app.get("/cakes/{cid}/render")
    async def get_render(cid: str, heatmap: int | None = None):
        cake, _ = cakes.get(cid)
        svg = render_svg(cake, heatmap=heatmap)
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/cakes/{cid}/document")
    async def get_document(cid: str):
        cake, name = cakes.get(cid)
        return Response(content=encode_cake(cake, name), media_type="application/json")

    _mount_ui(app)
    return app


def _ui_dir() -> str | None:
    override = os.environ.get("CAKECUT_UI")
    candidates = [override] if override else []
    here = os.path.dirname(os.path.abspath(__file__))
    candidates.append(os.path.normpath(os.path.join(here, "..", "..", "frontend")))
    candidates.append(os.path.join(os.getcwd(), "frontend"))
    for cand in candidates:
        if cand and os.path.isfile(os.path.join(cand, "index.html")):
            if os.path.isdir(os.path.join(cand, "dist")):
                return cand
    return None


def _mount_ui(app: FastAPI) -> None:
    """Serve the built browser playground at /ui when it exists."""
    ui = _ui_dir()
    if ui is None:
        return
    from fastapi.staticfiles import StaticFiles

    app.mount("/ui", StaticFiles(directory=ui, html=True), name="ui")


def serve(port: int | None = None, host: str = "127.0.0.1"):
    """Run the API with uvicorn; raises BindFailure if the port is taken."""
    import uvicorn

    if port is None:
        port = int(os.environ.get("CAKECUT_PORT", DEFAULT_PORT))
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise err.BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()
    uvicorn.run(create_app(), host=host, port=port, log_level="info")
