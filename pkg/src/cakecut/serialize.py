"""Cake document format: JSON with fields ``dim``, ``pieces``, optional ``name``.

``pieces`` is an array of simplices, each an array of n+1 vertex arrays
of n numbers. Encoding uses shortest round-trip decimals, so
decode(encode(cake)) reproduces every coordinate bit-exactly.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .cake import Cake, validate_cake
from .errors import ParseError


def encode_cake(cake: Cake, name: str | None = None) -> str:
    doc: dict = {
        "dim": cake.dim,
        "pieces": [p.vertices.tolist() for p in cake.pieces],
    }
    if name is not None:
        doc["name"] = name
    return json.dumps(doc, indent=2)


def parse_document(text: str) -> dict:
    """Parse and schema-check a cake document without validating geometry."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError(f"top level must be an object, got {type(doc).__name__}")
    if "dim" not in doc or "pieces" not in doc:
        missing = {"dim", "pieces"} - set(doc)
        raise ParseError(f"missing required field(s): {sorted(missing)}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"dim must be a positive integer, got {dim!r}")
    pieces = doc["pieces"]
    if not isinstance(pieces, list) or not pieces:
        raise ParseError("pieces must be a nonempty array")
    for i, piece in enumerate(pieces):
        if not isinstance(piece, list) or len(piece) != dim + 1:
            raise ParseError(
                f"pieces[{i}] must be an array of {dim + 1} vertices"
            )
        for j, vertex in enumerate(piece):
            if not isinstance(vertex, list) or len(vertex) != dim:
                raise ParseError(
                    f"pieces[{i}][{j}] must be an array of {dim} numbers"
                )
            for k, coord in enumerate(vertex):
                if isinstance(coord, bool) or not isinstance(coord, (int, float)):
                    raise ParseError(
                        f"pieces[{i}][{j}][{k}] must be a number, got {coord!r}"
                    )
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError(f"name must be a string, got {name!r}")
    return doc


def decode_cake(text: str, seed: int = 0) -> Cake:
    """Parse a document and run full cake validation on it."""
    doc = parse_document(text)
    pieces = [np.asarray(piece, dtype=float) for piece in doc["pieces"]]
    return validate_cake(pieces, seed=seed)


def cake_id(cake: Cake) -> str:
    """Content hash of the canonical encoding (stable store id)."""
    canon = json.dumps(
        {"dim": cake.dim, "pieces": [p.vertices.tolist() for p in cake.pieces]},
        separators=(",", ":"),
    )
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
