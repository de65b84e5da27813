"""Command-line interface.

Exit codes: 0 success, 2 validation or verification failure,
3 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import errors as err
from .cake import validate_cake
from .depth import best_cut, depth_at, maximin_point
from .extremal import star_body, verify_star_depth, verify_star_structure
from .game import Centerpoint, Centroid, ExactMin, FixedPoint, ManualCut, SampledMin, play_round, run_experiment
from .geometry import normalize
from .render import render_svg
from .serialize import decode_cake, encode_cake

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3

MAXIMIN_TOL_BY_DIM = {1: 1e-3, 2: 1e-3, 3: 5e-3}
OVERLAP_LIMIT_MC = 3.0e-5  # 3 hits out of 1e5 samples


def _load(path: str):
    with open(path) as fh:
        return decode_cake(fh.read())


def _point(values):
    return np.asarray([float(v) for v in values])


def cmd_validate(args) -> int:
    cake = _load(args.cake)
    print(f"valid cake: dim={cake.dim} pieces={cake.piece_count} "
          f"measure={cake.total_measure!r} ({cake.validation.get('method')})")
    return EXIT_OK


def cmd_info(args) -> int:
    cake = _load(args.cake)
    lo, hi = cake.bbox
    print(json.dumps({
        "dim": cake.dim,
        "pieces": cake.piece_count,
        "measure": cake.total_measure,
        "bbox": [lo.tolist(), hi.tolist()],
        "centroid": cake.centroid().tolist(),
        "bound": 1.0 / (cake.dim + 1),
        "validation": cake.validation,
    }, indent=2))
    return EXIT_OK


def cmd_depth(args) -> int:
    cake = _load(args.cake)
    cert = depth_at(cake, _point(args.coords))
    print(json.dumps({
        "lower": cert.lower,
        "upper": cert.upper,
        "witness_direction": cert.witness.direction.tolist(),
        "witness_fraction": cert.witness.fraction,
        "method": cert.method.value,
        "bound": 1.0 / (cake.dim + 1),
    }))
    return EXIT_OK


def cmd_bestcut(args) -> int:
    cake = _load(args.cake)
    cut = best_cut(cake, _point(args.coords), args.mode)
    print(json.dumps({
        "fraction": cut.fraction,
        "direction": cut.direction.tolist(),
        "anchor": cut.anchor.tolist(),
        "bound": 1.0 / (cake.dim + 1),
    }))
    return EXIT_OK


def cmd_centerpoint(args) -> int:
    cake = _load(args.cake)
    result = maximin_point(cake, args.tol)
    print(json.dumps({
        "point": result.point.tolist(),
        "lower": result.lower,
        "upper": result.upper,
        "rounds": result.rounds,
        "in_cake": result.in_cake,
    }))
    return EXIT_OK


def cmd_star(args) -> int:
    star = star_body(args.n)
    text = encode_cake(star.cake, name=f"star{args.n}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    n = args.n
    bound = 1.0 / (n + 1)
    star = star_body(n)
    structure = verify_star_structure(star)
    mm_tol = MAXIMIN_TOL_BY_DIM.get(n, 1e-3)
    depth_report = verify_star_depth(
        star, barycentric_samples=args.samples, sphere_samples=args.samples,
        seed=0, maximin_tol=mm_tol,
    )

    overlap_limit = 0.0 if n <= 2 else OVERLAP_LIMIT_MC
    checks = [
        ("measure ratio = n+1 (rel 1e-12)",
         structure.measure_ratio,
         abs(structure.measure_ratio - (n + 1)) <= 1e-12 * (n + 1)),
        (f"pairwise overlap <= {overlap_limit!r}",
         structure.max_pairwise_overlap,
         structure.max_pairwise_overlap <= overlap_limit),
        ("origin inside every piece",
         structure.origin_in_all,
         structure.origin_in_all),
        ("min tail over simplex directions >= bound - 1e-9",
         depth_report.min_tail_over_simplex,
         depth_report.min_tail_over_simplex >= bound - 1e-9),
        ("sphere min tail within [bound - 1e-9, bound + 1e-3]",
         depth_report.sphere_min_tail,
         bound - 1e-9 <= depth_report.sphere_min_tail <= bound + 1e-3),
    ]
    if depth_report.maximin is not None:
        mm = depth_report.maximin
        checks.append((
            f"maximin bracket within bound +- {mm_tol!r}",
            (mm.lower, mm.upper),
            bound - mm_tol <= mm.lower and mm.upper <= bound + mm_tol,
        ))

    print(f"theorem check for n={n} (bound 1/(n+1) = {bound!r})")
    ok = True
    for name, value, passed in checks:
        ok &= passed
        print(f"  [{'PASS' if passed else 'FAIL'}] {name}: {value!r}")
    print("RESULT:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VALIDATION


def _parse_pavel(text: str):
    if text == "centroid":
        return Centroid()
    if text == "centerpoint":
        return Centerpoint()
    if text.startswith("centerpoint:"):
        return Centerpoint(tol=float(text.split(":", 1)[1]))
    return FixedPoint(_point(text.split(",")))


def _parse_havel(text: str):
    if text == "exact":
        return ExactMin()
    if text.startswith("sampled"):
        count = int(text.split(":", 1)[1]) if ":" in text else 256
        return SampledMin(count)
    if text.startswith("manual:"):
        return ManualCut(_point(text.split(":", 1)[1].split(",")))
    raise ValueError(f"unknown havel strategy {text!r}")


def cmd_game(args) -> int:
    cakes = [_load(path) for path in args.cakes]
    pavel = _parse_pavel(args.pavel)
    havel = _parse_havel(args.havel)
    if len(cakes) == 1 and not args.csv:
        rnd = play_round(cakes[0], pavel, havel, cake_id=args.cakes[0])
        print(json.dumps({
            "pavel_point": rnd.pavel_point.tolist(),
            "direction": rnd.havel_cut.direction.tolist(),
            "fraction": rnd.fraction,
            "bound": rnd.bound,
            "fraction_minus_bound": rnd.fraction - rnd.bound,
        }))
        return EXIT_OK
    summary = run_experiment(cakes, pavel, havel, out=args.csv, ids=args.cakes)
    if not args.csv:
        sys.stdout.write(summary.csv_text)
    print(f"min_fraction: {summary.min_fraction!r}")
    return EXIT_OK


def cmd_render(args) -> int:
    cake = _load(args.cake)
    cut = None
    if args.cut:
        values = [float(v) for v in args.cut.split(",")]
        if len(values) == cake.dim:
            cut = best_cut(cake, _point(values), "min")
        elif len(values) == 2 * cake.dim:
            point = _point(values[: cake.dim])
            direction = normalize(values[cake.dim:])
            from .cake import tail
            frac = tail(cake, direction, float(direction @ point))
            from .depth import Cut
            cut = Cut(point, direction, frac)
        else:
            raise ValueError("--cut needs X,Y (best cut) or X,Y,DX,DY (manual)")
    svg = render_svg(cake, cut=cut, heatmap=args.heatmap)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(svg)
    else:
        print(svg)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve
    serve(port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cakecut",
        description="halfspace-depth engine for cake-division games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a cake document")
    p.add_argument("cake")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("info", help="print cake facts")
    p.add_argument("cake")
    p.set_defaults(fn=cmd_info)

    p = sub.add_parser("depth", help="halfspace depth of a point")
    p.add_argument("cake")
    p.add_argument("coords", nargs="+")
    p.set_defaults(fn=cmd_depth)

    p = sub.add_parser("bestcut", help="best response cut at a point")
    p.add_argument("cake")
    p.add_argument("coords", nargs="+")
    p.add_argument("--mode", choices=["min", "max"], default="min")
    p.set_defaults(fn=cmd_bestcut)

    p = sub.add_parser("centerpoint", help="maximin point with bracket")
    p.add_argument("cake")
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(fn=cmd_centerpoint)

    p = sub.add_parser("star", help="emit the extremal star cake document")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_star)

    p = sub.add_parser("verify-theorem", help="check the 1/(n+1) claims for the star")
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, default=4096)
    p.set_defaults(fn=cmd_verify_theorem)

    p = sub.add_parser("game", help="play rounds; CSV table for suites")
    p.add_argument("cakes", nargs="+")
    p.add_argument("--pavel", default="centerpoint")
    p.add_argument("--havel", default="exact")
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_game)

    p = sub.add_parser("render", help="SVG rendering (2D)")
    p.add_argument("cake")
    p.add_argument("-o", "--output")
    p.add_argument("--heatmap", type=int)
    p.add_argument("--cut")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except err.NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except err.CakecutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
