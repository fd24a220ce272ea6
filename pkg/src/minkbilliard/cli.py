"""Command-line front end.

Subcommands: xi, simulate, hanner, verify, plot.  Exit codes: 0 success,
1 battery/verification failure, 2 usage or parse error, 3 numerical flag
(optimizer non-convergence).  The environment variable MINKBILLIARD_MODE
(rational|float) overrides the arithmetic mode; all randomness derives from
the --seed value through a counter-based generator.  Reports are
byte-identical for identical inputs and seed (timings only with --timings).
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .bodies import ConvexBody, body_from_json, body_to_json
from .dynamics import (phase_point_at, random_phase_point, record_from_json,
                       record_to_json, simulate)
from .errors import GeometryError
from .hanner import HannerTree, verify_hanner
from .rand import RNG_NAME, make_rng
from .shortest import XiOptions, xi
from .svgplot import trajectory_svg
from .verify import BATTERIES, run_battery


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise SystemExit(_usage_error(f"cannot read {path}: {e}"))


def _usage_error(msg):
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _load_body(path, exact=None):
    obj = _load_json(path)
    try:
        return body_from_json(obj, exact=exact)
    except (GeometryError, KeyError, ValueError, TypeError) as e:
        raise SystemExit(_usage_error(f"bad body file {path}: {e}"))


def _mode(args):
    return os.environ.get("MINKBILLIARD_MODE") or getattr(args, "mode", None)


def _emit(report, args):
    if getattr(args, "timings", False):
        report["timings"] = {"wall_s": round(time.monotonic() - args._t0, 3)}
    print(json.dumps(report, sort_keys=True, indent=2, default=str))


def _parse_point(text):
    try:
        return tuple(Fraction(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise SystemExit(_usage_error(f"bad point {text!r}"))


def cmd_xi(args):
    K = _load_body(args.body)
    T = _load_body(args.norm)
    opts = XiOptions(starts=args.starts, seed=args.seed)
    res = xi(K, T, opts)
    out = {"xi": float(res.value), "m": res.m,
           "polyline": [[float(c) for c in p] for p in res.minimizer.points],
           "alpha": float(res.alpha_at_min)}
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0 if res.converged else 3


def cmd_simulate(args):
    mode = _mode(args)
    exact = None if mode is None else (mode == "rational")
    K = _load_body(args.body, exact=exact)
    T = _load_body(args.norm, exact=exact)
    try:
        if args.q and args.p:
            start = phase_point_at(_parse_point(args.q), _parse_point(args.p),
                                   K, T)
        else:
            rng = make_rng(args.seed)
            start, _ = random_phase_point(K, T, rng, exact=exact)
        rec = simulate(start, K, T, max_bounces=args.max_bounces)
    except GeometryError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    payload = record_to_json(rec)
    if args.output:
        with open(args.output, "w") as f:
            json.dump(payload, f, sort_keys=True, indent=2)
    report = {"command": "simulate", "seed": args.seed, "rng": RNG_NAME,
              "closed": rec.closed, "period": rec.period,
              "length": float(rec.length), "simple": rec.simple,
              "exact": rec.exact}
    _emit(report, args)
    return 0


def cmd_hanner(args):
    if os.path.exists(args.tree):
        tree_obj = _load_json(args.tree)
    else:
        try:
            tree_obj = json.loads(args.tree)
        except json.JSONDecodeError:
            return _usage_error(f"--tree {args.tree!r} is neither a file "
                                f"nor inline JSON")
    try:
        tree = HannerTree.from_json(tree_obj)
    except (KeyError, ValueError) as e:
        return _usage_error(f"bad tree: {e}")
    rep = verify_hanner(tree, samples=args.samples, seed=args.seed)
    report = {"command": "hanner", "seed": args.seed, "rng": RNG_NAME,
              "report": rep.to_json(), "passed": rep.all_ok}
    _emit(report, args)
    return 0 if rep.all_ok else 1


def cmd_verify(args):
    if args.battery not in BATTERIES:
        return _usage_error(
            f"unknown battery {args.battery!r}; choose from "
            f"{', '.join(sorted(BATTERIES))}")
    report = run_battery(args.battery, seed=args.seed, samples=args.samples)
    report = {"command": "verify", **report}
    _emit(report, args)
    return 0 if report["passed"] else 1


def cmd_plot(args):
    rec = record_from_json(_load_json(args.trajectory))
    K = _load_body(args.body)
    T = _load_body(args.norm)
    svg = trajectory_svg(K, T, rec)
    with open(args.output, "w") as f:
        f.write(svg)
    print(json.dumps({"command": "plot", "output": args.output,
                      "bounces": len(rec.bounces)}, sort_keys=True, indent=2))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="minkbilliard",
        description="Shortest closed billiard trajectories and polytope "
                    "billiards under flat Finsler norms.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings in the report")

    p = sub.add_parser("xi", help="shortest closed trajectory length")
    p.add_argument("--body", required=True)
    p.add_argument("--norm", required=True)
    p.add_argument("--starts", type=int, default=64)
    common(p)
    p.set_defaults(fn=cmd_xi)

    p = sub.add_parser("simulate", help="run the billiard map")
    p.add_argument("--body", required=True)
    p.add_argument("--norm", required=True)
    p.add_argument("--q", help="start coordinate, e.g. '1,-1/5'")
    p.add_argument("--p", help="start momentum, e.g. '1/2,1/2'")
    p.add_argument("--max-bounces", type=int, default=None)
    p.add_argument("--mode", choices=["rational", "float"])
    p.add_argument("-o", "--output", help="write the trajectory JSON here")
    common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("hanner", help="verify Hanner trajectory laws")
    p.add_argument("--tree", required=True,
                   help="tree JSON file or inline JSON")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mode", choices=["rational", "float"])
    common(p)
    p.set_defaults(fn=cmd_hanner)

    p = sub.add_parser("verify", help="run a named inequality battery")
    p.add_argument("battery")
    p.add_argument("--samples", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("plot", help="render a trajectory to SVG")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--body", required=True)
    p.add_argument("--norm", required=True)
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(fn=cmd_plot)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    args._t0 = time.monotonic()
    try:
        code = args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    return code


if __name__ == "__main__":
    sys.exit(main())
