"""Command-line front end: orbits, partitions, return maps, renormalization,
and the invariant suites, exported as CSV/JSON for external plotting.

Subcommands: orbit | partition | return | renorm | verify.  Identical
config + seed always produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

from mpmath import mp

from .cf import SemiIndex
from .cones import (
    INTERNAL_GUARD_BITS,
    Point,
    TceParams,
    cone_index,
    exchange,
    make_point,
    step,
)
from .errors import AmbiguousBoundary, NotInDomain
from .regions import clip_polygon, golden_x, golden_y, smn_region
from .renorm import renorm_tower, verify_conjugacy
from .returns import (
    closed_return_map,
    closed_return_time,
    first_return,
    sample_atom_preimage,
    threshold_index,
)
from . import verify as verify_mod

DEFAULT_CONFIG = {
    "alpha": ["1", "0.5", "pi-2.5", "1"],
    "tau": [2, 1],
    "lambda": "phi",
    "eta": {"p": 1, "q": 1},
}


def load_config(path):
    if path is None:
        return dict(DEFAULT_CONFIG)
    with open(path) as fh:
        return json.load(fh)


def build_params(config, precision) -> TceParams:
    return TceParams(
        alpha=config["alpha"],
        tau=config["tau"],
        lam=config["lambda"],
        eta=config["eta"],
        precision_bits=precision,
    )


def sig_digits(precision_bits: int) -> int:
    return max(8, math.ceil(precision_bits * 0.3))


def fmt(x, precision_bits: int) -> str:
    return mp.nstr(mp.mpf(x), sig_digits(precision_bits), strip_zeros=True)


def _write(out_path, text):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- orbit ---------------------------------------------------------------------


def cmd_orbit(args) -> int:
    config = load_config(args.config)
    params = build_params(config, args.precision)
    rng = random.Random(args.seed)
    starts = None
    if config.get("points"):
        starts = [make_point(re_s, im_s, args.precision)
                  for re_s, im_s in config["points"]]
    else:
        box = config.get("box", [-1.0, float(params.lam_f), 0.0, 1.0])
        if not (box[1] > box[0] and box[3] > box[2]):
            raise ValueError("sampling box must have positive area")
    if args.points < 1 or args.steps < 1:
        raise ValueError("need at least one point and one step")
    rows = ["point_id,t,re,im"]
    skipped_points = 0
    with mp.workprec(args.precision + INTERNAL_GUARD_BITS):
        n_points = len(starts) if starts is not None else args.points
        for pid in range(n_points):
            if starts is not None:
                z = starts[pid]
            else:
                x = rng.uniform(box[0], box[1])
                y = rng.uniform(box[2], box[3])
                z = make_point(x, y, args.precision)
            trail = []
            try:
                for t in range(args.skip + args.steps):
                    z = step(params, z, strict=args.strict_boundaries)
                    if t >= args.skip:
                        trail.append((t, z))
            except AmbiguousBoundary:
                skipped_points += 1
                continue
            for t, w in trail:
                rows.append("%d,%d,%s,%s" % (pid, t, fmt(w.re, args.precision),
                                             fmt(w.im, args.precision)))
    _write(args.out, "\n".join(rows) + "\n")
    if skipped_points:
        print("skipped %d precision-ambiguous points" % skipped_points, file=sys.stderr)
    return 0


# -- partition -----------------------------------------------------------------


def _preimage_pieces(params, region, box):
    """E-preimage polygons of a region, one per middle cone it meets."""
    verts = region.polygon(box)
    pieces = []
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        for j in range(1, params.d + 1):
            c, s = params._rot[j - 1]
            poly = [Point(v.re * c + v.im * s, -v.re * s + v.im * c) for v in verts]
            lo, hi = params.bounds[j], params.bounds[j + 1]
            ulo = (mp.cos(lo), mp.sin(lo))
            uhi = (mp.cos(hi), mp.sin(hi))
            poly = clip_polygon(poly, lambda z: ulo[0] * z.im - ulo[1] * z.re)
            if poly:
                poly = clip_polygon(poly, lambda z: uhi[1] * z.re - uhi[0] * z.im)
            if poly:
                pieces.append({"cone": j, "vertices": [[float(v.re), float(v.im)] for v in poly]})
    return pieces


def cmd_partition(args) -> int:
    config = load_config(args.config)
    params = build_params(config, args.precision)
    golden = params.is_golden()
    box = config.get("box")
    atoms = []
    preimages = []
    cf = params.lam
    regions = []
    if golden:
        regions.append(golden_y(params))
        regions.append(golden_x(params))
    for w in range(args.max_w + 1):
        regions.append(smn_region(params, cf.w_inverse(w)))
    for region in regions:
        atoms.append(region.to_json(box))
        for piece in _preimage_pieces(params, region, box):
            entry = dict(piece)
            entry["kind"] = region.kind
            if region.index is not None:
                entry["index"] = list(region.index)
            preimages.append(entry)
    doc = {
        "golden": golden,
        "max_w": args.max_w,
        "threshold": list(threshold_index(params)),
        "atoms": atoms,
        "preimages": preimages,
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


# -- return map ----------------------------------------------------------------


def cmd_return(args) -> int:
    config = load_config(args.config)
    params = build_params(config, args.precision)
    rng = random.Random(args.seed)
    prec = args.precision
    points = []
    if args.atom:
        m, n = (int(v) for v in args.atom.split(","))
        region = smn_region(params, SemiIndex(m, n))
        for _ in range(args.samples):
            z, _ = sample_atom_preimage(params, region, rng)
            points.append(z)
    else:
        for re_s, im_s in config.get("points", []):
            points.append(make_point(re_s, im_s, prec))
    rows = ["re,im,h_closed,h_iter,re_out_closed,im_out_closed,re_out_iter,im_out_iter,agree"]
    with mp.workprec(prec + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (16 - prec)
        for z in points:
            base = [fmt(z.re, prec), fmt(z.im, prec)]
            try:
                closed = closed_return_map(params, z)
                ret = first_return(params, z)
            except (NotInDomain, AmbiguousBoundary) as exc:
                rows.append(",".join(base + ["", "", "", "", "", "", "error:%s" % type(exc).__name__]))
                continue
            agree = (closed.h == ret.h and
                     mp.hypot(closed.landed.re - ret.landed.re,
                              closed.landed.im - ret.landed.im) < tol)
            rows.append(",".join(base + [
                str(closed.h), str(ret.h),
                fmt(closed.landed.re, prec), fmt(closed.landed.im, prec),
                fmt(ret.landed.re, prec), fmt(ret.landed.im, prec),
                "1" if agree else "0",
            ]))
    _write(args.out, "\n".join(rows) + "\n")
    return 0


# -- renorm --------------------------------------------------------------------


def cmd_renorm(args) -> int:
    config = load_config(args.config)
    params = build_params(config, args.precision)
    steps = renorm_tower(params, args.depth, partial=True)
    entries = []
    all_pass = True
    cumulative = mp.mpf(1)
    with mp.workprec(args.precision + INTERNAL_GUARD_BITS):
        for k, step_ in enumerate(steps):
            rep = verify_conjugacy(step_, samples=args.samples, seed=args.seed + k)
            all_pass = all_pass and rep["pass"]
            cumulative *= step_.scale_float()
            entry = step_.to_json()
            entry["step"] = k
            entry["scale_float"] = fmt(step_.scale_float(), args.precision)
            entry["cumulative_scale"] = fmt(cumulative, args.precision)
            entry["conjugacy"] = rep
            entries.append(entry)
    doc = {
        "requested_depth": args.depth,
        "completed_depth": len(steps),
        "pass": bool(all_pass and len(steps) == args.depth),
        "steps": entries,
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0 if doc["pass"] else 1


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = verify_mod.run_all(seed=args.seed, scale=args.scale, precision=args.precision)
    _write(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    if args.out:
        for c in report["checks"]:
            print("%-40s %s" % (c["name"], "PASS" if c["pass"] else "FAIL"))
    return 0 if report["pass"] else 1


# -- entry point -----------------------------------------------------------------


def _add_common(parser, suppress):
    """Shared flags, accepted both before and after the subcommand.

    The subcommand copies use SUPPRESS defaults so they never clobber values
    already parsed by the top-level parser.
    """
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=d(None),
                        help="JSON parameter file (default: golden fixture)")
    parser.add_argument("--precision", type=int, default=d(256),
                        help="working precision in bits")
    parser.add_argument("--seed", type=int, default=d(0), help="sampling seed")
    parser.add_argument("--out", default=d(None), help="output path (default: stdout)")


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)

    parser = argparse.ArgumentParser(prog="tce", description=__doc__)
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p_orbit = sub.add_parser("orbit", help="forward-orbit clouds as CSV", parents=[common])
    p_orbit.add_argument("--points", type=int, default=100)
    p_orbit.add_argument("--steps", type=int, default=500)
    p_orbit.add_argument("--skip", type=int, default=0, help="transient steps to drop")
    p_orbit.add_argument("--strict-boundaries", action="store_true")
    p_orbit.set_defaults(func=cmd_orbit)

    p_part = sub.add_parser("partition", help="return-map atoms as JSON polygons",
                            parents=[common])
    p_part.add_argument("--max-w", type=int, default=6)
    p_part.set_defaults(func=cmd_partition)

    p_ret = sub.add_parser("return", help="closed-form vs iterated first returns as CSV",
                           parents=[common])
    p_ret.add_argument("--atom", help="sample interior of atom 'm,n' instead of config points")
    p_ret.add_argument("--samples", type=int, default=20)
    p_ret.set_defaults(func=cmd_return)

    p_ren = sub.add_parser("renorm", help="renormalization tower + conjugacy report as JSON",
                           parents=[common])
    p_ren.add_argument("--depth", type=int, default=3)
    p_ren.add_argument("--samples", type=int, default=40)
    p_ren.set_defaults(func=cmd_renorm)

    p_ver = sub.add_parser("verify", help="run all invariant suites", parents=[common])
    p_ver.add_argument("--scale", type=float, default=1.0, help="sample-count multiplier")
    p_ver.set_defaults(func=cmd_verify)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        params_probe = load_config(args.config)
        if not isinstance(params_probe, dict):
            raise ValueError("config must be a JSON object")
    except (OSError, ValueError, KeyError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
