"""Command-line interface.

Subcommand groups: ``bounds`` (closed-form inequality evaluators), ``tri``
(one-vertex triangulations and flip graphs), ``surface`` (coned
realizations and sweepout profiles), ``iso`` (isoperimetric solver and
family scans).  Results are JSON on stdout; tables go to CSV via ``-o``,
optionally with a rendered PNG via ``--plot``; domain errors print a JSON
object to stderr and exit 1; usage errors exit 2.  Runs are deterministic
for a fixed seed.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds, coned_surface, isoperimetric, triangulation
from .errors import HypsweepError, UsageError

DEFAULT_THREADS = int(os.environ.get("HYPSWEEP_THREADS", "1"))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _plot_path(args, csv_path):
    if not getattr(args, "plot", False):
        return None
    if csv_path is None:
        raise UsageError("--plot needs a CSV output path (-o)")
    return os.path.splitext(csv_path)[0] + ".png"


# ------------------------------------------------------------------ bounds

def cmd_bounds_genus_from_radius(args):
    _emit(bounds.min_genus_from_radius(args.r, assume_prh=args.prh).to_json())


def cmd_bounds_radius_from_genus(args):
    value = bounds.max_radius_from_genus(args.g, assume_prh=args.prh)
    _emit({
        "input": {"g": args.g, "assume_prh": args.prh},
        "bound": value,
        "formula": "r <= arccosh(2g - 1)" if args.prh else "r <= arccosh(2g)",
    })


def cmd_bounds_volume(args):
    _emit(bounds.volume_upper_bound(args.flips).to_json())


# --------------------------------------------------------------------- tri

def cmd_tri_new(args):
    tri = triangulation.standard_genus_g(args.genus)
    payload = triangulation.triangulation_to_json(tri)
    with open(args.output, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")
    _emit({"written": args.output, "genus": tri.genus,
           "triangles": tri.n_triangles, "edges": tri.n_edges})


def cmd_tri_verify(args):
    try:
        tri = triangulation.triangulation_from_json(_load_json(args.file))
    except HypsweepError as err:
        _emit({"ok": False, "error": str(err)})
        raise
    report = tri.verify()
    _emit({
        "ok": report.ok,
        "genus": tri.genus,
        "triangles": tri.n_triangles,
        "edges": tri.n_edges,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                   for c in report.checks],
    })


def cmd_tri_flip(args):
    tri = triangulation.triangulation_from_json(_load_json(args.file))
    flipped = tri.flip(args.edge)
    payload = triangulation.triangulation_to_json(flipped)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(payload, fh)
            fh.write("\n")
    _emit(payload if not args.output else {"written": args.output})


def cmd_tri_distance(args):
    a = triangulation.triangulation_from_json(_load_json(args.a))
    b = triangulation.triangulation_from_json(_load_json(args.b))
    d = triangulation.flip_distance(a, b, mode=args.mode, budget=args.budget)
    _emit({"distance": d, "mode": args.mode})


def cmd_tri_ball(args):
    tri = triangulation.triangulation_from_json(_load_json(args.file))
    graph = triangulation.flip_ball(tri, args.depth, mode=args.mode,
                                    budget=args.budget)
    _emit(graph.to_json(), out=args.output)


# ----------------------------------------------------------------- surface

def cmd_surface_realize(args):
    surf = coned_surface.load_realization(args.file)
    _emit({
        "genus": surf.tri.genus,
        "triangles": surf.tri.n_triangles,
        "total_area": surf.total_area(),
        "vertex_angle_sum": surf.vertex_angle_sum(),
        "gauss_bonnet_residual": surf.gauss_bonnet_residual(),
        "max_relation_residual": float(np.max(surf.residuals)),
        "area_bound": math.pi * (4 * surf.tri.genus - 2),
    })


def cmd_surface_profile(args):
    surf = coned_surface.load_realization(args.realization)
    path_obj = _load_json(args.path)
    start, moves = triangulation.flip_path_from_json(path_obj)
    if start.canonical_code(labeled=True) != surf.tri.canonical_code(labeled=True):
        raise UsageError("flip path start does not match the realization's triangulation")
    profile = coned_surface.sweepout_profile(surf, moves, n_samples=args.samples)
    if args.output:
        profile.to_csv(args.output)
    png = _plot_path(args, args.output)
    if png:
        from . import plotting
        plotting.save_profile_plot(profile, png)
    min_theta = profile.interior_min_theta()
    summary = {
        "moves": moves,
        "samples_per_move": args.samples,
        "sup_area": profile.sup_area,
        "area_bound": math.pi * (4 * surf.tri.genus - 2),
        "min_inserted_angle_sum": None if math.isnan(min_theta) else min_theta,
        "max_triangles": int(np.max(profile.triangles)),
    }
    if args.output:
        summary["csv"] = args.output
    if png:
        summary["figure"] = png
    _emit(summary)


# --------------------------------------------------------------------- iso

def cmd_iso_solve(args):
    ball = isoperimetric.BallSpec(args.r)
    problem = isoperimetric.IsoperimetricProblem(ball, args.fraction)
    cfg = isoperimetric.OptimizerConfig(n_nodes=args.nodes, seed=args.seed)
    curve, area, report = isoperimetric.minimize(problem, cfg)
    out = {
        "r": args.r,
        "fraction": args.fraction,
        "area": area,
        "equatorial_disc_area": 2.0 * math.pi * (math.cosh(args.r) - 1.0),
        "max_abs_z": float(np.max(np.abs(curve.nodes[:, 1]))),
        "report": report.to_json(),
    }
    if args.output:
        isoperimetric.rows_to_csv(report.trace,
                                  ["iteration", "area", "volume_error", "grad_norm"],
                                  args.output)
        out["csv"] = args.output
    png = _plot_path(args, args.output)
    if png:
        from . import plotting
        plotting.save_curve_plot(curve, ball, png)
        trace_png = os.path.splitext(png)[0] + "_trace.png"
        plotting.save_trace_plot(report.trace, trace_png)
        out["figure"] = png
        out["trace_figure"] = trace_png
    _emit(out)


def cmd_iso_scan_planes(args):
    ball = isoperimetric.BallSpec(args.r)
    rows = isoperimetric.plane_family_scan(ball, args.n)
    header = ["d", "area", "volume"]
    _finish_scan(args, rows, header, "geodesic plane sections")


def cmd_iso_scan_caps(args):
    ball = isoperimetric.BallSpec(args.r)
    rows = isoperimetric.sphere_cap_family_scan(ball, args.n, threads=args.threads)
    header = ["d", "s", "area", "volume"]
    _finish_scan(args, rows, header, "half-volume sphere caps")


def _finish_scan(args, rows, header, title):
    if args.output:
        isoperimetric.rows_to_csv(rows, header, args.output)
    png = _plot_path(args, args.output)
    if png:
        from . import plotting
        plotting.save_scan_plot(rows, header, png, title)
    out = {"rows": [dict(zip(header, row)) for row in rows]}
    if args.output:
        out["csv"] = args.output
    if png:
        out["figure"] = png
    _emit(out)


# ------------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(
        prog="hypsweep",
        description="Hyperbolic sweepout surfaces, flip graphs, genus/volume "
                    "bounds and isoperimetric profiles in hyperbolic balls.",
    )
    sub = p.add_subparsers(dest="group", required=True)

    pb = sub.add_parser("bounds", help="closed-form inequality evaluators")
    bsub = pb.add_subparsers(dest="cmd", required=True)
    q = bsub.add_parser("genus-from-radius")
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--prh", action="store_true")
    q.set_defaults(func=cmd_bounds_genus_from_radius)
    q = bsub.add_parser("radius-from-genus")
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--prh", action="store_true")
    q.set_defaults(func=cmd_bounds_radius_from_genus)
    q = bsub.add_parser("volume")
    q.add_argument("--flips", type=int, required=True)
    q.set_defaults(func=cmd_bounds_volume)

    pt = sub.add_parser("tri", help="one-vertex triangulations and flip graphs")
    tsub = pt.add_subparsers(dest="cmd", required=True)
    q = tsub.add_parser("new")
    q.add_argument("--genus", type=int, required=True)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_tri_new)
    q = tsub.add_parser("verify")
    q.add_argument("file")
    q.set_defaults(func=cmd_tri_verify)
    q = tsub.add_parser("flip")
    q.add_argument("file")
    q.add_argument("--edge", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_tri_flip)
    q = tsub.add_parser("distance")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--mode", choices=["labeled", "iso"], default="labeled")
    q.add_argument("--budget", type=int, default=200_000)
    q.set_defaults(func=cmd_tri_distance)
    q = tsub.add_parser("ball")
    q.add_argument("file")
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--mode", choices=["labeled", "iso"], default="labeled")
    q.add_argument("--budget", type=int, default=200_000)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_tri_ball)

    ps = sub.add_parser("surface", help="coned realizations and sweepouts")
    ssub = ps.add_subparsers(dest="cmd", required=True)
    q = ssub.add_parser("realize")
    q.add_argument("file")
    q.set_defaults(func=cmd_surface_realize)
    q = ssub.add_parser("profile")
    q.add_argument("realization")
    q.add_argument("path")
    q.add_argument("--samples", type=int, default=64)
    q.add_argument("-o", "--output")
    q.add_argument("--plot", action="store_true")
    q.set_defaults(func=cmd_surface_profile)

    pi = sub.add_parser("iso", help="isoperimetric profiles in a ball")
    isub = pi.add_subparsers(dest="cmd", required=True)
    q = isub.add_parser("solve")
    q.add_argument("--r", type=float, required=True)
    q.add_argument("--fraction", type=float, default=0.5)
    q.add_argument("--nodes", type=int, default=64)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output")
    q.add_argument("--plot", action="store_true")
    q.set_defaults(func=cmd_iso_solve)
    q = isub.add_parser("scan-planes")
    q.add_argument("--r", type=float, required=True)
    q.add_argument("-n", type=int, default=32, dest="n")
    q.add_argument("-o", "--output")
    q.add_argument("--plot", action="store_true")
    q.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    q.set_defaults(func=cmd_iso_scan_planes)
    q = isub.add_parser("scan-caps")
    q.add_argument("--r", type=float, required=True)
    q.add_argument("-n", type=int, default=16, dest="n")
    q.add_argument("-o", "--output")
    q.add_argument("--plot", action="store_true")
    q.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    q.set_defaults(func=cmd_iso_scan_caps)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        args.func(args)
    except HypsweepError as err:
        print(json.dumps(err.payload()), file=sys.stderr)
        return 1
    except UsageError as err:
        print(str(err), file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(json.dumps({"error": "FileNotFound", "message": str(err)}),
              file=sys.stderr)
        return 1
    except json.JSONDecodeError as err:
        print(json.dumps({"error": "InvalidJSON", "message": str(err)}),
              file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
