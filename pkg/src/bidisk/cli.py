"""Command-line front end.

Every run emits one JSON report carrying the tool version, the argv it can
be reproduced from, the full effective configuration (seed, tolerances,
sizes) and the results.  Reports are byte-reproducible except for the
``wall_time`` field.

Exit codes: 0 = ran, all asserted gaps within tolerance; 2 = ran and a
violation or exceedance was found (a valid scientific result, not an
error); 1 = usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import __version__, _defaults, classes, funcspace, geometry, grammar, hardy, psd, rng

#: Lets complex literals like -0.2i or -0.5,0.3i pass as argument values.
_NEGATIVE_LITERAL = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i?(,.*)?$")

OK = 0
USAGE_ERROR = 1
VIOLATION_FOUND = 2


def _report(command: str, argv: list[str], config: dict, results: dict,
            started: float) -> dict:
    return {
        "schema_version": _defaults.SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "argv": argv,
        "config": config,
        "results": results,
        "eigen_backend": psd.backend_name(),
        "wall_time": time.perf_counter() - started,
    }


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _points_from_args(args) -> list:
    points = []
    if args.points:
        points.extend(grammar.parse_point(p) for p in args.points)
    if getattr(args, "points_file", None):
        with open(args.points_file, "r", encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                vals = [float(x) for x in line.split(",")]
                if len(vals) != 4:
                    raise grammar.GrammarError(
                        f"point lines carry re1,im1,re2,im2; got {line!r}")
                points.append(grammar.parse_point(
                    f"{vals[0]}+{vals[1]}i,{vals[2]}+{vals[3]}i"))
    return points


def cmd_distance(args, argv) -> int:
    started = time.perf_counter()
    z = grammar.parse_point(args.z)
    w = grammar.parse_point(args.w)
    d_prod = geometry.dist(z, w)
    d_direct = geometry.dist_direct(z, w)
    results = {
        "d": d_prod,
        "d_product_form": d_prod,
        "d_radical_form": d_direct,
        "route_difference": abs(d_prod - d_direct),
    }
    _emit(_report("distance", argv, {}, results, started), args.out)
    return OK


def cmd_class_check(args, argv) -> int:
    started = time.perf_counter()
    triplet = grammar.parse_triplet(args.triplet)
    config = {
        "tol": args.tol,
        "seed": args.seed,
        "trials": args.trials,
        "n_points": args.random,
        "boundary_bias": args.boundary_bias,
    }
    points = _points_from_args(args)
    if points:
        cert = classes.membership_check(triplet, args.cls, points, tol=args.tol)
        config["mode"] = "membership_check"
    else:
        cfg = classes.SearchConfig(seed=args.seed, trials=args.trials,
                                   n_points=args.random,
                                   boundary_bias=args.boundary_bias,
                                   tol=args.tol)
        cert = classes.violation_search(triplet, args.cls, cfg)
        config["mode"] = "violation_search"
    _emit(_report("class-check", argv, config,
                  {"certificate": cert.to_json_dict()}, started), args.out)
    return VIOLATION_FOUND if cert.verdict == classes.VIOLATION else OK


def cmd_metric_test(args, argv) -> int:
    started = time.perf_counter()
    config = {"trials": args.trials, "seed": args.seed,
              "automorphisms": args.automorphisms}
    sweep = geometry.metric_sweep(args.trials, args.seed, args.automorphisms)
    thresholds = {
        "symmetry_gap": 1e-14,
        "triangle_gap": 1e-12,
        "identity_gap": 1e-13,
        "invariance_gap": 1e-12,
    }
    results = sweep.to_json_dict()
    results["thresholds"] = thresholds
    exceeded = [k for k, bound in thresholds.items() if results[k] > bound]
    results["exceeded"] = exceeded
    _emit(_report("metric-test", argv, config, results, started), args.out)
    return VIOLATION_FOUND if exceeded else OK


def cmd_schwarz_pick(args, argv) -> int:
    started = time.perf_counter()
    psi = grammar.parse_selfmap(args.map)
    config = {
        "mode": args.mode,
        "pairs": args.pairs,
        "seed": args.seed,
        "boundary_bias": args.boundary_bias,
        "origin": args.origin,
        "factor": args.factor,
        "tol": args.tol,
        "N": args.N,
    }
    results: dict = {}
    violated = False

    sweep = geometry.schwarz_pick_sweep(psi, args.mode, args.pairs, args.seed,
                                        boundary_bias=args.boundary_bias,
                                        collect_rows=bool(args.csv))
    results["sweep"] = sweep.to_json_dict()
    violated |= sweep.max_gap > 1e-12
    if args.csv:
        geometry.write_csv(args.csv, sweep.rows)
        results["csv"] = args.csv
    if args.mode == "q_class":
        evidence = geometry.q_class_evidence(psi, seed=args.seed)
        results["q_class_evidence"] = evidence.to_json_dict()

    if args.origin:
        triplet = funcspace.product_triplet(psi)
        if args.factor == "2":
            factor = 2.0
        else:
            factor = hardy.op_norm(hardy.defect_op(triplet, args.N))
        gen = rng.substream(args.seed, 1)
        pts = rng.draw_point_set(gen, min(args.pairs, 1000), args.boundary_bias)
        diag_gap = classes.schwarz_diag_check(triplet, pts, factor)
        results["origin_check"] = {
            "factor_mode": args.factor,
            "factor": factor,
            "points": len(pts),
            "max_violation": diag_gap,
        }
        violated |= diag_gap > 1e-12
    _emit(_report("schwarz-pick", argv, config, results, started), args.out)
    return VIOLATION_FOUND if violated else OK


def cmd_core_operator(args, argv) -> int:
    started = time.perf_counter()
    zeros1 = tuple(grammar.as_constant(grammar.parse_expression(s)) for s in args.q1)
    zeros2 = tuple(grammar.as_constant(grammar.parse_expression(s)) for s in args.q2)
    if any(z is None for z in zeros1 + zeros2):
        raise grammar.GrammarError("Blaschke zeros must be complex constants")
    spec = hardy.SubmoduleSpec(zeros1=zeros1, zeros2=zeros2)
    if args.N > _defaults.MAX_TRUNC_DEGREE:
        raise grammar.GrammarError(
            f"N={args.N} exceeds the cap {_defaults.MAX_TRUNC_DEGREE}")
    config = {"q1_zeros": [[z.real, z.imag] for z in zeros1],
              "q2_zeros": [[z.real, z.imag] for z in zeros2],
              "N": args.N, "seed": args.seed,
              "lambda": args.kernel_point, "identity_samples": args.identity_samples}
    agreement = hardy.interior_agreement(spec, args.N)
    lam = grammar.parse_point(args.kernel_point)
    gen = rng.substream(args.seed, 0)
    samples = hardy.ball_sample(gen, args.identity_samples, radius=0.5)
    identity_dev = hardy.kernel_identity_check(spec, lam, args.N, samples)
    results = {
        "interior_agreement_norm": agreement,
        "kernel_identity_max_deviation": identity_dev,
        "agreement_threshold": args.agree_tol,
        "kernel_identity_threshold": args.identity_tol,
    }
    if args.export:
        with open(args.export, "w", encoding="ascii") as fh:
            hardy.export_matrix(hardy.rank3_core(spec, args.N), fh)
        results["exported"] = args.export
    _emit(_report("core-operator", argv, config, results, started), args.out)
    exceeded = agreement > args.agree_tol or identity_dev > args.identity_tol
    return VIOLATION_FOUND if exceeded else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidisk",
        description="Indefinite pseudo-hyperbolic geometry and Schur-class "
                    "certification on the bidisk")
    parser._negative_number_matcher = _NEGATIVE_LITERAL
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p._negative_number_matcher = _NEGATIVE_LITERAL
        p.add_argument("--seed", type=int, default=_defaults.DEFAULT_SEED,
                       help="64-bit master seed")
        p.add_argument("--tol", type=float, default=_defaults.TOL,
                       help="PSD verdict tolerance")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("distance", help="indefinite distance between two points")
    p.add_argument("z", help="first point, e.g. 0.5,0 or 0.3+0.1i,0.2")
    p.add_argument("w", help="second point")
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("class-check", help="membership evidence / violation search")
    p.add_argument("triplet", help='triplet text, e.g. "(z1, z2, z1*z2)"')
    p.add_argument("cls", choices=["P", "Q", "S"], help="class to test")
    p.add_argument("--points", nargs="+", help="explicit points z1,z2 (membership check)")
    p.add_argument("--points-file", help="CSV file of points: re1,im1,re2,im2 per line")
    p.add_argument("--random", type=int, default=_defaults.RANDOM_POINTS,
                   help="points per random set (violation search)")
    p.add_argument("--trials", type=int, default=_defaults.TRIALS)
    p.add_argument("--boundary-bias", type=float, default=_defaults.BOUNDARY_BIAS)
    common(p)
    p.set_defaults(func=cmd_class_check)

    p = sub.add_parser("metric-test", help="metric axiom sweeps for the distance")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--automorphisms", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_metric_test)

    p = sub.add_parser("schwarz-pick", help="contraction sweeps for a self-map")
    p.add_argument("map", help='self-map text, e.g. "(z2, z1)"')
    p.add_argument("--mode", choices=["general", "q_class"], default="general")
    p.add_argument("--pairs", type=int, default=_defaults.PAIRS)
    p.add_argument("--boundary-bias", type=float, default=_defaults.BOUNDARY_BIAS)
    p.add_argument("--origin", action="store_true",
                   help="also run the two-sided diagonal bound at the origin")
    p.add_argument("--factor", choices=["2", "truncated"], default=_defaults.FACTOR,
                   help="diagonal bound factor: the proved ceiling 2 or the "
                        "truncated operator-norm estimate")
    p.add_argument("--N", type=int, default=8, help="truncation degree for --factor truncated")
    p.add_argument("--csv", help="dump sweep rows (z, w, d, gap) to this CSV path")
    common(p)
    p.set_defaults(func=cmd_schwarz_pick)

    p = sub.add_parser("core-operator", help="submodule core-operator identities")
    p.add_argument("--q1", nargs="*", default=[], help="zeros of q1 (complex literals)")
    p.add_argument("--q2", nargs="*", default=[], help="zeros of q2 (complex literals)")
    p.add_argument("--N", type=int, default=_defaults.TRUNC_DEGREE)
    p.add_argument("--kernel-point", default="0.3,0.2",
                   help="the kernel anchor point (|coordinates| <= 0.5)")
    p.add_argument("--identity-samples", type=int, default=25)
    p.add_argument("--agree-tol", type=float, default=1e-8)
    p.add_argument("--identity-tol", type=float, default=1e-4)
    p.add_argument("--export", help="export the rank-3 core matrix to this path")
    common(p)
    p.set_defaults(func=cmd_core_operator)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else OK
    try:
        return args.func(args, argv)
    except (grammar.GrammarError, funcspace.CertificationError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
