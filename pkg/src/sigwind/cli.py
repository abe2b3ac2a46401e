"""Command-line interface: ``sigwind <group> <command> [options]``.

Results go to stdout (or ``--out``) as JSON with a top-level ``"schema": 1``
and floats written with 17 significant digits. A run manifest (argv,
parameters, seed, version, wall time, sha256 of the output bytes) goes to
``--manifest`` if given, else to stderr, so stdout stays byte-reproducible.

Exit codes: 0 success, 1 verification failed, 2 usage, parse or domain error.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .exceptions import SigwindError

SCHEMA = 1


def _encode(obj):
    # json.dumps with floats at 17 significant digits
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(payload):
    return _encode({"schema": SCHEMA, **payload}) + "\n"


def _threads(args):
    env = os.environ.get("SIGWIND_THREADS")
    if env:
        return max(1, int(env))
    return args.threads or os.cpu_count() or 1


# -- command handlers: each returns (payload dict, ok flag) ---------------------


def _load_path(path):
    from .paths import read_polyline_csv

    return read_polyline_csv(path)


def cmd_sig_compute(args):
    from .lyndon import lie_to_lyndon
    from .paths import polyline_signature
    from .tensor import tensor_log

    p = _load_path(args.input)
    sig = polyline_signature(p, args.level)
    if args.lyndon:
        exp = lie_to_lyndon(tensor_log(sig))
        return {"kind": "lyndon", "d": p.d, "N": args.level, "coords": exp.to_dict(), "residual": exp.residual}, True
    t = tensor_log(sig) if args.log else sig
    return {"kind": "log_signature" if args.log else "signature", **t.to_dict()}, True


def cmd_lyndon_list(args):
    from .lyndon import lyndon_words
    from .tensor import word_str

    return {"d": args.d, "N": args.N, "words": [word_str(w) for w in lyndon_words(args.d, args.N)]}, True


def cmd_winding_moments(args):
    from .winding import moment_table

    p = _load_path(args.input)
    table = moment_table(p, args.level, translate=not args.no_translate)
    return {"N": args.level, "translated": not args.no_translate, "moments": table.to_dict()}, True


def cmd_verify_theorem1(args):
    from .winding import verify_theorem1

    rep = verify_theorem1(_load_path(args.input), args.level, tol=args.tol)
    return rep, rep["passed"]


def cmd_verify_sharpness(args):
    from .winding import sharpness_report

    rep = sharpness_report()
    ok = rep["gamma"] != rep["gamma_tilde"] and rep["moment_table_max_abs_diff"] <= args.tol
    return {**rep, "tolerance": args.tol, "passed": ok}, ok


def cmd_verify_corollary2(args):
    from .paths import polyline_signature
    from .tensor import tensor_log
    from .winding import fourth_level_from_winding, moment_table

    p = _load_path(args.input)
    rebuilt = fourth_level_from_winding(moment_table(p, 4))
    log4 = tensor_log(polyline_signature(p, 4))
    diff = float(np.max(np.abs(rebuilt.coeffs - log4.coeffs)))
    return {"max_abs_error": diff, "tolerance": args.tol, "passed": diff <= args.tol}, diff <= args.tol


def cmd_verify_isoperimetric(args):
    from .winding import isoperimetric_report

    rep = isoperimetric_report(_load_path(args.input), args.resolution)
    ok = rep["lhs"] <= rep["rhs"] * (1 + args.slack)
    return {**rep, "slack": args.slack, "passed": ok}, ok


def cmd_verify_semicircle(args):
    from .paths import polyline_signature
    from .sle import semicircle_polyline, semicircle_signature

    exact = semicircle_signature(4)
    rows = []
    for m in args.m:
        approx = polyline_signature(semicircle_polyline(m), 4)
        rows.append({"m": m, "max_abs_error": float(np.max(np.abs(approx.coeffs - exact.coeffs)))})
    errs = [r["max_abs_error"] for r in rows]
    ok = errs[-1] <= args.tol and all(a > b for a, b in zip(errs, errs[1:]))
    return {"rows": rows, "tolerance": args.tol, "passed": ok}, ok


def _word_dict(t, level=4):
    from .tensor import all_words, word_str

    return {word_str(w): float(v) for w, v in zip(all_words(t.d, level), t.level(level)) if v}


def cmd_verify_theorem6(args):
    from .sle import MCEstimate, even_two_projection, mc_target_report, theorem6_assemble, theorem6_display
    from .special import catalan_constant, quad_integral_A, two_point_moment_mc_check

    K = catalan_constant()
    if args.A is not None:
        A, A_err = args.A, 0.0
    else:
        A, A_err = quad_integral_A()
    base = even_two_projection(theorem6_assemble(K, A, (0.0, 0.0, 0.0)))
    moved = even_two_projection(theorem6_assemble(K, A, (7.0, -3.0, 11.0)))
    display = even_two_projection(theorem6_display(K, A))
    invariance = float(np.max(np.abs(base.coeffs - moved.coeffs)))
    display_diff = float(np.max(np.abs(base.coeffs - display.coeffs)))
    out = {
        "K": K,
        "A": A,
        "A_error": A_err,
        "assembled": _word_dict(base),
        "display": _word_dict(display),
        "free_moment_invariance": invariance,
        "display_max_abs_diff": display_diff,
        "tolerance": args.tol,
    }
    ok = invariance <= args.tol and display_diff <= args.tol
    if args.estimate:
        with open(args.estimate) as fh:
            est = MCEstimate.from_json(fh.read())
        rows = mc_target_report(est, K)
        out["mc_targets"] = rows
        out["mc_two_point"] = two_point_moment_mc_check(est, A, A_err)
        ok = ok and all(r["passed"] for r in rows) and out["mc_two_point"].get("status") == "pass"
    out["passed"] = ok
    return out, ok


def _sle_config(args):
    from .sle import SLEConfig

    return SLEConfig(
        kappa=args.kappa,
        steps=args.steps,
        T=args.T,
        samples=getattr(args, "samples", 1),
        seed=args.seed,
        arc_points=args.arc_points,
        vertices=args.vertices,
    ).validate()


def cmd_sle_sample(args):
    from .sle import map_to_disc, sample_loop, sample_trace

    cfg = _sle_config(args)
    if args.loop:
        p = sample_loop(cfg, args.index)
    elif args.disc:
        p = map_to_disc(sample_trace(cfg, args.index))
    else:
        p = sample_trace(cfg, args.index)
    return p.to_csv(), True


def cmd_sle_mc(args):
    from .sle import mc_expected_signature

    est = mc_expected_signature(_sle_config(args), threads=_threads(args))
    return est.to_dict(include_samples=not args.no_samples), True


def cmd_specfun_A(args):
    from .special import QuadratureSpec, quad_integral_A

    spec = QuadratureSpec(tol=args.tol, panels=args.panels, variant=args.variant)
    value, err, info = quad_integral_A(spec, return_info=True)
    return {"value": value, "error_estimate": err, "nodes_used": info["nodes_used"], "wall_time": info["wall_time"], "history": info["history"]}, True


def cmd_specfun_catalan(args):
    from .special import catalan_constant

    return {"value": catalan_constant()}, True


def cmd_specfun_G(args):
    from .special import hyp_G

    return {"values": [{"sigma": s, "G": hyp_G(s)} for s in args.sigma]}, True


# -- parser ----------------------------------------------------------------------


def _common(p, seed=False, threads=False):
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--manifest", help="write the run manifest here instead of stderr")
    if seed:
        p.add_argument("--seed", type=int, default=7)
    if threads:
        p.add_argument("--threads", type=int, default=None, help="worker threads (SIGWIND_THREADS overrides)")


def _sle_args(p):
    p.add_argument("--kappa", type=float, default=8.0 / 3.0)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--T", type=float, default=16.0)
    p.add_argument("--arc-points", type=int, default=512)
    p.add_argument("--vertices", type=int, default=1000, help="trace vertices kept per sample")


def build_parser():
    parser = argparse.ArgumentParser(prog="sigwind", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sigwind {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    sig = groups.add_parser("sig").add_subparsers(dest="cmd", required=True)
    p = sig.add_parser("compute", help="signature of a CSV polyline")
    p.add_argument("--input", required=True)
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--log", action="store_true", help="emit the log-signature")
    p.add_argument("--lyndon", action="store_true", help="emit Lyndon coordinates of the log-signature")
    _common(p)
    p.set_defaults(func=cmd_sig_compute)

    lyn = groups.add_parser("lyndon").add_subparsers(dest="cmd", required=True)
    p = lyn.add_parser("list", help="Lyndon words in increasing order")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--N", type=int, default=4)
    _common(p)
    p.set_defaults(func=cmd_lyndon_list)

    wnd = groups.add_parser("winding").add_subparsers(dest="cmd", required=True)
    p = wnd.add_parser("moments", help="exact winding moments of a closed CSV polyline")
    p.add_argument("--input", required=True)
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--no-translate", action="store_true", help="do not move the first vertex to the origin")
    _common(p)
    p.set_defaults(func=cmd_winding_moments)

    ver = groups.add_parser("verify").add_subparsers(dest="cmd", required=True)
    p = ver.add_parser("theorem1", help="Lyndon coordinates versus winding moments")
    p.add_argument("--input", required=True)
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-9)
    _common(p)
    p.set_defaults(func=cmd_verify_theorem1)
    p = ver.add_parser("sharpness", help="equal winding, different level-5 signature")
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p)
    p.set_defaults(func=cmd_verify_sharpness)
    p = ver.add_parser("corollary2", help="level-4 log-signature rebuilt from moments")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p)
    p.set_defaults(func=cmd_verify_corollary2)
    p = ver.add_parser("isoperimetric", help="4 pi |wind|_2^2 <= length^2")
    p.add_argument("--input", required=True)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--slack", type=float, default=0.02)
    _common(p)
    p.set_defaults(func=cmd_verify_isoperimetric)
    p = ver.add_parser("semicircle", help="polygonal half-disc loop versus closed form")
    p.add_argument("--m", type=int, nargs="+", default=[100, 1000, 10000])
    p.add_argument("--tol", type=float, default=1e-5)
    _common(p)
    p.set_defaults(func=cmd_verify_semicircle)
    p = ver.add_parser("theorem6", help="level-4 SLE(8/3) expected signature")
    p.add_argument("--estimate", help="MC estimate JSON from 'sle mc'")
    p.add_argument("--A", type=float, default=None, help="skip quadrature and use this value of A")
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p)
    p.set_defaults(func=cmd_verify_theorem6)

    sle = groups.add_parser("sle").add_subparsers(dest="cmd", required=True)
    p = sle.add_parser("sample", help="one trace as CSV")
    _sle_args(p)
    p.add_argument("--index", type=int, default=0, help="sample index within the seeded stream")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--disc", action="store_true", help="map the trace into the disc")
    where.add_argument("--loop", action="store_true", help="closed loop in the disc")
    _common(p, seed=True)
    p.set_defaults(func=cmd_sle_sample)
    p = sle.add_parser("mc", help="Monte Carlo expected loop signature")
    _sle_args(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--no-samples", action="store_true", help="omit per-sample rows from the output")
    _common(p, seed=True, threads=True)
    p.set_defaults(func=cmd_sle_mc)

    spf = groups.add_parser("specfun").add_subparsers(dest="cmd", required=True)
    p = spf.add_parser("A", help="the four-fold integral A")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--panels", type=int, default=3)
    p.add_argument("--variant", choices=("corrected", "printed"), default="corrected")
    _common(p)
    p.set_defaults(func=cmd_specfun_A)
    p = spf.add_parser("catalan", help="Catalan's constant")
    _common(p)
    p.set_defaults(func=cmd_specfun_catalan)
    p = spf.add_parser("G", help="hypergeometric kernel G(sigma)")
    p.add_argument("--sigma", type=float, nargs="+", required=True)
    _common(p)
    p.set_defaults(func=cmd_specfun_G)
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        payload, ok = args.func(args)
    except (SigwindError, OSError) as exc:
        print(f"sigwind: error: {exc}", file=stderr)
        return 2
    text = payload if isinstance(payload, str) else dumps(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "manifest")}
    manifest = {
        "command": f"{args.group} {args.cmd}",
        "argv": list(sys.argv[1:] if argv is None else argv),
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "wall_time": time.perf_counter() - start,
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "passed": ok,
    }
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(dumps(manifest))
    else:
        stderr.write(dumps({"manifest": manifest}))
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
