"""Command-line entry points.

Subcommands: validate, curvature, delaunay, solve, flow, verify.  Human
readable diagnostics go to stderr, a short summary to stdout, and the
full JSON report to the --out path when given.  Exit codes: 0 converged
or passed, 2 invalid input, 3 solver non-convergence, 4 internal
divergence.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .checks import run_verification_suite
from .errors import (
    FlowStalled,
    HidraError,
    MaxIterationsExceeded,
    NonCompactOrthocircle,
    ParseError,
    SolverStalled,
    SurgeryDiverged,
    TargetOutOfRange,
    ValidationError,
)
from .flips import make_weighted_delaunay, surface_delaunay_margins
from .meshio import build_report, dumps_mesh, dumps_report, load_mesh, mesh_document
from .solver import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOL_K,
    SolveState,
    curvatures,
    newton_solve,
    ricci_flow,
    u_from_r,
    validate_target,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_DIVERGED = 4

DEFAULTS = {
    "tol": DEFAULT_TOL_K,
    "tol_delaunay": 1e-10,
    "flip_budget": None,   # 100 * edge count unless overridden
    "max_iters": DEFAULT_MAX_ITERATIONS,
    "dt": 0.2,
    "t_max": 200.0,
    "seed": 0,
}


def _say(msg):
    print(msg, file=sys.stderr)


def _settings(args):
    """Effective options: CLI flags override the config file, which
    overrides the built-in defaults."""
    merged = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, "rb") as fh:
            merged.update(json.load(fh))
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _write_report(args, report):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(dumps_report(report))


def _solver_target(args, surface, target_from_file):
    uniform = getattr(args, "target_uniform", None)
    if uniform is not None:
        return np.full(surface.vertex_count, float(uniform))
    if target_from_file is None:
        raise TargetOutOfRange(
            "no target curvature: none in the mesh file and no --target-uniform"
        )
    return target_from_file


def _failure_report(args, status, digest, exc, state=None):
    report = build_report(
        status=status, digest=digest, state=state, error=str(exc)
    )
    _write_report(args, report)
    _say(f"error: {exc}")


def cmd_validate(args):
    surface, packing, target, digest = load_mesh(args.mesh)
    from .geometry import validate_packing

    validate_packing(surface, packing)
    if target is not None:
        validate_target(surface, target)
    report = build_report(
        status="converged",
        digest=digest,
        surface=surface,
        packing=packing,
        target=target,
    )
    _write_report(args, report)
    print(
        f"valid: {surface.vertex_count} vertices, {len(surface.edges)} edges, "
        f"{len(surface.faces)} faces, chi = {report['global']['chi']}"
    )
    return EXIT_OK


def cmd_curvature(args):
    surface, packing, target, digest = load_mesh(args.mesh)
    K, area = curvatures(surface, packing)
    report = build_report(
        status="converged",
        digest=digest,
        surface=surface,
        packing=packing,
        target=target,
    )
    _write_report(args, report)
    print(
        f"K = {np.array2string(K, precision=12)}  area = {area:.12g}  "
        f"gauss_bonnet_residual = {report['global']['gauss_bonnet_residual']:.3e}"
    )
    return EXIT_OK


def cmd_delaunay(args):
    settings = _settings(args)
    surface, packing, target, digest = load_mesh(args.mesh)
    surface2, packing2, events = make_weighted_delaunay(
        surface,
        packing,
        tol=settings["tol_delaunay"],
        flip_budget=settings["flip_budget"],
    )
    K, area = curvatures(surface2, packing2)
    state = SolveState(
        surface2, packing2, u_from_r(packing2.radii), None, K, area,
        "converged", 0, list(events), [],
    )
    report = build_report(status="converged", digest=digest, state=state)
    report["mesh"] = mesh_document(surface2, packing2, target)
    _write_report(args, report)
    if args.mesh_out:
        Path(args.mesh_out).write_text(dumps_mesh(surface2, packing2, target))
    margins = surface_delaunay_margins(surface2, packing2)
    print(f"flips: {len(events)}  min margin: {min(margins):.3e}")
    return EXIT_OK


def cmd_solve(args):
    settings = _settings(args)
    surface, packing, target_doc, digest = load_mesh(args.mesh)
    target = _solver_target(args, surface, target_doc)
    try:
        state = newton_solve(
            surface,
            packing,
            target,
            tol=settings["tol"],
            max_iterations=int(settings["max_iters"]),
            tol_delaunay=settings["tol_delaunay"],
            flip_budget=settings["flip_budget"],
        )
    except (SolverStalled, MaxIterationsExceeded) as exc:
        _failure_report(args, exc.state.status if exc.state else "stalled",
                        digest, exc, exc.state)
        return EXIT_NO_CONVERGENCE
    except SurgeryDiverged as exc:
        _failure_report(args, "surgery_diverged", digest, exc, exc.state)
        return EXIT_DIVERGED
    report = build_report(status=state.status, digest=digest, state=state)
    _write_report(args, report)
    print(
        f"status: {state.status}  iterations: {state.iterations}  "
        f"max|K-Kbar| = {state.max_error:.3e}  flips: {len(state.flip_log)}"
    )
    return EXIT_OK


def cmd_flow(args):
    settings = _settings(args)
    surface, packing, target_doc, digest = load_mesh(args.mesh)
    target = _solver_target(args, surface, target_doc)
    try:
        state = ricci_flow(
            surface,
            packing,
            target,
            dt=float(settings["dt"]),
            t_max=float(settings["t_max"]),
            tol=settings["tol"],
            tol_delaunay=settings["tol_delaunay"],
            flip_budget=settings["flip_budget"],
        )
    except FlowStalled as exc:
        _failure_report(args, "stalled", digest, exc, exc.state)
        return EXIT_NO_CONVERGENCE
    except SurgeryDiverged as exc:
        _failure_report(args, "surgery_diverged", digest, exc, exc.state)
        return EXIT_DIVERGED
    report = build_report(status=state.status, digest=digest, state=state)
    _write_report(args, report)
    print(
        f"status: {state.status}  steps: {state.iterations}  "
        f"max|K-Kbar| = {state.max_error:.3e}  flips: {len(state.flip_log)}"
    )
    return EXIT_OK if state.status == "converged" else EXIT_NO_CONVERGENCE


def cmd_verify(args):
    env_seed = os.environ.get("HIDRA_SEED")
    seed = int(env_seed) if env_seed is not None else int(_settings(args)["seed"])
    report = run_verification_suite(seed=seed, samples=args.samples)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(json.dumps(report, indent=2) + "\n")
    for section in report["sections"]:
        mark = "pass" if section["passed"] else "FAIL"
        print(f"[{mark}] {section['name']}")
        for check in section["checks"]:
            mark = "pass" if check["passed"] else "FAIL"
            print(
                f"    [{mark}] {check['name']}: {check['value']:.3e} "
                f"(tolerance {check['tolerance']:.0e})"
            )
    return EXIT_OK if report["passed"] else EXIT_DIVERGED


def _run_single(handler, args):
    try:
        return handler(args)
    except (ParseError, ValidationError, TargetOutOfRange) as exc:
        _failure_report(args, "invalid_input", None, exc)
        return EXIT_INVALID
    except SurgeryDiverged as exc:
        _failure_report(args, "surgery_diverged", None, exc, exc.state)
        return EXIT_DIVERGED
    except NonCompactOrthocircle as exc:
        _failure_report(args, "surgery_diverged", None, exc)
        return EXIT_DIVERGED
    except HidraError as exc:
        _failure_report(args, "invalid_input", None, exc)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        _say(f"error: {exc}")
        return EXIT_INVALID


def _run_job(payload):
    argv, mesh = payload
    return main(argv + [mesh])


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hidra",
        description="Inversive-distance circle packings on hyperbolic surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_mesh=True):
        if with_mesh:
            p.add_argument("mesh", nargs="+" if with_mesh == "many" else None)
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--config", help="JSON config file (flags take precedence)")
        p.add_argument("--jobs", type=int, default=1,
                       help="parallel workers when several meshes are given")

    def add_solver_flags(p):
        p.add_argument("--tol", type=float, help="curvature tolerance")
        p.add_argument("--tol-delaunay", dest="tol_delaunay", type=float)
        p.add_argument("--flip-budget", dest="flip_budget", type=int)
        p.add_argument("--target-uniform", dest="target_uniform", type=float,
                       help="uniform target curvature (overrides the mesh file)")

    p = sub.add_parser("validate", help="schema and geometry audit")
    add_common(p, "many")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("curvature", help="curvatures, areas, Gauss-Bonnet")
    add_common(p, "many")
    p.set_defaults(handler=cmd_curvature)

    p = sub.add_parser("delaunay", help="flip to weighted Delaunay")
    add_common(p, "many")
    p.add_argument("--mesh-out", dest="mesh_out", help="write the flipped mesh here")
    p.add_argument("--tol-delaunay", dest="tol_delaunay", type=float)
    p.add_argument("--flip-budget", dest="flip_budget", type=int)
    p.set_defaults(handler=cmd_delaunay)

    p = sub.add_parser("solve", help="Newton curvature prescription")
    add_common(p, "many")
    add_solver_flags(p)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("flow", help="discrete Ricci flow")
    add_common(p, "many")
    add_solver_flags(p)
    p.add_argument("--dt", type=float, help="initial flow step")
    p.add_argument("--t-max", dest="t_max", type=float, help="flow time budget")
    p.set_defaults(handler=cmd_flow)

    p = sub.add_parser("verify", help="run the oracle suite")
    add_common(p, with_mesh=False)
    p.add_argument("--seed", type=int, help="sweep RNG seed (HIDRA_SEED overrides)")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    meshes = getattr(args, "mesh", None)
    if meshes is not None and len(meshes) > 1:
        # Fan out over input files with independent solver instances.
        out_dir = args.out
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
        base_argv = [a for a in (argv if argv is not None else sys.argv[1:])
                     if a not in meshes]
        codes = []
        jobs = []
        for mesh in meshes:
            per = list(base_argv)
            if out_dir is not None:
                stem = Path(mesh).stem
                per = _replace_out(per, str(Path(out_dir) / f"{stem}.report.json"))
            jobs.append((per, mesh))
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                codes = list(pool.map(_run_job, jobs))
        else:
            codes = [_run_job(job) for job in jobs]
        return max(codes)

    if meshes is not None:
        args.mesh = meshes[0]
    return _run_single(args.handler, args)


def _replace_out(argv, new_out):
    argv = list(argv)
    if "--out" in argv:
        idx = argv.index("--out")
        argv[idx + 1] = new_out
    else:
        argv += ["--out", new_out]
    return argv


if __name__ == "__main__":
    sys.exit(main())
