"""Command-line front end: ``bikit {gen,improve,reach,broadcast,brute,bench}``.

Results are JSON objects tagged ``"schema": 1``. Exit status is 0 on
success, 1 on runtime errors (an error object is printed) and 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .graph import FAMILIES, GraphError, GraphFamilySpec, InformationGraph, format_graph, generate, load_graph
from .proximity import EXACT, MONTE_CARLO, EstimatorConfig, broadcast_value, proximity_matrix, reach_value
from .results import BROADCAST_ALGOS, AugmentationResult

SCHEMA = 1
AUTO = "auto"
REACH_VARIANTS = ("both", "witness", "ball") + tuple(f"via-{a}" for a in BROADCAST_ALGOS)


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("BIKIT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BIKIT_SEED must be an integer, got {raw!r}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def emit(obj: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(_jsonable(obj), indent=2) + "\n")


def estimator_config(args, g: InformationGraph, extra_edges: int = 3) -> EstimatorConfig:
    method = args.method
    if method == AUTO:
        method = EXACT if g.m + extra_edges <= args.exact_limit else MONTE_CARLO
    return EstimatorConfig(method, samples=args.samples, seed=args.seed,
                           exact_edge_limit=args.exact_limit, workers=args.workers)


def result_json(res: AugmentationResult, cfg: EstimatorConfig, timing: bool = True) -> dict:
    out = {
        "schema": SCHEMA,
        "algorithm": res.algorithm,
        "k": res.k,
        "epsilon": res.epsilon,
        "alpha": res.alpha,
        "edges_added": [list(e) for e in res.edges],
        "edges_count": res.edges_count,
        "broadcast_before": res.before.value,
        "broadcast_after": res.after.value,
        "half_width": res.after.half_width,
        "samples": res.after.samples,
        "seed": cfg.seed,
        "grid_index": res.grid_index,
        "method": cfg.method,
        "edge_budget": res.edge_budget,
        "diagnostics": res.diagnostics,
    }
    if res.source is not None:
        out["source"] = res.source
        out["reach_before"] = out.pop("broadcast_before")
        out["reach_after"] = out.pop("broadcast_after")
        if "broadcast_after" in res.diagnostics:
            out["broadcast_after"] = res.diagnostics["broadcast_after"]
    if timing:
        out["runtime_ms"] = res.runtime_ms
    return out


def write_matrix_csv(path: str, g: InformationGraph, cfg: EstimatorConfig, edges=()) -> None:
    pm = proximity_matrix(g, cfg, edges)
    np.savetxt(path, pm.values, delimiter=",", fmt="%.17g")


# -- subcommands ----------------------------------------------------------------

def cmd_gen(args) -> int:
    sets, m, planted = (), 0, ()
    if args.family == "setcover-gadget":
        if not args.spec:
            raise UsageError("setcover-gadget needs --spec")
        try:
            data = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read gadget spec: {exc}")
        sets = tuple(tuple(int(x) for x in s) for s in data["sets"])
        m = int(data.get("m", max((max(s) for s in sets if s), default=0)))
        planted = tuple(int(i) for i in data.get("planted", ()))
    spec = GraphFamilySpec(args.family, alpha=args.alpha, n=args.n, leaves=args.leaves, length=args.len,
                           depth=args.depth, p=args.p, sets=sets, m=m, planted=planted)
    try:
        g = generate(spec, args.seed)
    except GraphError as exc:
        raise UsageError(str(exc))
    text = format_graph(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_improve(args) -> int:
    from .dispatch import improve_broadcast

    g = load_graph(args.graph)
    cfg = estimator_config(args, g, max(3, 2 * args.k))
    res = improve_broadcast(g, args.algo, args.k, cfg, args.epsilon)
    if args.matrix_csv:
        write_matrix_csv(args.matrix_csv, g, cfg, res.edges)
    emit(result_json(res, cfg, not args.no_timing))
    return 0


def cmd_reach(args) -> int:
    from .reach import improve_reach, improve_reach_ball, improve_reach_witness, reach_via_broadcast

    g = load_graph(args.graph)
    cfg = estimator_config(args, g, max(3, 2 * args.k))
    v = args.variant
    if v == "both":
        res = improve_reach(g, args.source, args.k, args.epsilon, cfg)
    elif v == "witness":
        res = improve_reach_witness(g, args.source, args.k, args.epsilon, cfg)
    elif v == "ball":
        res = improve_reach_ball(g, args.source, args.k, args.epsilon, cfg)
    else:
        res = reach_via_broadcast(g, args.source, args.k, v[len("via-"):], cfg, args.epsilon)
    emit(result_json(res, cfg, not args.no_timing))
    return 0


def cmd_broadcast(args) -> int:
    g = load_graph(args.graph)
    cfg = estimator_config(args, g, 0)
    t0 = time.perf_counter()
    pm = proximity_matrix(g, cfg)
    out = {"schema": SCHEMA, "method": cfg.method, "half_width": pm.half_width, "samples": pm.samples,
           "seed": cfg.seed}
    if args.source is None:
        value, pair = broadcast_value(pm)
        out.update(value=value, argmin=list(pair))
    else:
        if not 0 <= args.source < g.n:
            raise UsageError(f"--source {args.source} out of range for n={g.n}")
        value, u = reach_value(pm, args.source)
        out.update(value=value, argmin=[args.source, u], source=args.source)
    if args.matrix_csv:
        write_matrix_csv(args.matrix_csv, g, cfg)
    if not args.no_timing:
        out["runtime_ms"] = (time.perf_counter() - t0) * 1e3
    emit(out)
    return 0


def cmd_brute(args) -> int:
    from .oracle import brute_force_broadcast_opt, brute_force_reach_opt

    g = load_graph(args.graph)
    if args.source is None:
        value, edges = brute_force_broadcast_opt(g, args.k)
        out = {"schema": SCHEMA, "beta_star": value}
    else:
        value, edges = brute_force_reach_opt(g, args.source, args.k)
        out = {"schema": SCHEMA, "upsilon_star": value, "source": args.source}
    out["edges"] = [list(e) for e in edges]
    out["k"] = args.k
    emit(out)
    return 0


def cmd_bench(args) -> int:
    from .bench import load_config, run_bench

    cfg = load_config(args.config)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        run_bench(cfg, out, workers=args.workers)
    finally:
        if args.output:
            out.close()
    return 0


# -- parser -----------------------------------------------------------------------

def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _estimator_flags(p, seed):
    p.add_argument("--method", choices=(AUTO, EXACT, MONTE_CARLO, "mc"), default=AUTO)
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=seed, help="sampling seed (default: $BIKIT_SEED or 0)")
    p.add_argument("--workers", type=_positive_int, default=None, help="sampling threads (default: all cores)")
    p.add_argument("--exact-limit", type=_positive_int, default=20, help="max edges for exact enumeration")
    p.add_argument("--no-timing", action="store_true", help="omit runtime_ms for byte-stable output")
    p.add_argument("--matrix-csv", metavar="PATH", help="also write the final proximity matrix as CSV")


def build_parser(seed: int = 0) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bikit", description="Broadcast and reach improvement on information graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate a graph family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--leaves", type=int, default=0)
    p.add_argument("--len", type=int, default=0, help="arm length or gadget path length")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--p", type=float, default=0.0, help="edge probability for random graphs")
    p.add_argument("--spec", help="JSON file with {sets, m, planted} for setcover-gadget")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("improve", help="add edges to raise broadcast")
    p.add_argument("graph")
    p.add_argument("--algo", choices=BROADCAST_ALGOS, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--epsilon", type=_positive_float, default=0.5)
    _estimator_flags(p, seed)
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("reach", help="add edges to raise the reach of a source")
    p.add_argument("graph")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--epsilon", type=_positive_float, default=0.5)
    p.add_argument("--variant", choices=REACH_VARIANTS, default="both")
    _estimator_flags(p, seed)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("broadcast", help="estimate broadcast (or reach with --source)")
    p.add_argument("graph")
    p.add_argument("--source", type=int, default=None)
    _estimator_flags(p, seed)
    p.set_defaults(func=cmd_broadcast)

    p = sub.add_parser("brute", help="exhaustive optimum over k-edge additions")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--source", type=int, default=None)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("bench", help="sweep algorithms against the oracle, CSV out")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=_positive_int, default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    try:
        seed = default_seed()
    except UsageError as exc:
        print(f"bikit: error: {exc}", file=sys.stderr)
        return 2
    ap = build_parser(seed)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "method", None) == "mc":
        args.method = MONTE_CARLO
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bikit {args.cmd}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures become a machine-readable error object
        emit({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1


if __name__ == "__main__":
    sys.exit(main())
