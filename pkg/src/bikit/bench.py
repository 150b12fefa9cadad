"""Benchmark sweep: every (instance, algorithm) against the exhaustive optimum.

Config is TOML with a single ``[bench]`` table of scalars and arrays::

    [bench]
    families = ["path", "cycle", "star", "random"]
    n = [4, 5, 6]
    k = [1, 2]
    alpha = [0.3, 0.5, 0.7]
    algos = ["bicriteria", "single", "witness3", "witness2", "submod", "reach"]
    epsilon = 0.5
    p = 0.5          # random family edge probability
    seeds = [0, 1]   # one random graph per seed
    source = 0       # reach source

Instances outside the oracle limits are skipped with a note on stderr.
"""
from __future__ import annotations

import csv
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .dispatch import improve_broadcast
from .graph import GraphError, GraphFamilySpec, generate
from .oracle import OracleLimitError, brute_force_broadcast_opt, brute_force_reach_opt
from .proximity import EXACT, EstimatorConfig
from .reach import improve_reach
from .results import BROADCAST_ALGOS

DEFAULTS = {
    "families": ["path", "cycle", "star"],
    "n": [4, 5],
    "k": [1],
    "alpha": [0.5],
    "algos": list(BROADCAST_ALGOS),
    "epsilon": 0.5,
    "p": 0.5,
    "seeds": [0],
    "source": 0,
}
COLUMNS = ["family", "n", "seed", "k", "alpha", "algo", "edges_count", "edge_budget", "within_budget",
           "before", "after", "optimum", "bound", "ratio"]


def load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    table = raw.get("bench", raw)
    unknown = set(table) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"unknown bench keys: {', '.join(sorted(unknown))}")
    cfg = dict(DEFAULTS)
    cfg.update(table)
    for key in ("families", "n", "k", "alpha", "algos", "seeds"):
        if not isinstance(cfg[key], list):
            cfg[key] = [cfg[key]]
    bad = set(cfg["algos"]) - set(BROADCAST_ALGOS) - {"reach"}
    if bad:
        raise ValueError(f"unknown algorithms in bench config: {', '.join(sorted(bad))}")
    return cfg


def _instances(cfg):
    for fam in cfg["families"]:
        for n in cfg["n"]:
            for alpha in cfg["alpha"]:
                seeds = cfg["seeds"] if fam == "random" else [0]
                for seed in seeds:
                    try:
                        g = generate(GraphFamilySpec(fam, alpha=alpha, n=n, p=cfg["p"]), seed)
                    except GraphError as exc:
                        print(f"bench: skip {fam} n={n}: {exc}", file=sys.stderr)
                        continue
                    yield fam, n, seed, alpha, g


def run_bench(cfg: dict, out, workers=None) -> int:
    """Write one CSV row per (instance, k, algorithm); returns the row count."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    rows = 0
    eps = float(cfg["epsilon"])
    est = EstimatorConfig(EXACT, workers=workers)
    for fam, n, seed, alpha, g in _instances(cfg):
        for k in cfg["k"]:
            try:
                beta_star = brute_force_broadcast_opt(g, k)[0]
                ups_star = brute_force_reach_opt(g, cfg["source"], k)[0] if "reach" in cfg["algos"] else None
            except OracleLimitError as exc:
                print(f"bench: skip {fam} n={n} k={k}: {exc}", file=sys.stderr)
                continue
            for algo in cfg["algos"]:
                if algo == "reach":
                    res = improve_reach(g, cfg["source"], k, eps, est, ups_star)
                    opt = ups_star
                else:
                    res = improve_broadcast(g, algo, k, est, eps, beta_star)
                    opt = beta_star
                bound = res.guarantee_bound
                ratio = res.after.value / bound if bound else math.inf
                budget = res.edge_budget
                w.writerow([fam, n, seed, k, alpha, algo, res.edges_count, budget,
                            int(budget is None or res.edges_count <= budget),
                            repr(res.before.value), repr(res.after.value), repr(opt), repr(bound), repr(ratio)])
                rows += 1
    return rows
