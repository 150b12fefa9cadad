"""Single-source reach improvement.

Two hitting-set reductions share the geometric search over reach targets:
single-edge witnesses per deficient vertex, and balls around deficient
vertices hit by vertices that then get joined to the source.
"""
from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from .dispatch import improve_broadcast
from .graph import InformationGraph, canon
from .proximity import (
    EstimatorConfig,
    build_ensemble,
    matrix_from_ensemble,
    proximity_matrix,
    reach_estimate,
)
from .results import AugmentationResult, greedy_factor, reach_guarantee
from .witness import HittingSetInstance, SearchGrid, feasibility_binary_search, greedy_hitting_set

REACH_WITNESS = "reach-witness"
REACH_BALL = "reach-ball"
ALPHA_SPLIT = 0.5


def _check(g: InformationGraph, source: int, k: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")


def _witness_tables(g, source, cfg):
    ens = build_ensemble(g, cfg)
    base = matrix_from_ensemble(ens, cfg)
    pool = g.non_edges()
    rows = np.empty((len(pool), g.n))
    for i, e in enumerate(pool):
        rows[i] = matrix_from_ensemble(ens.with_edges([e]), cfg).lower()[source]
    return base, pool, rows


def _ball_tables(g, cfg):
    base = matrix_from_ensemble(build_ensemble(g, cfg), cfg)
    return base, base.lower()


def _search(g, source, k, epsilon, cfg, build, solve, algo, upsilon_star):
    t0 = time.perf_counter()
    tables = build(cfg)
    base = tables[0]
    before = reach_estimate(base, source)
    grid = SearchGrid(before.value, epsilon)
    verify = None
    if not cfg.exact:
        alt = build(cfg.reseeded())
        verify = lambda x: solve(alt, x)
    idx, sol = feasibility_binary_search(grid, lambda x: solve(tables, x), verify)
    sol = sol or {"edges": (), "sets": 0, "budget": 0, "picks": []}
    edges = sol["edges"]
    after = reach_estimate(proximity_matrix(g, cfg, edges), source)
    bound = None if upsilon_star is None else reach_guarantee(upsilon_star, k, g.alpha, epsilon)
    return AugmentationResult(
        algorithm=algo, k=k, edges=edges, before=before, after=after, epsilon=epsilon, alpha=g.alpha,
        guarantee_bound=bound, edge_budget=max(sol["budget"], 2 * k), grid_index=idx, source=source,
        diagnostics={"target": grid.value(idx), "deficient": sol["sets"], "picks": list(sol["picks"]),
                     "grid_top": grid.top},
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )


def improve_reach_witness(g: InformationGraph, source: int, k: int, epsilon: float, cfg: EstimatorConfig,
                          upsilon_star: float | None = None) -> AugmentationResult:
    """Each vertex whose reach falls below ``x`` must be lifted to ``x / (2k + 2)`` by one picked edge."""
    _check(g, source, k)

    def solve(tables, x):
        base, pool, rows = tables
        b = x / (2 * k + 2)
        deficient = [u for u in range(g.n) if u != source and base.values[source, u] < x]
        if not deficient:
            return True, {"edges": (), "sets": 0, "budget": 0, "picks": []}
        sets = [np.flatnonzero(rows[:, u] >= b).tolist() for u in deficient]
        if any(not s for s in sets):
            return False, None
        picks = greedy_hitting_set(HittingSetInstance(pool, sets))
        budget = 2 * k * greedy_factor(len(sets))
        edges = tuple(sorted(pool[p] for p in picks))
        return len(picks) <= budget, {"edges": edges, "sets": len(sets), "budget": budget, "picks": picks}

    return _search(g, source, k, epsilon, cfg, lambda c: _witness_tables(g, source, c), solve,
                   REACH_WITNESS, upsilon_star)


def improve_reach_ball(g: InformationGraph, source: int, k: int, epsilon: float, cfg: EstimatorConfig,
                       upsilon_star: float | None = None) -> AugmentationResult:
    """Hit the ``x/(1+2k alpha)``-balls of deficient vertices, then join the source to the hitters."""
    _check(g, source, k)

    def solve(tables, x):
        base, lower = tables
        r = x / (1 + 2 * k * g.alpha)
        deficient = [u for u in range(g.n) if u != source and base.values[source, u] < x]
        if not deficient:
            return True, {"edges": (), "sets": 0, "budget": 0, "picks": []}
        sets = [[w for w in np.flatnonzero(lower[u] >= r).tolist() if w != source] for u in deficient]
        if any(not s for s in sets):
            return False, None
        picks = greedy_hitting_set(HittingSetInstance(range(g.n), sets))
        budget = 2 * k * greedy_factor(len(sets))
        edges = tuple(sorted(canon(source, w) for w in picks if not g.has_edge(source, w)))
        return len(picks) <= budget, {"edges": edges, "sets": len(sets), "budget": budget, "picks": picks}

    return _search(g, source, k, epsilon, cfg, lambda c: _ball_tables(g, c), solve, REACH_BALL, upsilon_star)


def improve_reach(g: InformationGraph, source: int, k: int, epsilon: float, cfg: EstimatorConfig,
                  upsilon_star: float | None = None) -> AugmentationResult:
    """Run both reductions and keep the larger reach (the witness branch wins ties)."""
    wit = improve_reach_witness(g, source, k, epsilon, cfg, upsilon_star)
    ball = improve_reach_ball(g, source, k, epsilon, cfg, upsilon_star)
    best, other = (wit, ball) if wit.after.value >= ball.after.value else (ball, wit)
    diag = dict(best.diagnostics)
    diag.update(branch=best.algorithm, other_reach=other.after.value, alpha_split=ALPHA_SPLIT,
                regime_branch=REACH_WITNESS if g.alpha <= ALPHA_SPLIT else REACH_BALL)
    return replace(best, diagnostics=diag, runtime_ms=wit.runtime_ms + ball.runtime_ms)


def reach_via_broadcast(g: InformationGraph, source: int, k: int, algo: str, cfg: EstimatorConfig,
                        epsilon: float = 0.5) -> AugmentationResult:
    """Improve broadcast with ``algo`` and report the source's reach before and after."""
    _check(g, source, k)
    res = improve_broadcast(g, algo, k, cfg, epsilon)
    before = reach_estimate(proximity_matrix(g, cfg), source)
    after = reach_estimate(proximity_matrix(g, cfg, res.edges), source)
    diag = dict(res.diagnostics, broadcast_after=res.after.value)
    return replace(res, before=before, after=after, source=source, diagnostics=diag)
