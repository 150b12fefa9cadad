"""Exhaustive ground truth for small instances.

Optimal broadcast and reach over all k-edge additions, optimal k-center
radius, and an exact check of the path-splitting inequality that underlies
the center-based analysis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import Edge, InformationGraph
from .proximity import EXACT, TIE_RTOL, ImpliedMetric, EstimatorConfig, build_ensemble

NONEDGE_LIMIT = 15
EDGE_LIMIT = 20
PATH_CAP = 100_000
SUBSET_LIMIT = 1_000_000


class OracleLimitError(RuntimeError):
    pass


def _subsets(g: InformationGraph, k: int, nonedge_limit: int, edge_limit: int):
    if k < 0:
        raise ValueError("k must be non-negative")
    pool = g.non_edges()
    if len(pool) > nonedge_limit:
        raise OracleLimitError(f"{len(pool)} non-edges exceed the oracle limit {nonedge_limit}")
    size = min(k, len(pool))
    if g.m + size > edge_limit:
        raise OracleLimitError(f"m + k = {g.m + size} exceeds the oracle limit {edge_limit}")
    return pool, size


def _additions(ens, pool, start, size, chosen):
    """Ensembles for every ``size``-subset of ``pool[start:]`` in lexicographic order."""
    if size == 0:
        yield tuple(chosen), ens
        return
    for idx in range(start, len(pool) - size + 1):
        chosen.append(pool[idx])
        yield from _additions(ens.with_edges([pool[idx]]), pool, idx + 1, size - 1, chosen)
        chosen.pop()


def _best_over_additions(g, k, score, nonedge_limit, edge_limit):
    pool, size = _subsets(g, k, nonedge_limit, edge_limit)
    cfg = EstimatorConfig(EXACT, exact_edge_limit=edge_limit)
    best, best_set = -1.0, ()
    for combo, ens in _additions(build_ensemble(g, cfg), pool, 0, size, []):
        val = score(ens)
        if val > best * (1 + TIE_RTOL):
            best, best_set = val, combo
    return best, best_set


def brute_force_broadcast_opt(g: InformationGraph, k: int, nonedge_limit: int = NONEDGE_LIMIT,
                              edge_limit: int = EDGE_LIMIT) -> tuple[float, tuple[Edge, ...]]:
    """Optimal broadcast over all additions of ``min(k, #non-edges)`` edges (lexicographic ties)."""
    iu, ju = np.triu_indices(g.n, 1)

    def score(ens):
        return float(ens.values()[iu, ju].min()) if g.n > 1 else 1.0

    return _best_over_additions(g, k, score, nonedge_limit, edge_limit)


def brute_force_reach_opt(g: InformationGraph, source: int, k: int, nonedge_limit: int = NONEDGE_LIMIT,
                          edge_limit: int = EDGE_LIMIT) -> tuple[float, tuple[Edge, ...]]:
    """Optimal reach of ``source`` over all additions of ``min(k, #non-edges)`` edges."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    others = np.array([u for u in range(g.n) if u != source], dtype=int)

    def score(ens):
        return float(ens.row(source)[others].min()) if len(others) else 1.0

    return _best_over_additions(g, k, score, nonedge_limit, edge_limit)


def brute_force_kcenter(metric: ImpliedMetric, count: int, limit: int = SUBSET_LIMIT) -> float:
    d = metric.dist
    n = d.shape[0]
    if count < 1:
        raise ValueError("count must be at least 1")
    if count >= n:
        return 0.0
    if math.comb(n, count) > limit:
        raise OracleLimitError(f"C({n}, {count}) center subsets exceed the limit {limit}")
    subsets = np.array(list(combinations(range(n), count)))
    # radius of each subset: max over vertices of the distance to the nearest center
    radii = d[:, subsets].min(axis=2).max(axis=0)
    return float(radii.min())


# -- path-splitting inequality -------------------------------------------------

def simple_paths(g: InformationGraph, s: int, t: int, cap: int = PATH_CAP) -> list[list[int]]:
    out: list[list[int]] = []
    path, seen = [s], {s}

    def dfs(v):
        if v == t:
            out.append(list(path))
            if len(out) > cap:
                raise OracleLimitError(f"more than {cap} simple paths")
            return
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                path.append(w)
                dfs(w)
                path.pop()
                seen.discard(w)

    dfs(s)
    return out


class _Worlds:
    """All 2^m edge subsets with their probabilities."""

    def __init__(self, g: InformationGraph, edge_limit: int = EDGE_LIMIT):
        if g.m > edge_limit:
            raise OracleLimitError(f"{g.m} edges exceed the subset enumeration limit {edge_limit}")
        self.index = {e: i for i, e in enumerate(g.edges)}
        self.masks = np.arange(1 << g.m, dtype=np.int64)
        kept = np.zeros(len(self.masks), dtype=np.int64)
        for i in range(g.m):
            kept += (self.masks >> i) & 1
        self.prob = g.alpha**kept * (1 - g.alpha) ** (g.m - kept)

    def path_mask(self, path) -> int:
        return sum(1 << self.index[(min(a, b), max(a, b))] for a, b in zip(path, path[1:]))

    def contribution(self, masks) -> float:
        """Probability that at least one of the edge sets in ``masks`` is fully kept."""
        masks = sorted(set(masks))
        if not masks:
            return 0.0
        alive = np.zeros(len(self.masks), dtype=bool)
        for p in masks:
            alive |= (self.masks & p) == p
        return float(self.prob[alive].sum())


@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    skipped: bool
    union: float
    avoiding: float
    through_left: float
    through_right: float
    beta: float

    def __bool__(self) -> bool:
        return self.holds


def check_fundamental_inequality(g: InformationGraph, i: int, j: int, u: int, beta: float,
                                 path_cap: int = PATH_CAP, edge_limit: int = EDGE_LIMIT) -> InequalityCheck:
    """Exact check that ``Pr[P_u[i,u]] * Pr[P_u[u,j]] >= beta/2``.

    ``P_u`` holds the simple ``i``-``j`` paths through ``u`` and ``P_0`` the ones
    avoiding it; ``P_u[i,u]`` are their ``i``-to-``u`` prefixes. The check is
    skipped (and counts as holding) unless ``Pr[P_u or P_0] >= beta`` and
    ``Pr[P_0] <= beta/2``.
    """
    worlds = _Worlds(g, edge_limit)
    paths = simple_paths(g, i, j, path_cap)
    through = [p for p in paths if u in p]
    avoid = [p for p in paths if u not in p]
    union = worlds.contribution(worlds.path_mask(p) for p in paths)
    avoiding = worlds.contribution(worlds.path_mask(p) for p in avoid)
    left = worlds.contribution(worlds.path_mask(p[: p.index(u) + 1]) for p in through)
    right = worlds.contribution(worlds.path_mask(p[p.index(u):]) for p in through)
    if union < beta or avoiding > beta / 2:
        return InequalityCheck(True, True, union, avoiding, left, right, beta)
    return InequalityCheck(left * right >= beta / 2 - 1e-12, False, union, avoiding, left, right, beta)
