"""Linear-approximation broadcast improvement through witness hitting sets.

A witness for a vertex pair is a group of at most ``c`` candidate edges whose
addition lifts the pair's proximity to a threshold. For a guessed optimum
``x`` every deficient pair gets the set of groups witnessing it; a greedy
hitting set then picks groups, and a binary search over the geometric grid
``broadcast(g) * (1 + eps)**i`` finds the largest guess whose hitting set fits
the edge budget.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import Edge, InformationGraph, canon
from .proximity import (
    Ensemble,
    EstimatorConfig,
    ProximityMatrix,
    broadcast_estimate,
    build_ensemble,
    matrix_from_ensemble,
    proximity_matrix,
)
from .results import WITNESS2, WITNESS3, AugmentationResult, broadcast_guarantee, greedy_factor

DEFAULT_POOL_CAP = 40


class InfeasibleError(ValueError):
    pass


class PoolTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessCandidate:
    edges: tuple[Edge, ...]
    certified: tuple[tuple[int, int, float], ...] = ()


@dataclass(frozen=True)
class HittingSetInstance:
    universe: Sequence
    sets: Sequence[Sequence[int]]


def greedy_hitting_set(instance: HittingSetInstance) -> list[int]:
    """Classic greedy: repeatedly take the element hitting most unhit sets (smallest index on ties)."""
    sets = [sorted(set(s)) for s in instance.sets]
    for i, s in enumerate(sets):
        if not s:
            raise InfeasibleError(f"set {i} is empty and cannot be hit")
    size = max(len(instance.universe), 1 + max((s[-1] for s in sets), default=-1))
    counts = np.zeros(size, dtype=np.int64)
    members: dict[int, list[int]] = {}
    for si, s in enumerate(sets):
        counts[s] += 1
        for x in s:
            members.setdefault(x, []).append(si)
    hit = [False] * len(sets)
    remaining = len(sets)
    chosen = []
    while remaining:
        x = int(np.argmax(counts))
        chosen.append(x)
        for si in members.get(x, ()):
            if not hit[si]:
                hit[si] = True
                remaining -= 1
                counts[sets[si]] -= 1
    return chosen


@dataclass(frozen=True)
class SearchGrid:
    """Targets ``lo * (1 + epsilon)**i`` for ``i = 0 .. top``, where ``lo * (1+eps)**top <= 1``."""

    lo: float
    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.lo <= 1:
            raise ValueError("grid start must lie in (0, 1]")

    @property
    def top(self) -> int:
        return max(0, math.floor(math.log(1.0 / self.lo) / math.log1p(self.epsilon) + 1e-9))

    def __len__(self) -> int:
        return self.top + 1

    def value(self, i: int) -> float:
        return min(1.0, self.lo * (1.0 + self.epsilon) ** i)


Predicate = Callable[[float], "tuple[bool, object]"]


def feasibility_binary_search(grid: SearchGrid, feasible: Predicate,
                              verify: Predicate | None = None) -> tuple[int, object]:
    """Largest grid index found feasible by binary search, with its solution.

    Index 0 is taken as feasible. With ``verify`` (e.g. a freshly seeded
    predicate under Monte Carlo noise) the result steps down until the
    verification also succeeds.
    """
    ok0, sol0 = feasible(grid.value(0))
    lo, hi = 0, grid.top
    best = sol0 if ok0 else None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        ok, sol = feasible(grid.value(mid))
        if ok:
            lo, best = mid, sol
        else:
            hi = mid - 1
    if verify is not None:
        while lo > 0:
            ok, sol = verify(grid.value(lo))
            if ok:
                best = sol
                break
            lo -= 1
        if lo == 0:
            best = verify(grid.value(0))[1]
    return lo, best


def default_pool(g: InformationGraph, cap: int | None = DEFAULT_POOL_CAP) -> list[Edge]:
    """All non-edges, or the ``cap`` with the smallest endpoint degree sum when there are more."""
    pool = g.non_edges()
    if cap is not None and len(pool) > cap:
        pool = sorted(pool, key=lambda e: (g.degree(e[0]) + g.degree(e[1]), e))[:cap]
        pool.sort()
    return pool


def _groups(pool: Sequence[Edge], c: int) -> list[tuple[Edge, ...]]:
    out: list[tuple[Edge, ...]] = []
    for size in range(1, c + 1):
        out.extend(combinations(pool, size))
    return out


def _group_ensembles(base: Ensemble, groups: Sequence[tuple[Edge, ...]]) -> Iterable[Ensemble]:
    # each group extends its prefix by one edge; prefixes precede extensions in ``groups``
    cache: dict[tuple, Ensemble] = {(): base}
    for grp in groups:
        ens = cache[grp[:-1]].with_edges([grp[-1]])
        if len(grp) < 3:
            cache[grp] = ens
        yield ens


@dataclass
class WitnessTable:
    """Proximity matrices of ``g + group`` for every candidate group."""

    groups: list[tuple[Edge, ...]]
    base: ProximityMatrix
    certify: np.ndarray  # (groups, n, n) values used for certification (conservative under MC)

    @classmethod
    def build(cls, g: InformationGraph, pool: Sequence[Edge], c: int, cfg: EstimatorConfig) -> "WitnessTable":
        pool = sorted(canon(*e) for e in pool)
        for e in pool:
            if g.has_edge(*e):
                raise ValueError(f"pool edge {e} already in graph")
        groups = _groups(pool, c)
        limit = cfg.exact_edge_limit
        if cfg.exact and g.m + c > limit:
            from .proximity import ExactLimitError

            raise ExactLimitError(f"exact witness checks need m + {c} <= {limit} edges")
        base_ens = build_ensemble(g, cfg)
        base = matrix_from_ensemble(base_ens, cfg)
        mats = np.empty((len(groups), g.n, g.n))
        for i, ens in enumerate(_group_ensembles(base_ens, groups)):
            mats[i] = matrix_from_ensemble(ens, cfg).lower()
        return cls(groups, base, mats)

    def instance(self, threshold: float) -> tuple[list[tuple[int, int]], HittingSetInstance]:
        n = self.base.n
        iu, ju = np.triu_indices(n, 1)
        deficient = [(int(i), int(j)) for i, j in zip(iu, ju) if self.base.values[i, j] < threshold]
        sets = [np.flatnonzero(self.certify[:, i, j] >= threshold).tolist() for i, j in deficient]
        return deficient, HittingSetInstance(self.groups, sets)


def enumerate_witnesses(g: InformationGraph, pair: tuple[int, int], b: float, c: int,
                        pool: Sequence[Edge], cfg: EstimatorConfig,
                        cap: int = DEFAULT_POOL_CAP) -> list[WitnessCandidate]:
    """All groups of at most ``c`` pool edges lifting ``prox(u, v)`` to ``b`` or more."""
    if c not in (1, 2, 3):
        raise ValueError("witness size must be 1, 2 or 3")
    if len(pool) > cap:
        raise PoolTooLargeError(f"pool of {len(pool)} edges exceeds cap {cap}")
    u, v = pair
    table = WitnessTable.build(g, pool, c, cfg)
    return [
        WitnessCandidate(grp, ((u, v, b),))
        for grp, mat in zip(table.groups, table.certify)
        if mat[u, v] >= b
    ]


def witness_parameters(variant: str, k: int, alpha: float) -> tuple[int, Callable[[float], float], int]:
    """(group size, target -> certification threshold, hitting-set size bound) for a variant."""
    if variant in ("i", WITNESS3):
        s = 7 * k - 6
        bound = math.comb(s, 3) + math.comb(s, 2) + s
        return 3, lambda x: 4 * x / (12 * k**4 + 3 * k**2), bound
    if variant in ("ii", WITNESS2):
        s = math.comb(2 * k, 2)
        bound = math.comb(s, 2) + s
        return 2, lambda x: x * alpha / (12 * k**2 + 3), bound
    raise ValueError(f"unknown witness variant {variant!r}")


def improve_witness(g: InformationGraph, k: int, epsilon: float, variant: str, cfg: EstimatorConfig,
                    pool: Sequence[Edge] | None = None, pool_cap: int | None = DEFAULT_POOL_CAP,
                    beta_star: float | None = None) -> AugmentationResult:
    if k < 1:
        raise ValueError("k must be at least 1")
    t0 = time.perf_counter()
    c, threshold, group_bound = witness_parameters(variant, k, g.alpha)
    algo = WITNESS3 if c == 3 else WITNESS2
    pool = default_pool(g, pool_cap) if pool is None else list(pool)
    table = WitnessTable.build(g, pool, c, cfg)
    before = broadcast_estimate(table.base)

    def predicate_for(tab: WitnessTable):
        def feasible(x: float):
            b = threshold(x)
            deficient, inst = tab.instance(b)
            if not deficient:
                return True, {"edges": (), "picks": [], "sets": 0, "threshold": b, "budget": 0}
            if any(not s for s in inst.sets):
                return False, None
            picks = greedy_hitting_set(inst)
            budget = group_bound * greedy_factor(len(inst.sets))
            edges = tuple(sorted({e for p in picks for e in tab.groups[p]}))
            sol = {"edges": edges, "picks": picks, "sets": len(inst.sets), "threshold": b, "budget": budget}
            return len(picks) <= budget, sol
        return feasible

    grid = SearchGrid(before.value, epsilon)
    verify = None
    if not cfg.exact:
        verify = predicate_for(WitnessTable.build(g, pool, c, cfg.reseeded()))
    idx, sol = feasibility_binary_search(grid, predicate_for(table), verify)
    sol = sol or {"edges": (), "picks": [], "sets": 0, "threshold": threshold(grid.value(idx)), "budget": 0}
    edges = sol["edges"]
    after = broadcast_estimate(proximity_matrix(g, cfg, edges))
    bound = None if beta_star is None else broadcast_guarantee(algo, beta_star, k, g.alpha, epsilon)
    return AugmentationResult(
        algorithm=algo, k=k, edges=edges, before=before, after=after, epsilon=epsilon, alpha=g.alpha,
        guarantee_bound=bound, edge_budget=c * max(sol["budget"], group_bound), grid_index=idx,
        diagnostics={
            "target": grid.value(idx), "threshold": sol["threshold"], "deficient_pairs": sol["sets"],
            "groups_picked": len(sol["picks"]), "group_budget": sol["budget"], "pool_size": len(pool),
            "grid_top": grid.top,
        },
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )
