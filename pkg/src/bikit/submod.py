"""Star-restricted greedy driven by a log-deficit potential.

For a target ``x`` the threshold is ``beta' = x alpha^2 / (12k^2 + 3)``. Pairs
below ``beta'/2`` are active; each contributes ``max(0, mu)`` where
``mu = -log2 p(u,i) - log2 p(u,j) + log2(beta'/2)`` and ``p`` is the proximity
row of the center ``u`` after the chosen star edges. The greedy adds the edge
at ``u`` that lowers the potential most until it drops below
``eps * log2(1/alpha)``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Edge, GraphFamilySpec, InformationGraph, arm_tips, canon, generate
from .proximity import (
    EXACT,
    Ensemble,
    EstimatorConfig,
    broadcast_estimate,
    broadcast_value,
    build_ensemble,
    matrix_from_ensemble,
    proximity_matrix,
)
from .results import SUBMOD, AugmentationResult, broadcast_guarantee
from .witness import SearchGrid, feasibility_binary_search


@dataclass
class PotentialState:
    center: int
    beta_prime: float
    active: list[tuple[int, int]]
    floor: float
    edges: list[Edge] = field(default_factory=list)
    row: np.ndarray | None = None

    @property
    def psi(self) -> float:
        return potential_value(self)


def _deficits(row: np.ndarray, active_i: np.ndarray, active_j: np.ndarray, beta_prime: float,
              floor: float) -> np.ndarray:
    logs = -np.log2(np.maximum(row, floor))
    return logs[..., active_i] + logs[..., active_j] + math.log2(beta_prime / 2)


def mu_value(state: PotentialState, i: int, j: int) -> float:
    r = state.row
    return float(-math.log2(max(r[i], state.floor)) - math.log2(max(r[j], state.floor))
                 + math.log2(state.beta_prime / 2))


def potential_value(state: PotentialState) -> float:
    if not state.active:
        return 0.0
    ai, aj = np.array(state.active).T
    mu = _deficits(state.row, ai, aj, state.beta_prime, state.floor)
    return float(np.maximum(mu, 0.0).sum())


def initial_state(g: InformationGraph, u: int, beta_prime: float, cfg: EstimatorConfig,
                  ens: Ensemble | None = None) -> PotentialState:
    ens = ens if ens is not None else build_ensemble(g, cfg)
    pm = matrix_from_ensemble(ens, cfg)
    iu, ju = np.triu_indices(g.n, 1)
    below = pm.values[iu, ju] < beta_prime / 2
    active = list(zip(iu[below].tolist(), ju[below].tolist()))
    return PotentialState(u, beta_prime, active, g.alpha**g.n, row=pm.values[u].copy())


@dataclass
class StarRun:
    center: int
    edges: tuple[Edge, ...]
    iterations: int
    potentials: list[float]
    ok: bool


def greedy_star_for_center(g: InformationGraph, u: int, beta_prime: float, epsilon: float, budget: int,
                           cfg: EstimatorConfig, ens: Ensemble | None = None) -> StarRun:
    """Greedy star at ``u``; ``ok`` is False when the budget (or the candidate supply) runs out."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    ens = ens if ens is not None else build_ensemble(g, cfg)
    state = initial_state(g, u, beta_prime, cfg, ens)
    stop = epsilon * math.log2(1 / g.alpha)
    psi = potential_value(state)
    trace = [psi]
    if not state.active:
        return StarRun(u, (), 0, trace, True)
    ai, aj = np.array(state.active).T
    cands = [w for w in range(g.n) if w != u and not g.has_edge(u, w)]
    while psi > stop:
        if len(state.edges) >= budget or not cands:
            return StarRun(u, tuple(sorted(state.edges)), len(state.edges), trace, False)
        rows = np.array([ens.with_edges([(u, w)]).row(u) for w in cands])
        # clipping to the floor matches the matrix path
        rows = np.clip(rows, state.floor, 1.0)
        rows[:, u] = 1.0
        psis = np.maximum(_deficits(rows, ai, aj, beta_prime, state.floor), 0.0).sum(axis=1)
        best = int(np.argmin(psis))  # first minimum, i.e. smallest far endpoint
        w = cands.pop(best)
        ens = ens.with_edges([(u, w)])
        state.edges.append(canon(u, w))
        state.row = rows[best]
        psi = float(psis[best])
        trace.append(psi)
    return StarRun(u, tuple(sorted(state.edges)), len(state.edges), trace, True)


def iteration_budget(n: int, k: int, epsilon: float, alpha: float) -> int:
    """Explicit stand-in for the O(k log n) iteration bound.

    The larger of the published-style formula and the bound that follows from a
    ``(1 - 1/2k)`` decline per step starting from ``Psi <= n^3 log2(1/alpha)``.
    """
    stop = epsilon * math.log2(1 / alpha)
    a = math.ceil(2 * k * math.log(max(2 * n**3 / (epsilon * stop), 1.0))) + 1
    b = math.ceil(2 * k * math.log(max(n**3 / epsilon, 1.0))) + 1
    return max(a, b)


def improve_submod(g: InformationGraph, k: int, epsilon: float, cfg: EstimatorConfig,
                   beta_star: float | None = None) -> AugmentationResult:
    if k < 1:
        raise ValueError("k must be at least 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    t0 = time.perf_counter()
    budget = iteration_budget(g.n, k, epsilon, g.alpha)
    base = build_ensemble(g, cfg)
    before = broadcast_estimate(matrix_from_ensemble(base, cfg))

    def predicate(ens: Ensemble, run_cfg: EstimatorConfig):
        def feasible(x: float):
            bp = x * g.alpha**2 / (12 * k**2 + 3)
            runs = [greedy_star_for_center(g, u, bp, epsilon, budget, run_cfg, ens) for u in range(g.n)]
            ok = [r for r in runs if r.ok]
            if not ok:
                return False, None
            return True, min(ok, key=lambda r: (len(r.edges), r.center))
        return feasible

    grid = SearchGrid(before.value, epsilon)
    verify = None
    if not cfg.exact:
        alt = cfg.reseeded()
        verify = predicate(build_ensemble(g, alt), alt)
    idx, run = feasibility_binary_search(grid, predicate(base, cfg), verify)
    edges = run.edges if run is not None else ()
    after = broadcast_estimate(proximity_matrix(g, cfg, edges))
    bound = None if beta_star is None else broadcast_guarantee(SUBMOD, beta_star, k, g.alpha, epsilon)
    diag = {"target": grid.value(idx), "beta_prime": grid.value(idx) * g.alpha**2 / (12 * k**2 + 3),
            "iteration_budget": budget, "grid_top": grid.top}
    if run is not None:
        diag.update(center=run.center, iterations=run.iterations, potentials=run.potentials)
    return AugmentationResult(
        algorithm=SUBMOD, k=k, edges=edges, before=before, after=after, epsilon=epsilon, alpha=g.alpha,
        guarantee_bound=bound, edge_budget=budget, grid_index=idx, diagnostics=diag,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
    )


@dataclass(frozen=True)
class NonSubmodularWitness:
    length: int
    graph: InformationGraph
    e1: Edge
    e2: Edge
    gain_alone: float     # beta(g + e1) - beta(g)
    gain_after_e2: float  # beta(g + e1 + e2) - beta(g + e2)


def broadcast_non_submodularity(alpha: float = 0.5, lengths=range(2, 21, 2),
                                edge_limit: int = 24) -> NonSubmodularWitness | None:
    """Scan even arm lengths of a 3-leaf subdivided star for a violation of submodularity.

    With arm tips ``v1, v2, v3`` the edges are ``e1 = v1 v3`` and ``e2 = v2 v3``.
    Returns the first length where adding ``e1`` helps strictly more after ``e2``.
    """
    cfg = EstimatorConfig(EXACT, exact_edge_limit=edge_limit)
    for ell in lengths:
        g = generate(GraphFamilySpec("subdivided-star", alpha=alpha, leaves=3, length=ell))
        if g.m + 2 > edge_limit:
            break
        v1, v2, v3 = arm_tips(3, ell)
        e1, e2 = canon(v1, v3), canon(v2, v3)

        def beta(extra):
            return broadcast_value(proximity_matrix(g, cfg, extra))[0]

        b0, b1, b2, b12 = beta(()), beta([e1]), beta([e2]), beta([e1, e2])
        if b1 - b0 < b12 - b2:
            return NonSubmodularWitness(ell, g, e1, e2, b1 - b0, b12 - b2)
    return None
