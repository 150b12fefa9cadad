"""Broadcast improvement through k-center on the implied metric.

``improve_bicriteria`` picks ``2k`` centers and joins them by a star
(at most ``2k - 1`` edges); ``improve_single_criteria`` picks ``k + 1``
centers and stays within ``k`` edges.
"""
from __future__ import annotations

import math
import time

from .centers import gonzalez_centers, star_edges
from .graph import InformationGraph
from .proximity import EstimatorConfig, broadcast_estimate, implied_metric, proximity_matrix
from .results import BICRITERIA, SINGLE, AugmentationResult, broadcast_guarantee


def _run(g: InformationGraph, k: int, cfg: EstimatorConfig, count: int, algo: str,
         beta_star: float | None) -> AugmentationResult:
    if k < 1:
        raise ValueError("k must be at least 1")
    t0 = time.perf_counter()
    pm = proximity_matrix(g, cfg)
    sel = gonzalez_centers(implied_metric(pm), count)
    edges = star_edges(g, sel.centers)
    after = broadcast_estimate(proximity_matrix(g, cfg, edges))
    diag = {"centers": list(sel.centers), "radius": sel.radius}
    if algo == BICRITERIA:
        # with a 2-approximate radius, beta* <= 2^(-radius/2) (1 + 2k alpha)
        diag["beta_star_upper"] = min(1.0, 2 ** (-sel.radius / 2) * (1 + 2 * k * g.alpha))
    else:
        diag["mu"] = sel.radius
        diag["d_prime_bound"] = 2 * sel.radius - 2 * math.log2(g.alpha)
        diag["d_prime"] = -math.log2(max(after.value, g.alpha**g.n))
    bound = None if beta_star is None else broadcast_guarantee(algo, beta_star, k, g.alpha)
    return AugmentationResult(
        algorithm=algo, k=k, edges=edges, before=broadcast_estimate(pm), after=after,
        alpha=g.alpha, guarantee_bound=bound, edge_budget=2 * k - 1 if algo == BICRITERIA else k,
        diagnostics=diag, runtime_ms=(time.perf_counter() - t0) * 1e3,
    )


def improve_bicriteria(g: InformationGraph, k: int, cfg: EstimatorConfig,
                       beta_star: float | None = None) -> AugmentationResult:
    return _run(g, k, cfg, 2 * k, BICRITERIA, beta_star)


def improve_single_criteria(g: InformationGraph, k: int, cfg: EstimatorConfig,
                            beta_star: float | None = None) -> AugmentationResult:
    return _run(g, k, cfg, k + 1, SINGLE, beta_star)
