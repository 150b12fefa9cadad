"""Augmentation results and the approximation guarantees they are checked against."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .graph import Edge
from .proximity import ProximityEstimate

BICRITERIA = "bicriteria"
SINGLE = "single"
WITNESS3 = "witness3"
WITNESS2 = "witness2"
SUBMOD = "submod"
BROADCAST_ALGOS = (BICRITERIA, SINGLE, WITNESS3, WITNESS2, SUBMOD)


@dataclass
class AugmentationResult:
    algorithm: str
    k: int
    edges: tuple[Edge, ...]
    before: ProximityEstimate
    after: ProximityEstimate
    epsilon: float | None = None
    alpha: float | None = None
    guarantee_bound: float | None = None
    edge_budget: int | None = None
    grid_index: int | None = None
    source: int | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)
    runtime_ms: float = 0.0

    @property
    def edges_count(self) -> int:
        return len(self.edges)


def broadcast_guarantee(algo: str, beta_star: float, k: int, alpha: float, epsilon: float = 0.5) -> float:
    """Proven lower bound on the achieved broadcast given the optimum ``beta_star``."""
    if algo == BICRITERIA:
        return beta_star**4 * alpha**2 / (1 + 2 * k * alpha) ** 4
    if algo == SINGLE:
        return beta_star**4 * alpha**2 / 16 ** (k + 1)
    if algo == WITNESS3:
        return 4 * beta_star / ((1 + epsilon) * (12 * k**4 + 3 * k**2))
    if algo == WITNESS2:
        return beta_star * alpha / ((1 + epsilon) * (12 * k**2 + 3))
    if algo == SUBMOD:
        return beta_star * alpha ** (2 + epsilon) / ((1 + epsilon) * (24 * k**2 + 6))
    raise ValueError(f"unknown algorithm {algo!r}")


def reach_guarantee(upsilon_star: float, k: int, alpha: float, epsilon: float = 0.5) -> float:
    return max(
        upsilon_star / ((1 + epsilon) * (2 * k + 2)),
        upsilon_star * alpha / ((1 + epsilon) * (1 + 2 * k * alpha)),
    )


def edge_limit(algo: str, k: int) -> int | None:
    """Fixed edge budgets; the logarithmic ones depend on the instance and live on the result."""
    return {BICRITERIA: 2 * k - 1, SINGLE: k}.get(algo)


def greedy_factor(nsets: int) -> int:
    """Ceiling of the greedy hitting-set factor ``ln(#sets) + 1``."""
    return math.ceil(math.log(nsets) + 1) if nsets > 0 else 1
