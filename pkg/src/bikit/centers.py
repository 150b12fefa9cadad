"""Farthest-first k-center selection on the implied metric and star construction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Edge, InformationGraph, canon
from .proximity import ImpliedMetric


@dataclass(frozen=True)
class CenterSelection:
    centers: tuple[int, ...]
    radius: float
    assignment: tuple[int, ...]  # nearest center of each vertex


def gonzalez_centers(metric: ImpliedMetric, count: int) -> CenterSelection:
    """Farthest-first traversal starting at vertex 0; ties go to the smaller index."""
    if count < 1:
        raise ValueError("count must be at least 1")
    d = metric.dist
    n = d.shape[0]
    centers = [0]
    nearest = d[0].copy()
    owner = np.zeros(n, dtype=int)
    while len(centers) < min(count, n):
        nxt = int(np.argmax(nearest))  # argmax returns the first maximal index
        centers.append(nxt)
        closer = d[nxt] < nearest
        nearest = np.where(closer, d[nxt], nearest)
        owner = np.where(closer, nxt, owner)
        nearest[nxt] = 0.0
        owner[nxt] = nxt
    return CenterSelection(tuple(centers), float(nearest.max()), tuple(int(x) for x in owner))


def star_edges(g: InformationGraph, hubs: Sequence[int]) -> tuple[Edge, ...]:
    """Edges joining ``hubs[0]`` to every other hub, skipping edges already in ``g``."""
    if not hubs:
        raise ValueError("need at least one hub")
    if len(set(hubs)) != len(hubs):
        raise ValueError("hubs must be distinct")
    root = hubs[0]
    return tuple(canon(root, h) for h in hubs[1:] if not g.has_edge(root, h))
