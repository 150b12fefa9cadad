"""Proximity, broadcast and reach estimation.

Two estimators share one representation, an *ensemble* of vertex partitions
(connected components of sampled graphs):

* exact: every distinct partition reachable by keeping/dropping each edge,
  weighted by its probability. Subsets that induce the same partition are
  merged as soon as they coincide, so the sum over all ``2^m`` edge subsets is
  carried out without visiting them one by one.
* Monte Carlo: one partition per sampled graph, equal weights. Edge ``(a, b)``
  in sample ``s`` is kept iff a counter-based hash of ``(seed, s, a, b)`` falls
  below ``alpha``. Draws therefore depend only on the edge identity, which
  gives common random numbers across candidate augmentations for free and
  makes results independent of how samples are split across workers.

Labels are canonical: every vertex is labelled with the smallest vertex index
of its component.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .graph import Edge, InformationGraph, canon

EXACT = "exact"
MONTE_CARLO = "monte-carlo"
HOEFFDING_DELTA = 1e-6
TIE_RTOL = 1e-12


class ExactLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    method: str = EXACT
    samples: int = 10_000
    seed: int = 0
    exact_edge_limit: int = 20
    workers: int | None = None

    def __post_init__(self):
        if self.method not in (EXACT, MONTE_CARLO):
            raise ValueError(f"unknown estimation method {self.method!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.exact_edge_limit < 1:
            raise ValueError("exact_edge_limit must be positive")

    @property
    def exact(self) -> bool:
        return self.method == EXACT

    def half_width(self) -> float:
        return 0.0 if self.exact else hoeffding_half_width(self.samples)

    def reseeded(self, salt: int = 1) -> "EstimatorConfig":
        return replace(self, seed=int(_mix_scalar(self.seed ^ (0xA5A5A5A5 + salt))))


def hoeffding_half_width(samples: int, delta: float = HOEFFDING_DELTA) -> float:
    return math.sqrt(math.log(2.0 / delta) / (2.0 * samples))


@dataclass(frozen=True)
class ProximityEstimate:
    value: float
    half_width: float = 0.0
    samples: int = 0
    method: str = EXACT

    @property
    def lower(self) -> float:
        return self.value - self.half_width

    def as_dict(self) -> dict:
        return {"value": self.value, "half_width": self.half_width, "samples": self.samples, "method": self.method}


# -- counter-based randomness ---------------------------------------------------

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MUL1 = _U64(0xBF58476D1CE4E5B9)
_MUL2 = _U64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> _U64(30))) * _MUL1
    z = (z ^ (z >> _U64(27))) * _MUL2
    return z ^ (z >> _U64(31))


def _mix_scalar(x: int) -> int:
    return int(_splitmix(np.array([x & _MASK], dtype=_U64))[0])


def child_seeds(seed: int, start: int, stop: int) -> np.ndarray:
    """Per-sample seeds for sample indices ``start..stop-1``."""
    base = _U64(_mix_scalar(seed))
    return _splitmix(np.arange(start, stop, dtype=_U64) ^ base)


def edge_draws(children: np.ndarray, edge: Edge, alpha: float) -> np.ndarray:
    """Boolean mask: is ``edge`` kept in each sample with the given child seeds."""
    u, v = edge
    key = _U64(_mix_scalar((u << 32) | v))
    threshold = _U64(min(int(alpha * 2.0**64), _MASK))
    return _splitmix(children ^ key) < threshold


# -- partition ensembles ----------------------------------------------------------

def _label_dtype(n: int):
    return np.uint8 if n <= 255 else np.uint16 if n <= 65535 else np.uint32


def _merge_rows(labels: np.ndarray, rows: np.ndarray, a: int, b: int) -> np.ndarray:
    sub = labels[rows]
    la, lb = sub[:, a], sub[:, b]
    lo = np.minimum(la, lb)[:, None]
    hi = np.maximum(la, lb)[:, None]
    return np.where(sub == hi, lo, sub)


def _dedupe(labels: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    labels = np.ascontiguousarray(labels)
    keys = labels.view(np.dtype((np.void, labels.dtype.itemsize * labels.shape[1]))).ravel()
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights, minlength=len(first))
    return labels[first], merged


def _co_membership(labels: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    n = labels.shape[1]
    out = np.empty((n, n), dtype=np.float64 if weights is not None else np.int64)
    for i in range(n):
        same = labels == labels[:, i : i + 1]
        out[i] = weights @ same if weights is not None else same.sum(axis=0)
    return out


@dataclass(frozen=True)
class Ensemble:
    """Weighted partitions of the vertex set of ``graph_edges``.

    Exact ensembles carry probabilities in ``weights``; Monte Carlo ensembles
    carry per-sample ``children`` seeds and weight every sample equally.
    """

    n: int
    alpha: float
    graph_edges: frozenset
    labels: np.ndarray
    weights: np.ndarray | None = None
    children: np.ndarray | None = None
    seed: int = 0
    workers: int = 1

    @property
    def exact(self) -> bool:
        return self.weights is not None

    @property
    def samples(self) -> int:
        return 0 if self.exact else self.labels.shape[0]

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Ensemble":
        labels, weights, edges = self.labels, self.weights, set(self.graph_edges)
        for e in extra:
            e = canon(*e)
            if e in edges:
                continue
            edges.add(e)
            a, b = e
            if self.exact:
                labels, weights = _exact_add(labels, weights, a, b, self.alpha)
            else:
                labels = _mc_add(labels, self.children, e, self.alpha)
        return replace(self, graph_edges=frozenset(edges), labels=labels, weights=weights)

    def _chunks(self) -> list[slice]:
        s = self.labels.shape[0]
        w = max(1, min(self.workers, s // 2048 or 1))
        step = -(-s // w)
        return [slice(i, min(s, i + step)) for i in range(0, s, step)]

    def values(self) -> np.ndarray:
        """Symmetric matrix of pairwise proximities (diagonal 1)."""
        if self.exact:
            return _co_membership(self.labels, self.weights)
        return self.counts() / self.samples

    def counts(self) -> np.ndarray:
        chunks = self._chunks()
        if len(chunks) == 1:
            return _co_membership(self.labels, None)
        with ThreadPoolExecutor(len(chunks)) as ex:
            parts = list(ex.map(lambda c: _co_membership(self.labels[c], None), chunks))
        return sum(parts)

    def row(self, v: int) -> np.ndarray:
        same = self.labels == self.labels[:, v : v + 1]
        if self.exact:
            return self.weights @ same
        return same.sum(axis=0) / self.samples

    def pair(self, u: int, v: int) -> float:
        same = self.labels[:, u] == self.labels[:, v]
        if self.exact:
            return float(self.weights @ same)
        return float(same.sum()) / self.samples


def _exact_add(labels, weights, a, b, alpha):
    diff = labels[:, a] != labels[:, b]
    if not diff.any():
        return labels, weights
    rows = np.flatnonzero(diff)
    merged = _merge_rows(labels, rows, a, b)
    w = weights.copy()
    w[rows] *= 1.0 - alpha
    return _dedupe(np.concatenate([labels, merged]), np.concatenate([w, weights[rows] * alpha]))


def _mc_add(labels, children, e, alpha):
    a, b = e
    la, lb = labels[:, a], labels[:, b]
    keep = edge_draws(children, e, alpha) & (la != lb)
    if not keep.any():
        return labels
    # whole-matrix update is cheaper than gathering the affected rows
    hit = (labels == np.maximum(la, lb)[:, None]) & keep[:, None]
    return np.where(hit, np.minimum(la, lb)[:, None], labels)


def _resolve_workers(workers: int | None) -> int:
    return max(1, workers if workers else (os.cpu_count() or 1))


def _mc_chunk(n, edges, alpha, seed, start, stop):
    children = child_seeds(seed, start, stop)
    labels = np.tile(np.arange(n, dtype=_label_dtype(n)), (stop - start, 1))
    for e in edges:
        labels = _mc_add(labels, children, e, alpha)
    return labels, children


def build_ensemble(g: InformationGraph, cfg: EstimatorConfig, extra: Iterable[Sequence[int]] = ()) -> Ensemble:
    extra = [canon(*e) for e in extra]
    edges = list(g.edges) + [e for e in extra if not g.has_edge(*e)]
    workers = _resolve_workers(cfg.workers)
    n = g.n
    if cfg.exact:
        if len(edges) > cfg.exact_edge_limit:
            raise ExactLimitError(
                f"exact estimation limited to {cfg.exact_edge_limit} edges, graph has {len(edges)}"
            )
        labels = np.arange(n, dtype=_label_dtype(n))[None, :]
        weights = np.ones(1)
        for a, b in edges:
            labels, weights = _exact_add(labels, weights, a, b, g.alpha)
        return Ensemble(n, g.alpha, frozenset(edges), labels, weights=weights, seed=cfg.seed, workers=workers)
    s = cfg.samples
    nchunk = max(1, min(workers, s // 2048 or 1))
    step = -(-s // nchunk)
    bounds = [(i, min(s, i + step)) for i in range(0, s, step)]
    if len(bounds) == 1:
        parts = [_mc_chunk(n, edges, g.alpha, cfg.seed, 0, s)]
    else:
        with ThreadPoolExecutor(len(bounds)) as ex:
            parts = list(ex.map(lambda b: _mc_chunk(n, edges, g.alpha, cfg.seed, *b), bounds))
    labels = np.concatenate([p[0] for p in parts])
    children = np.concatenate([p[1] for p in parts])
    return Ensemble(n, g.alpha, frozenset(edges), labels, children=children, seed=cfg.seed, workers=workers)


# -- matrices and derived quantities -----------------------------------------------

@dataclass(frozen=True)
class ProximityMatrix:
    values: np.ndarray
    alpha: float
    half_width: float = 0.0
    samples: int = 0
    method: str = EXACT

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def floor(self) -> float:
        return self.alpha**self.n

    def estimate(self, u: int, v: int) -> ProximityEstimate:
        return ProximityEstimate(float(self.values[u, v]), self.half_width, self.samples, self.method)

    def lower(self) -> np.ndarray:
        """Entry-wise conservative values (value minus half-width)."""
        return self.values - self.half_width


def _finish(raw: np.ndarray, alpha: float, cfg: EstimatorConfig, samples: int) -> ProximityMatrix:
    n = raw.shape[0]
    vals = np.clip(raw.astype(np.float64), alpha**n, 1.0)
    np.fill_diagonal(vals, 1.0)
    return ProximityMatrix(vals, alpha, cfg.half_width(), samples, cfg.method)


def matrix_from_ensemble(ens: Ensemble, cfg: EstimatorConfig) -> ProximityMatrix:
    return _finish(ens.values(), ens.alpha, cfg, ens.samples)


def proximity_matrix(g: InformationGraph, cfg: EstimatorConfig, extra: Iterable[Sequence[int]] = ()) -> ProximityMatrix:
    """Pairwise proximities of ``g + extra``; Monte Carlo shares one sample stream across all pairs."""
    return matrix_from_ensemble(build_ensemble(g, cfg, extra), cfg)


def exact_proximity(g: InformationGraph, u: int, v: int, edge_limit: int = 20) -> ProximityEstimate:
    if u == v:
        return ProximityEstimate(1.0)
    cfg = EstimatorConfig(EXACT, exact_edge_limit=edge_limit)
    return ProximityEstimate(build_ensemble(g, cfg).pair(u, v))


def mc_proximity(g: InformationGraph, u: int, v: int, cfg: EstimatorConfig) -> ProximityEstimate:
    cfg = replace(cfg, method=MONTE_CARLO)
    if u == v:
        return ProximityEstimate(1.0, cfg.half_width(), cfg.samples, MONTE_CARLO)
    value = build_ensemble(g, cfg).pair(u, v)
    return ProximityEstimate(max(value, g.alpha**g.n), cfg.half_width(), cfg.samples, MONTE_CARLO)


def _first_min(candidates: Iterable[tuple], values: Sequence[float]):
    best = min(values)
    tol = TIE_RTOL * max(abs(best), 1e-300)
    for c, v in zip(candidates, values):
        if v <= best + tol:
            return c, best


def broadcast_value(pm: ProximityMatrix) -> tuple[float, tuple[int, int]]:
    """Minimum off-diagonal proximity and the lexicographically smallest pair attaining it."""
    n = pm.n
    if n < 2:
        return 1.0, (0, 0)
    iu, ju = np.triu_indices(n, 1)
    vals = pm.values[iu, ju]
    pair, best = _first_min(zip(iu.tolist(), ju.tolist()), vals.tolist())
    return float(best), pair


def reach_value(pm: ProximityMatrix, source: int) -> tuple[float, int]:
    others = [u for u in range(pm.n) if u != source]
    if not others:
        return 1.0, source
    u, best = _first_min(others, [pm.values[source, u] for u in others])
    return float(best), u


def broadcast_estimate(pm: ProximityMatrix) -> ProximityEstimate:
    return ProximityEstimate(broadcast_value(pm)[0], pm.half_width, pm.samples, pm.method)


def reach_estimate(pm: ProximityMatrix, source: int) -> ProximityEstimate:
    return ProximityEstimate(reach_value(pm, source)[0], pm.half_width, pm.samples, pm.method)


@dataclass(frozen=True)
class ImpliedMetric:
    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def implied_metric(pm: ProximityMatrix) -> ImpliedMetric:
    """Distances ``-log2 prox``; zero Monte Carlo estimates are clamped at ``alpha**n`` first."""
    d = -np.log2(np.maximum(pm.values, pm.floor))
    d = np.maximum(d, 0.0)
    np.fill_diagonal(d, 0.0)
    return ImpliedMetric(d)


def neighborhood(g: InformationGraph, v: int, x: float, cfg: EstimatorConfig,
                 pm: ProximityMatrix | None = None) -> set[int]:
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    row = (pm if pm is not None else proximity_matrix(g, cfg)).values[v]
    return {u for u in range(g.n) if u == v or row[u] >= x}
