"""Information graphs: immutable representation, generators and edge-list I/O."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphParseError(GraphError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class ConnectivityError(GraphError):
    def __init__(self, a: int, b: int):
        super().__init__(f"graph is disconnected: vertices {a} and {b} lie in different components")
        self.components = (a, b)


class AlphaRangeError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


def canon(u: int, v: int) -> Edge:
    u, v = int(u), int(v)
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class InformationGraph:
    """Connected undirected graph with a uniform activation probability.

    Edges are kept sorted and canonical ``(min, max)``. Construction validates
    every invariant, so holding an instance means holding a valid graph.
    """

    n: int
    edges: tuple[Edge, ...]
    alpha: float
    _edge_set: frozenset = field(init=False, repr=False, compare=False)
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[Sequence[int]], alpha: float, check_connected: bool = True):
        n = int(n)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        alpha = float(alpha)
        if not (0.0 < alpha < 1.0):
            raise AlphaRangeError(f"alpha must lie in (0, 1), got {alpha!r}")
        seen: set[Edge] = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            c = canon(u, v)
            if c in seen:
                raise DuplicateEdgeError(f"duplicate edge {c}")
            seen.add(c)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "_edge_set", frozenset(seen))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if check_connected:
            comps = self.components()
            if len(comps) > 1:
                raise ConnectivityError(comps[0][0], comps[1][0])

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and canon(u, v) in self._edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def non_edges(self) -> list[Edge]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if (u, v) not in self._edge_set]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def __add__(self, other: Iterable[Sequence[int]]) -> "InformationGraph":
        return add_edges(self, other)


def edge_addition(g: InformationGraph, pairs: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    """Validate ``pairs`` as an edge addition for ``g`` and return it canonical and sorted."""
    out: set[Edge] = set()
    for p in pairs:
        u, v = p
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise GraphError(f"pair ({u}, {v}) out of range for n={g.n}")
        c = canon(u, v)
        if c in out:
            raise DuplicateEdgeError(f"pair {c} listed twice")
        if g.has_edge(*c):
            raise DuplicateEdgeError(f"edge {c} already present in the graph")
        out.add(c)
    return tuple(sorted(out))


def add_edges(g: InformationGraph, pairs: Iterable[Sequence[int]]) -> InformationGraph:
    s = edge_addition(g, pairs)
    return InformationGraph(g.n, g.edges + s, g.alpha, check_connected=False)


# -- file format ------------------------------------------------------------

def format_graph(g: InformationGraph) -> str:
    lines = [f"{g.n} {g.alpha:.17g}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> InformationGraph:
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphParseError(lineno, "expected header 'n alpha'")
            try:
                n = int(parts[0])
                alpha = float(parts[1])
            except ValueError:
                raise GraphParseError(lineno, f"malformed header {line!r}") from None
            if n < 1:
                raise GraphParseError(lineno, "vertex count must be positive")
            if not (0.0 < alpha < 1.0) or math.isnan(alpha):
                raise AlphaRangeError(f"line {lineno}: alpha must lie in (0, 1), got {parts[1]}")
            header = (n, alpha)
            continue
        if len(parts) != 2:
            raise GraphParseError(lineno, "expected edge line 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(lineno, f"malformed edge {line!r}") from None
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphParseError(lineno, f"vertex out of range in {line!r}")
        if u > v:
            raise GraphParseError(lineno, f"edge must be written with u < v, got {line!r}")
        edges.append((u, v))
    if header is None:
        raise GraphParseError(0, "empty graph file")
    if len(set(edges)) != len(edges):
        raise DuplicateEdgeError("duplicate edge in file")
    return InformationGraph(header[0], edges, header[1])


def load_graph(path: str | Path) -> InformationGraph:
    return parse_graph(Path(path).read_text())


def save_graph(g: InformationGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


# -- generators ---------------------------------------------------------------

FAMILIES = ("path", "cycle", "clique", "star", "subdivided-star", "binary-tree", "random", "setcover-gadget")


@dataclass(frozen=True)
class GraphFamilySpec:
    """Parameters for :func:`generate`.

    ``n`` is used by path, cycle, clique, star (``n`` vertices including the
    hub) and random. ``leaves`` and ``length`` parametrise the subdivided star;
    ``depth`` the complete binary tree; ``p`` the random family. The set-cover
    gadget takes ``sets`` (1-based element ids over ``1..m``), ``length`` and an
    optional ``planted`` list of set indices (0-based) forming a cover.
    """

    family: str
    alpha: float = 0.5
    n: int = 0
    leaves: int = 0
    length: int = 0
    depth: int = 0
    p: float = 0.0
    sets: tuple[tuple[int, ...], ...] = ()
    m: int = 0
    planted: tuple[int, ...] = ()


@dataclass(frozen=True)
class GadgetLayout:
    pivot: int
    set_vertices: tuple[int, ...]
    element_vertices: tuple[int, ...]
    planted_edges: tuple[Edge, ...]


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def _gadget(spec: GraphFamilySpec) -> tuple[int, list[Edge], GadgetLayout]:
    ell, sets, m = spec.length, spec.sets, spec.m
    _need(ell >= 2 and ell % 2 == 0, "setcover-gadget requires an even path length >= 2")
    _need(len(sets) >= 1 and m >= 1, "setcover-gadget requires at least one set and one element")
    for s in sets:
        _need(all(1 <= x <= m for x in s), f"set {s} has elements outside 1..{m}")
    for i in spec.planted:
        _need(0 <= i < len(sets), f"planted set index {i} out of range")
    pivot = 0
    set_v = list(range(1, 1 + len(sets)))
    elem_v = list(range(1 + len(sets), 1 + len(sets) + m))
    nxt = 1 + len(sets) + m
    edges: list[Edge] = []

    def path(a: int, b: int) -> None:
        nonlocal nxt
        prev = a
        for _ in range(ell - 1):
            edges.append(canon(prev, nxt))
            prev = nxt
            nxt += 1
        edges.append(canon(prev, b))

    for i, j in combinations(range(len(sets)), 2):
        path(set_v[i], set_v[j])
    for i, s in enumerate(sets):
        for x in sorted(set(s)):
            path(set_v[i], elem_v[x - 1])
    for i in range(len(sets)):
        path(pivot, set_v[i])
    planted = tuple(sorted(canon(pivot, set_v[i]) for i in set(spec.planted)))
    return nxt, edges, GadgetLayout(pivot, tuple(set_v), tuple(elem_v), planted)


def gadget_layout(spec: GraphFamilySpec) -> GadgetLayout:
    return _gadget(spec)[2]


def generate(spec: GraphFamilySpec, seed: int = 0) -> InformationGraph:
    """Build the graph described by ``spec``; only the random family uses ``seed``."""
    f = spec.family
    if f == "path":
        _need(spec.n >= 2, "path needs n >= 2")
        return InformationGraph(spec.n, [(i, i + 1) for i in range(spec.n - 1)], spec.alpha)
    if f == "cycle":
        _need(spec.n >= 3, "cycle needs n >= 3")
        return InformationGraph(spec.n, [(i, (i + 1) % spec.n) for i in range(spec.n)], spec.alpha)
    if f == "clique":
        _need(spec.n >= 2, "clique needs n >= 2")
        return InformationGraph(spec.n, combinations(range(spec.n), 2), spec.alpha)
    if f == "star":
        _need(spec.n >= 2, "star needs n >= 2")
        return InformationGraph(spec.n, [(0, i) for i in range(1, spec.n)], spec.alpha)
    if f == "subdivided-star":
        _need(spec.leaves >= 1 and spec.length >= 1, "subdivided-star needs leaves >= 1 and length >= 1")
        # center 0, then each arm's vertices in order; the arm tip is its last vertex
        edges, nxt = [], 1
        for _ in range(spec.leaves):
            prev = 0
            for _ in range(spec.length):
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
        return InformationGraph(nxt, edges, spec.alpha)
    if f == "binary-tree":
        _need(spec.depth >= 1, "binary-tree needs depth >= 1")
        n = 2 ** (spec.depth + 1) - 1
        return InformationGraph(n, [((i - 1) // 2, i) for i in range(1, n)], spec.alpha)
    if f == "random":
        _need(spec.n >= 2 and 0.0 < spec.p <= 1.0, "random needs n >= 2 and 0 < p <= 1")
        rng = np.random.default_rng(seed)
        pairs = list(combinations(range(spec.n), 2))
        for _ in range(1000):
            keep = rng.random(len(pairs)) < spec.p
            edges = [e for e, k in zip(pairs, keep) if k]
            g = InformationGraph(spec.n, edges, spec.alpha, check_connected=False)
            if g.is_connected():
                return g
        raise GraphError(f"no connected draw in 1000 attempts for n={spec.n}, p={spec.p}")
    if f == "setcover-gadget":
        n, edges, _ = _gadget(spec)
        return InformationGraph(n, edges, spec.alpha)
    raise GraphError(f"unknown family {f!r}; expected one of {', '.join(FAMILIES)}")


def arm_tips(leaves: int, length: int) -> list[int]:
    """Tip vertex of each arm of ``generate(subdivided-star)``."""
    return [length * (i + 1) for i in range(leaves)]
