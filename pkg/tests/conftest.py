import itertools

import pytest

from bikit.graph import GraphFamilySpec, InformationGraph, generate
from bikit.proximity import EXACT, EstimatorConfig


def subset_proximity(n, edges, alpha):
    """Independent reference: sum over all 2^m edge subsets with a small union-find."""
    m = len(edges)
    out = [[0.0] * n for _ in range(n)]
    for mask in range(1 << m):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        kept = 0
        for i, (a, b) in enumerate(edges):
            if mask >> i & 1:
                kept += 1
                parent[find(a)] = find(b)
        w = alpha**kept * (1 - alpha) ** (m - kept)
        roots = [find(x) for x in range(n)]
        for u in range(n):
            for v in range(n):
                if roots[u] == roots[v]:
                    out[u][v] += w
    return out


def random_connected(rng, n_lo=3, n_hi=7, alpha=None, max_edges=14):
    """Random connected graph: spanning tree plus random extra edges."""
    n = int(rng.integers(n_lo, n_hi + 1))
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    pairs = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    rng.shuffle(pairs)
    extra = int(rng.integers(0, max(1, min(len(pairs), max_edges - len(edges)) + 1)))
    edges |= set(map(tuple, pairs[:extra]))
    a = float(rng.choice([0.3, 0.5, 0.7])) if alpha is None else alpha
    return InformationGraph(n, sorted(edges), a)


@pytest.fixture
def exact():
    return EstimatorConfig(EXACT)


@pytest.fixture
def p3():
    return InformationGraph(3, [(0, 1), (1, 2)], 0.5)


@pytest.fixture
def p4():
    return InformationGraph(4, [(0, 1), (1, 2), (2, 3)], 0.5)


@pytest.fixture
def triangle():
    return InformationGraph(3, [(0, 1), (1, 2), (0, 2)], 0.5)


@pytest.fixture
def c4():
    return generate(GraphFamilySpec("cycle", alpha=0.5, n=4))


# acceptance criteria record one line each; printed at the end of the run
ACCEPTANCE: list[str] = []


def record(number: int, ok: bool, text: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {text}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
