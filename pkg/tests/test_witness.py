import itertools
import math

import numpy as np
import pytest

from bikit.graph import GraphFamilySpec, generate
from bikit.oracle import brute_force_broadcast_opt
from bikit.proximity import MONTE_CARLO, EstimatorConfig, proximity_matrix
from bikit.results import broadcast_guarantee
from bikit.witness import (
    HittingSetInstance,
    InfeasibleError,
    PoolTooLargeError,
    SearchGrid,
    WitnessTable,
    default_pool,
    enumerate_witnesses,
    feasibility_binary_search,
    greedy_hitting_set,
    improve_witness,
    witness_parameters,
)

from conftest import random_connected


def test_greedy_examples():
    assert greedy_hitting_set(HittingSetInstance("abc", [[0, 1], [1, 2], [0]])) == [0, 1]
    assert greedy_hitting_set(HittingSetInstance(range(5), [[3, 1], [3], [0, 3, 4]])) == [3]
    assert greedy_hitting_set(HittingSetInstance(range(3), [[2], [0], [1]])) == [0, 1, 2]
    with pytest.raises(InfeasibleError):
        greedy_hitting_set(HittingSetInstance(range(3), [[0], []]))


def test_greedy_hits_everything_within_ln_factor():
    rng = np.random.default_rng(0)
    for _ in range(100):
        u, s = int(rng.integers(2, 8)), int(rng.integers(1, 12))
        sets = [sorted(set(rng.choice(u, int(rng.integers(1, u + 1))).tolist())) for _ in range(s)]
        picks = greedy_hitting_set(HittingSetInstance(range(u), sets))
        assert all(set(x) & set(picks) for x in sets)
        opt = next(r for r in range(1, u + 1)
                   if any(all(set(x) & set(c) for x in sets) for c in itertools.combinations(range(u), r)))
        assert len(picks) <= opt * math.ceil(math.log(s) + 1)


def test_grid():
    g = SearchGrid(0.125, 0.5)
    assert g.value(0) == 0.125
    assert g.value(g.top) <= 1 < 0.125 * 1.5 ** (g.top + 1)
    assert SearchGrid(1.0, 0.5).top == 0
    with pytest.raises(ValueError):
        SearchGrid(0.5, 0)


def test_binary_search_edges():
    grid = SearchGrid(0.01, 0.5)
    assert feasibility_binary_search(grid, lambda x: (True, x))[0] == grid.top
    assert feasibility_binary_search(grid, lambda x: (x == grid.value(0), x))[0] == 0
    cut = grid.value(4)
    idx, sol = feasibility_binary_search(grid, lambda x: (x <= cut, x))
    assert idx == 4 and sol == cut


def test_binary_search_verification_steps_down():
    grid = SearchGrid(0.01, 0.5)
    idx, _ = feasibility_binary_search(grid, lambda x: (True, x), verify=lambda x: (x <= grid.value(2), x))
    assert idx == 2


def test_enumerate_witness_examples(p3, p4, exact):
    ws = enumerate_witnesses(p3, (0, 2), 0.6, 1, p3.non_edges(), exact)
    assert [w.edges for w in ws] == [((0, 2),)]
    ws = enumerate_witnesses(p4, (0, 3), 0.5, 1, [(0, 3)], exact)
    assert [w.edges for w in ws] == [((0, 3),)]
    with pytest.raises(PoolTooLargeError):
        enumerate_witnesses(p4, (0, 3), 0.5, 1, p4.non_edges(), exact, cap=2)


def test_enumerate_witnesses_matches_direct_evaluation(exact):
    rng = np.random.default_rng(1)
    for _ in range(10):
        g = random_connected(rng, 4, 6)
        pool = g.non_edges()[:6]
        u, v = 0, g.n - 1
        b = float(rng.uniform(0.2, 0.9))
        got = {w.edges for w in enumerate_witnesses(g, (u, v), b, 2, pool, exact)}
        want = {grp for r in (1, 2) for grp in itertools.combinations(sorted(pool), r)
                if proximity_matrix(g, exact, grp).values[u, v] >= b}
        assert got == want


def test_linear_scan_agrees(p4, exact):
    # every grid target feasible below the returned one, first infeasible right above
    c, threshold, bound = witness_parameters("ii", 1, p4.alpha)
    r = improve_witness(p4, 1, 0.5, "ii", exact)
    table = WitnessTable.build(p4, p4.non_edges(), c, exact)
    grid = SearchGrid(r.before.value, 0.5)
    feas = []
    for i in range(grid.top + 1):
        defi, inst = table.instance(threshold(grid.value(i)))
        ok = all(inst.sets) and (not defi or len(greedy_hitting_set(inst)) <= bound * math.ceil(math.log(len(defi)) + 1))
        feas.append(ok)
    assert feas[r.grid_index]
    assert r.grid_index == grid.top or not feas[r.grid_index + 1]


def test_p4_and_path6(p4, exact):
    beta_star, _ = brute_force_broadcast_opt(p4, 1)
    r = improve_witness(p4, 1, 0.5, "ii", exact, beta_star=beta_star)
    assert r.after.value >= beta_star * 0.5 / (1.5 * 15)
    g = generate(GraphFamilySpec("path", n=6))
    beta_star, _ = brute_force_broadcast_opt(g, 1)
    r = improve_witness(g, 1, 0.5, "i", exact, beta_star=beta_star)
    assert r.edges_count <= r.edge_budget
    assert r.after.value >= 4 * beta_star / (1.5 * 15)


def test_clique(exact):
    g = generate(GraphFamilySpec("clique", n=5))
    r = improve_witness(g, 1, 0.5, "i", exact)
    assert r.edges == ()


def test_deficient_pairs_reach_threshold(exact):
    rng = np.random.default_rng(2)
    for _ in range(15):
        g = random_connected(rng, 4, 6)
        for variant in ("i", "ii"):
            c, threshold, _ = witness_parameters(variant, 1, g.alpha)
            r = improve_witness(g, 1, 0.5, variant, exact)
            b = r.diagnostics["threshold"]
            assert b == pytest.approx(threshold(r.diagnostics["target"]))
            before = proximity_matrix(g, exact).values
            after = proximity_matrix(g, exact, r.edges).values
            assert np.all(after[before < b] >= b - 1e-12)
            assert r.edges_count <= r.edge_budget


def test_guarantee_vs_oracle(exact):
    rng = np.random.default_rng(3)
    for _ in range(12):
        g = random_connected(rng, 3, 6)
        beta_star, _ = brute_force_broadcast_opt(g, 1)
        for variant, tag in (("i", "witness3"), ("ii", "witness2")):
            r = improve_witness(g, 1, 0.5, variant, exact, beta_star=beta_star)
            assert r.after.value >= broadcast_guarantee(tag, beta_star, 1, g.alpha, 0.5)


def test_default_pool_prunes_by_degree():
    g = generate(GraphFamilySpec("star", n=6))
    pool = default_pool(g, cap=3)
    assert pool == [(1, 2), (1, 3), (1, 4)]
    assert default_pool(g, cap=None) == g.non_edges()


def test_monte_carlo_witness_runs():
    g = generate(GraphFamilySpec("path", n=6))
    r = improve_witness(g, 1, 0.5, "ii", EstimatorConfig(MONTE_CARLO, samples=5000, seed=4))
    assert r.after.half_width > 0 and r.edges_count <= r.edge_budget
