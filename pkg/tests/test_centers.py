import numpy as np
import pytest

from bikit.centers import gonzalez_centers, star_edges
from bikit.oracle import brute_force_kcenter
from bikit.proximity import ImpliedMetric, implied_metric, proximity_matrix

from conftest import random_connected


def line_metric(n):
    x = np.arange(n, dtype=float)
    return ImpliedMetric(np.abs(x[:, None] - x[None, :]))


def test_path_examples(p3, p4, exact):
    sel = gonzalez_centers(implied_metric(proximity_matrix(p4, exact)), 2)
    assert sel.centers == (0, 3) and sel.radius == pytest.approx(1)
    sel = gonzalez_centers(implied_metric(proximity_matrix(p3, exact)), 2)
    assert sel.centers == (0, 2) and sel.radius == pytest.approx(1)
    assert gonzalez_centers(line_metric(5), 5).radius == 0


def test_count_validation():
    with pytest.raises(ValueError):
        gonzalez_centers(line_metric(3), 0)


def test_star_edges(p4):
    assert star_edges(p4, (0, 2, 3)) == ((0, 2), (0, 3))
    assert star_edges(p4, (0, 1)) == ()
    assert star_edges(p4, (0, 3)) == ((0, 3),)
    with pytest.raises(ValueError):
        star_edges(p4, ())
    with pytest.raises(ValueError):
        star_edges(p4, (1, 1))


def test_coverage_and_two_approximation(exact):
    rng = np.random.default_rng(0)
    for _ in range(60):
        g = random_connected(rng, 3, 7)
        metric = implied_metric(proximity_matrix(g, exact))
        for count in range(1, g.n + 1):
            sel = gonzalez_centers(metric, count)
            nearest = metric.dist[:, list(sel.centers)].min(axis=1)
            assert nearest.max() <= sel.radius + 1e-12
            assert sel.radius <= 2 * brute_force_kcenter(metric, count) + 1e-9
