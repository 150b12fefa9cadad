import numpy as np
import pytest

from bikit.graph import (
    AlphaRangeError,
    ConnectivityError,
    DuplicateEdgeError,
    GraphError,
    GraphFamilySpec,
    GraphParseError,
    InformationGraph,
    add_edges,
    arm_tips,
    gadget_layout,
    generate,
    load_graph,
    parse_graph,
    save_graph,
)

from conftest import random_connected


def test_parse_p3():
    g = parse_graph("3 0.5\n0 1\n1 2\n")
    assert (g.n, g.edges, g.alpha) == (3, ((0, 1), (1, 2)), 0.5)


def test_parse_comments_and_blank_lines():
    g = parse_graph("# a path\n\n3 0.5\n# edges\n0 1\n1 2\n")
    assert g.m == 2


@pytest.mark.parametrize("text,exc", [
    ("3 0.5\n0 0\n", GraphParseError),
    ("4 0.5\n0 1\n2 3\n", ConnectivityError),
    ("3 0.5\n1 0\n0 2\n", GraphParseError),
    ("3 0.5\n0 1\n0 1\n1 2\n", DuplicateEdgeError),
    ("3 1.5\n0 1\n1 2\n", AlphaRangeError),
    ("3\n0 1\n", GraphParseError),
    ("3 0.5\n0 x\n", GraphParseError),
    ("3 0.5\n0 5\n", GraphParseError),
    ("", GraphParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_graph(text)


def test_parse_error_has_line_number():
    with pytest.raises(GraphParseError) as info:
        parse_graph("3 0.5\n0 1\n2 2\n")
    assert info.value.line == 3


def test_connectivity_error_names_two_components():
    with pytest.raises(ConnectivityError) as info:
        parse_graph("4 0.5\n0 1\n2 3\n")
    assert "0" in str(info.value) and "2" in str(info.value)


def test_add_edges(p3, p4):
    tri = add_edges(p3, [(2, 0)])
    assert tri.edges == ((0, 1), (0, 2), (1, 2))
    assert p3.m == 2
    assert add_edges(p4, [(0, 3)]).edges == generate(GraphFamilySpec("cycle", n=4)).edges
    with pytest.raises(DuplicateEdgeError):
        add_edges(p3, [(0, 1)])
    assert (p3 + [(0, 2)]).m == 3


def test_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    for i in range(100):
        g = random_connected(rng, 2, 8, alpha=float(rng.uniform(0.01, 0.99)))
        path = tmp_path / f"g{i}.txt"
        save_graph(g, path)
        h = load_graph(path)
        assert (h.n, h.edges, h.alpha) == (g.n, g.edges, g.alpha)


def test_generate_examples():
    assert generate(GraphFamilySpec("path", n=4)).m == 3
    s = generate(GraphFamilySpec("subdivided-star", leaves=3, length=2))
    assert (s.n, s.m) == (7, 6)
    assert arm_tips(3, 2) == [2, 4, 6]
    assert all(s.degree(t) == 1 for t in arm_tips(3, 2))


def test_gadget_counts():
    # two sets, two elements, paths of length 2: 1 set-set, 2 set-element, 2 pivot-set paths
    spec = GraphFamilySpec("setcover-gadget", length=2, sets=((1,), (2,)), m=2, planted=(0, 1))
    g = generate(spec)
    paths = 1 + 2 + 2
    assert g.n == 1 + 2 + 2 + paths * (2 - 1)
    assert g.m == paths * 2
    lay = gadget_layout(spec)
    assert lay.pivot == 0 and lay.set_vertices == (1, 2) and lay.element_vertices == (3, 4)
    assert lay.planted_edges == ((0, 1), (0, 2))


def test_gadget_rejects_odd_length():
    with pytest.raises(GraphError):
        generate(GraphFamilySpec("setcover-gadget", length=3, sets=((1,),), m=1))


@pytest.mark.parametrize("spec", [
    GraphFamilySpec("path", n=6), GraphFamilySpec("cycle", n=5), GraphFamilySpec("clique", n=5),
    GraphFamilySpec("star", n=6), GraphFamilySpec("subdivided-star", leaves=4, length=3),
    GraphFamilySpec("binary-tree", depth=3), GraphFamilySpec("random", n=9, p=0.3),
    GraphFamilySpec("setcover-gadget", length=4, sets=((1, 2), (2, 3)), m=3),
])
def test_generated_families_connected_and_pure(spec):
    a, b = generate(spec, seed=5), generate(spec, seed=5)
    assert a.is_connected()
    assert a.edges == b.edges


def test_random_gives_up():
    with pytest.raises(GraphError):
        generate(GraphFamilySpec("random", n=30, p=0.01))


def test_bad_alpha():
    for a in (0.0, 1.0, -0.1):
        with pytest.raises(AlphaRangeError):
            InformationGraph(2, [(0, 1)], a)
