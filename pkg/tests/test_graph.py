import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leeyang.graph import (
    Graph,
    GraphError,
    connected_components,
    delete_vertex,
    generate,
    induced_subgraph,
    parse_edge_list,
)


def test_parse_k2():
    g = parse_edge_list("2 1\n0 1")
    assert g.n == 2 and g.edges == ((0, 1),)


def test_parse_triangle_with_comments():
    g = parse_edge_list("# triangle\n3 3\n0 1\n\n1 2\n# closing edge\n2 0\n")
    assert set(g.edges) == {(0, 1), (1, 2), (0, 2)}
    assert g.m == 3


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("3 2\n0 1\n1 1", 3, "self-loop"),
        ("3 2\n0 1\n1 3", 3, "out of range"),
        ("3 2\n0 1\n1 0", 3, "duplicate"),
        ("3 2\n0 1\n1 x", 3, "non-integer"),
        ("3 2\n0 1 2\n", 2, "two integers"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(GraphError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert f"line {line}" in str(exc.value)


def test_parse_edge_count_mismatch():
    with pytest.raises(GraphError, match="declares 2 edges"):
        parse_edge_list("3 2\n0 1\n")


def test_parse_empty():
    with pytest.raises(GraphError, match="header"):
        parse_edge_list("# nothing\n")


def test_generators():
    assert generate("path", n=3).edges == ((0, 1), (1, 2))
    assert set(generate("complete", n=3).edges) == {(0, 1), (0, 2), (1, 2)}
    assert generate("cycle", n=4).m == 4
    g = generate("grid", rows=2, cols=3)
    assert g.n == 6 and g.m == 7
    assert generate("path", n=1).m == 0


def test_gnp_is_deterministic():
    a = generate("gnp", n=8, p=0.4, seed=7)
    b = generate("gnp", n=8, p=0.4, seed=7)
    assert a.edges == b.edges
    assert generate("gnp", n=8, p=0.0, seed=1).m == 0
    assert generate("gnp", n=8, p=1.0, seed=1).m == 28


@pytest.mark.parametrize(
    "family, params",
    [("path", {"n": 0}), ("cycle", {"n": 2}), ("gnp", {"n": 4, "p": 1.5}), ("grid", {"rows": 2}), ("star", {"n": 3})],
)
def test_generator_rejects_bad_params(family, params):
    with pytest.raises(GraphError):
        generate(family, **params)


def test_graph_constructor_invariants():
    with pytest.raises(GraphError):
        Graph(2, ((0, 0),))
    with pytest.raises(GraphError):
        Graph(2, ((0, 1), (1, 0)))
    with pytest.raises(GraphError):
        Graph(2, ((0, 2),))


def test_delete_vertex_examples():
    h, relabel = delete_vertex(generate("complete", n=2), 0)
    assert h.n == 1 and h.m == 0 and relabel == {1: 0}
    h, _ = delete_vertex(generate("complete", n=3), 0)
    assert h.n == 2 and h.edges == ((0, 1),)
    h, relabel = delete_vertex(generate("path", n=3), 1)
    assert h.n == 2 and h.m == 0 and relabel == {0: 0, 2: 1}
    with pytest.raises(GraphError):
        delete_vertex(generate("path", n=3), 3)


def test_components_examples():
    assert connected_components(generate("complete", n=3)) == [[0, 1, 2]]
    h, _ = delete_vertex(generate("path", n=3), 1)
    assert connected_components(h) == [[0], [1]]
    assert connected_components(Graph(4)) == [[0], [1], [2], [3]]


def test_induced_subgraph():
    g = generate("cycle", n=5)
    h, relabel = induced_subgraph(g, [0, 1, 2])
    assert h.edges == ((0, 1), (1, 2)) and relabel == {0: 0, 1: 1, 2: 2}


def _reachability(n, edges):
    reach = np.eye(n, dtype=bool)
    for i, j in edges:
        reach[i, j] = reach[j, i] = True
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]
    return reach


graphs = st.builds(
    lambda n, p, seed: generate("gnp", n=n, p=p, seed=seed),
    st.integers(1, 10),
    st.floats(0.0, 1.0),
    st.integers(0, 2**31 - 1),
)


@settings(max_examples=100, deadline=None)
@given(graphs, st.data())
def test_delete_then_components_matches_brute_force(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    h, relabel = delete_vertex(g, u)
    reach = _reachability(h.n, h.edges)
    comps = connected_components(h)
    assert sorted(v for c in comps for v in c) == list(range(h.n))
    for c in comps:
        for a, b in itertools.product(c, repeat=2):
            assert reach[a, b]
    for c1, c2 in itertools.combinations(comps, 2):
        assert not reach[c1[0], c2[0]]
    # exactly the edges not touching u survive, under the relabeling
    expected = {tuple(sorted((relabel[i], relabel[j]))) for i, j in g.edges if u not in (i, j)}
    assert set(h.edges) == expected


@settings(max_examples=100, deadline=None)
@given(graphs)
def test_render_parse_round_trip(g):
    assert parse_edge_list(g.render()) == g


@settings(max_examples=100, deadline=None)
@given(graphs)
def test_degree_consistency(g):
    for u in range(g.n):
        assert g.degree(u) == len(g.adjacency[u]) == sum(u in e for e in g.edges)
        for w in g.adjacency[u]:
            assert u in g.adjacency[w]
