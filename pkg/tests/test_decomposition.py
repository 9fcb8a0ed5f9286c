import random

import pytest

from twreduce.decomposition import (
    FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF, DecompositionError, TreeDecomposition,
    heuristic_decompose, nicify, parse_td, serialize_td, validate,
)
from twreduce.generators import cycle, random_graph, random_partial_ktree
from twreduce.graph import Graph, parse_gr


def test_parse_path():
    g = parse_gr("p tw 3 2\n1 2\n2 3")
    td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g)
    assert td.width == 1


def test_missing_edge_coverage_names_edge():
    g = parse_gr("p tw 3 3\n1 2\n2 3\n1 3")
    with pytest.raises(DecompositionError, match=r"\(1,3\)") as exc:
        parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g)
    assert exc.value.invariant == "edge-coverage"
    assert exc.value.witness == (1, 3)


def test_connectivity_violation_names_vertex():
    g = parse_gr("p tw 3 2\n1 2\n2 3")
    text = "s td 3 2 3\nb 1 1 2\nb 2 1 3\nb 3 2 3\n1 2\n2 3\n"
    with pytest.raises(DecompositionError, match="vertex 2") as exc:
        parse_td(text, g)
    assert exc.value.invariant == "connectivity"
    assert exc.value.witness == 2


def test_other_violations():
    g = parse_gr("p tw 3 1\n1 2")
    with pytest.raises(DecompositionError) as exc:
        parse_td("s td 1 2 3\nb 1 1 2\n", g)
    assert exc.value.invariant == "vertex-coverage"
    with pytest.raises(DecompositionError) as exc:
        parse_td("s td 1 4 3\nb 1 1 2 3\n", g)
    assert exc.value.invariant == "width"
    with pytest.raises(DecompositionError) as exc:
        parse_td("s td 2 3 3\nb 1 1 2 3\nb 2 1 2 3\n", g)
    assert exc.value.invariant == "tree"


def test_td_roundtrip():
    g = random_graph(9, 0.4, random.Random(1))
    td = heuristic_decompose(g)
    again = parse_td(serialize_td(td), g)
    assert again.bags == td.bags and again.edges == td.edges


@pytest.mark.parametrize("n", [3, 4, 7, 30])
def test_cycle_min_degree_width_2(n):
    g = cycle(n)
    td = heuristic_decompose(g, "min-degree")
    validate(td, g)
    assert td.width == 2


@pytest.mark.parametrize("strategy", ["min-degree", "min-fill"])
def test_tree_width_1(strategy):
    rng = random.Random(5)
    edges = [(v, rng.randrange(v)) for v in range(1, 20)]
    g = Graph.from_edges(20, edges)
    td = heuristic_decompose(g, strategy)
    validate(td, g)
    assert td.width == 1


def test_k4_width_3():
    g = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert heuristic_decompose(g).width == 3
    assert heuristic_decompose(g, "min-fill").width == 3


def test_empty_graph():
    g = Graph.from_edges(0, [])
    td = heuristic_decompose(g)
    assert td.bags == [frozenset()]
    nd = nicify(td, g)
    assert [x.kind for x in nd.nodes] == [LEAF]


def test_disconnected_graph():
    g = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    td = heuristic_decompose(g)
    validate(td, g)
    nicify(td, g).check(g)


def test_single_bag_sequence():
    g = Graph.from_edges(2, [(0, 1, 1)])
    td = TreeDecomposition([frozenset({0, 1})], [], 2)
    nd = nicify(td, g)
    kinds = [(x.kind, x.vertex if x.kind in (INTRODUCE, FORGET) else x.edge) for x in nd.nodes]
    assert kinds == [
        (LEAF, None), (INTRODUCE, 0), (INTRODUCE, 1), (INTRODUCE_EDGE, (0, 1, 1)),
        (FORGET, 0), (FORGET, 1),
    ]


def test_two_bag_path_has_forget_between():
    g = parse_gr("p tw 3 2\n1 2\n2 3")
    td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g)
    nd = nicify(td, g)
    nd.check(g)
    kinds = [x.kind for x in nd.nodes]
    first_forget = kinds.index(FORGET)
    assert INTRODUCE in kinds[first_forget:]


def test_joins_are_binary_and_widths_preserved():
    rng = random.Random(11)
    for _ in range(20):
        g, td = random_partial_ktree(rng.randint(6, 14), rng.randint(1, 4), rng, keep=0.7)
        nd = nicify(td, g)
        nd.check(g)
        assert nd.width == td.width
        assert all(len(x.children) == 2 for x in nd.nodes if x.kind == JOIN)
        flat = nd.flatten()
        validate(flat, g)
        assert flat.width == td.width
        assert len(nd.nodes) <= (td.width + 2) * 3 * len(td.bags) + g.m + 2


def test_each_edge_introduced_once_random():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(1, 12)
        g = random_graph(n, rng.random(), rng)
        nd = nicify(heuristic_decompose(g, rng.choice(["min-degree", "min-fill"])), g)
        seen = [x.edge[:2] for x in nd.nodes if x.kind == INTRODUCE_EDGE]
        assert len(seen) == g.m
        assert sorted(seen) == [(u, v) for u, v, _ in g.edges]
        nd.check(g)
