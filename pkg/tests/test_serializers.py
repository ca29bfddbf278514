"""Serializer goldens (frozen reference texts) and parser round-trips."""

import random

import pytest

from conftest import random_graph
from graphbench.errors import MalformedInput
from graphbench.graphs import Graph
from graphbench.serialize import SerializationFormat as F
from graphbench.serialize import parse, serialize

GOLDEN_MATRIX = (
    "[[0 1 0 0 0 0]\n"
    " [1 0 1 0 0 0] \n"
    " [0 1 0 0 0 0] \n"
    " [0 0 0 0 1 0] \n"
    " [0 0 0 1 0 1] \n"
    " [0 0 0 0 1 0]]"
)

GOLDEN_ADJ_LIST = "{0: [1], 1: [0, 2], 2: [1], 3: [4], 4: [3, 5], 5: [4]}"

GOLDEN_EDGE_LIST = "0 1\n1 2\n3 4\n4 5"

GOLDEN_GMOL = """graph [
  node [
    id 0
    label "0"
  ]
  node [
    id 1
    label "1"
  ]
  node [
    id 2
    label "2"
  ]
  node [
    id 3
    label "3"
  ]
  node [
    id 4
    label "4"
  ]
  node [
    id 5
    label "5"
  ]
  edge [
    source 0
    target 1
  ]
  edge [
    source 1
    target 2
  ]
  edge [
    source 3
    target 4
  ]
  edge [
    source 4
    target 5
  ]
]"""

GOLDEN_GMAL = (
    "<?xml version='1.0' encoding='utf-8'?>\n"
    '<GMaL xmlns="http://GMaL.graphdrawing.org/xmlns" \n'
    '         xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" \n'
    '         xsi:schemaLocation="http://GMaL.graphdrawing.org/xmlns \n'
    '         http://GMaL.graphdrawing.org/xmlns/1.0/GMaL.xsd">\n'
    '  <graph edgedefault="undirected">\n'
    '    <node id="0" />\n'
    '    <node id="1" />\n'
    '    <node id="2" />\n'
    '    <node id="3" />\n'
    '    <node id="4" />\n'
    '    <node id="5" />\n'
    '    <edge source="0" target="1" />\n'
    '    <edge source="1" target="2" />\n'
    '    <edge source="3" target="4" />\n'
    '    <edge source="4" target="5" />\n'
    "  </graph>\n"
    "</GMaL>"
)

# The reference text for the set-flavored formats lists elements in
# arbitrary set order, so goldens compare elements, not bytes.
GOLDEN_ADJ_SET_ELEMENTS = {0: {1}, 1: {0, 2}, 2: {1}, 3: {4}, 4: {3, 5}, 5: {4}}
GOLDEN_EDGE_SET_ELEMENTS = {(0, 1), (4, 5), (1, 2), (3, 4)}


def test_matrix_golden(reference_graph):
    assert serialize(reference_graph, F.ADJACENCY_MATRIX) == GOLDEN_MATRIX


def test_adjacency_list_golden(reference_graph):
    assert serialize(reference_graph, F.ADJACENCY_LIST) == GOLDEN_ADJ_LIST


def test_edge_list_golden(reference_graph):
    assert serialize(reference_graph, F.EDGE_LIST) == GOLDEN_EDGE_LIST


def test_gmol_golden(reference_graph):
    assert serialize(reference_graph, F.GMOL) == GOLDEN_GMOL


def test_gmal_golden(reference_graph):
    assert serialize(reference_graph, F.GMAL) == GOLDEN_GMAL


def test_gmal_strict_graphml_toggle(reference_graph):
    text = serialize(reference_graph, F.GMAL, strict_graphml=True)
    assert "<graphml" in text and "</graphml>" in text
    assert "GMaL" not in text
    assert parse(text, F.GMAL) == reference_graph


def test_adjacency_set_elements(reference_graph):
    parsed = parse(serialize(reference_graph, F.ADJACENCY_SET), F.ADJACENCY_SET)
    got = {u: set(parsed.neighbors(u)) for u in range(parsed.n)}
    assert got == GOLDEN_ADJ_SET_ELEMENTS


def test_edge_set_elements(reference_graph):
    parsed = parse(serialize(reference_graph, F.EDGE_SET), F.EDGE_SET)
    assert set(parsed.edge_list()) == {tuple(sorted(e)) for e in GOLDEN_EDGE_SET_ELEMENTS}


def test_empty_matrix_template():
    g = Graph(3)
    assert serialize(g, F.ADJACENCY_MATRIX) == "[[0 0 0]\n [0 0 0] \n [0 0 0]]"


def test_round_trip_all_formats():
    rng = random.Random(42)
    for _ in range(1000):
        g = random_graph(rng, rng.randint(1, 12))
        for fmt in F:
            assert parse(serialize(g, fmt), fmt, n=g.n) == g, fmt


def test_cross_format_agreement():
    rng = random.Random(43)
    for _ in range(30):
        g = random_graph(rng, rng.randint(2, 10))
        parsed = {fmt: parse(serialize(g, fmt), fmt, n=g.n) for fmt in F}
        assert len(set(parsed.values())) == 1


def test_serialize_parse_serialize_fixed_point():
    rng = random.Random(44)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 10))
        for fmt in F:
            text = serialize(g, fmt)
            assert serialize(parse(text, fmt, n=g.n), fmt) == text


def test_parse_accepts_unordered_and_reversed_input():
    # key order and endpoint order from real transcripts vary
    g = parse("{1: [0], 0: [1, 2], 2: [0]}", F.ADJACENCY_LIST)
    assert g == Graph.from_edges(3, [(0, 1), (0, 2)])
    g2 = parse("2 0\n1 0", F.EDGE_LIST)
    assert g2 == Graph.from_edges(3, [(0, 2), (0, 1)])


def test_malformed_inputs():
    with pytest.raises(MalformedInput):
        parse("graph [\n  node [\n    id 0\n", F.GMOL)
    with pytest.raises(MalformedInput):
        parse("[[0 1]\n [1 x]]", F.ADJACENCY_MATRIX)
    with pytest.raises(MalformedInput):
        parse("[[0 1]\n [0 0]]", F.ADJACENCY_MATRIX)  # asymmetric
    with pytest.raises(MalformedInput):
        parse("0 1\n2", F.EDGE_LIST)
    with pytest.raises(MalformedInput):
        parse("<GMaL><graph><node id='0'/>", F.GMAL)
    with pytest.raises(MalformedInput):
        parse("0: [1]", F.ADJACENCY_LIST)


def test_parse_respects_declared_n():
    with pytest.raises(MalformedInput):
        parse("0 9", F.EDGE_LIST, n=3)
    g = parse("0 1", F.EDGE_LIST, n=5)
    assert g.n == 5 and g.m == 1
