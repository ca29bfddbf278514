import random

import pytest

from graphbench.graphs import Graph


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    """Erdos-Renyi style helper used by the oracle-equivalence suites."""
    if p is None:
        p = rng.uniform(0.1, 0.9)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def reference_graph():
    """The six-node, four-edge graph used for all serializer goldens."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
