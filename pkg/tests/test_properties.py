"""Property-based checks over randomly drawn graphs."""

from hypothesis import given, settings, strategies as st

from graphbench import answer_eval
from graphbench.graphs import Graph, bfs_levels, connected_components, has_cycle, triangle_count
from graphbench.prompts import _bfs_order, gold_answer
from graphbench.serialize import SerializationFormat as F
from graphbench.serialize import parse, serialize
from graphbench.tasks import TaskKind as T
from graphbench.tasks import compute_ground_truth


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return Graph.from_edges(n, edges)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.sampled_from(list(F)))
def test_round_trip_preserves_graph(g, fmt):
    assert parse(serialize(g, fmt), fmt, n=g.n) == g


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2))
def test_cycle_matches_component_edge_count(g):
    assert has_cycle(g) == (g.m > g.n - len(connected_components(g)))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1), st.data())
def test_canonical_bfs_order_always_verifies(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    order = _bfs_order(g, s)
    assert answer_eval.verify_bfs_order(g, s, order)
    assert set(order) == set(bfs_levels(g, s))


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=3, max_n=8), st.data())
def test_gold_answers_always_score_one(g, data):
    task = data.draw(st.sampled_from([T.CYCLE, T.DIAMETER, T.TRIANGLE,
                                      T.BFS_ORDER, T.CONNECTIVITY]))
    params = {}
    if task is T.BFS_ORDER:
        params = {"start": data.draw(st.integers(0, g.n - 1))}
    elif task is T.CONNECTIVITY:
        u = data.draw(st.integers(0, g.n - 1))
        v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
        params = {"u": u, "v": v}
    if task is T.DIAMETER:
        from graphbench.graphs import is_connected
        if not is_connected(g):
            return
    gt = compute_ground_truth(task, g, params)
    answer = gold_answer(task, g, params, gt)
    extracted = answer_eval.extract(task, answer)
    assert answer_eval.score(task, g, params, gt, extracted) == 1


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_triangle_count_nonnegative_and_bounded(g):
    count = triangle_count(g)
    assert 0 <= count <= g.n * (g.n - 1) * (g.n - 2) // 6
