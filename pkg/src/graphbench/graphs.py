"""Undirected simple graph plus the exact algorithms used as ground-truth
oracles and answer verifiers.

Nodes are dense integers 0..n-1 and distances are hop counts; every function
here is a pure function of an immutable Graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph, TooLarge

# Default node cap for the exact NP-hard solvers. A configuration value,
# not a constant of the algorithms.
DEFAULT_NP_NODE_CAP = 25


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on nodes 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"negative node count {self.n}")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1} or not normalized")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, normalizing endpoint order and dropping duplicates."""
        return cls(n, frozenset(_normalize_edge(u, v) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuple per node."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges sorted lexicographically with u < v (canonical order)."""
        return sorted(self.edges)

    def check_node(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise IndexError(f"node {u} out of range for n={self.n}")


def bfs_levels(g: Graph, s: int) -> dict[int, int]:
    """Hop-distance map over exactly the nodes reachable from s."""
    g.check_node(s)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def connected(g: Graph, u: int, v: int) -> bool:
    """True iff v is reachable from u."""
    g.check_node(u)
    g.check_node(v)
    if u == v:
        return True
    return v in bfs_levels(g, u)


def is_connected(g: Graph) -> bool:
    """True iff the whole graph is one component (vacuously true for n<=1)."""
    if g.n <= 1:
        return True
    return len(bfs_levels(g, 0)) == g.n


def connected_components(g: Graph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = sorted(bfs_levels(g, s))
        seen.update(comp)
        comps.append(comp)
    return comps


def shortest_distance(g: Graph, u: int, v: int) -> int | None:
    """BFS hop distance from u to v, or None when unreachable."""
    g.check_node(u)
    g.check_node(v)
    if u == v:
        return 0
    return bfs_levels(g, u).get(v)


def has_cycle(g: Graph) -> bool:
    """Cycle test via DFS back edges (non-parent edge to a visited node)."""
    parent: dict[int, int] = {}
    for root in range(g.n):
        if root in parent:
            continue
        parent[root] = -1
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
                elif v != parent[u]:
                    return True
    return False


def diameter(g: Graph) -> int:
    """Longest shortest path over all node pairs.

    Raises DisconnectedGraph when any pair is unreachable (including the
    degenerate n=0 case, which has no finite eccentricity).
    """
    if g.n == 0:
        raise DisconnectedGraph("empty graph has no diameter")
    best = 0
    for s in range(g.n):
        dist = bfs_levels(g, s)
        if len(dist) != g.n:
            raise DisconnectedGraph(f"node {s} does not reach all nodes")
        best = max(best, max(dist.values()))
    return best


def triangle_count(g: Graph) -> int:
    """Number of unordered vertex triples with all three edges present.

    Counts each triangle once at its smallest vertex by intersecting
    sorted neighbor lists above the current pair.
    """
    count = 0
    adj_sets = [set(a) for a in g.adjacency]
    for u, v in g.edge_list():
        # u < v by canonical order; count common neighbors w > v
        for w in g.neighbors(v):
            if w > v and w in adj_sets[u]:
                count += 1
    return count


def hamiltonian_cycle(g: Graph, node_cap: int = DEFAULT_NP_NODE_CAP) -> tuple[bool, list[int] | None]:
    """Decide Hamiltonian-cycle existence by backtracking with degree pruning.

    Returns (True, witness tour) or (False, None). The witness visits every
    node exactly once, starting at 0, with a closing edge back to 0.
    """
    if g.n > node_cap:
        raise TooLarge(f"n={g.n} exceeds node cap {node_cap}")
    if g.n < 3:
        return False, None
    if any(g.degree(u) < 2 for u in range(g.n)):
        return False, None
    if not is_connected(g):
        return False, None

    path = [0]
    used = [False] * g.n
    used[0] = True

    def extend() -> bool:
        if len(path) == g.n:
            return g.has_edge(path[-1], 0)
        for v in g.neighbors(path[-1]):
            if used[v]:
                continue
            used[v] = True
            path.append(v)
            if extend():
                return True
            path.pop()
            used[v] = False
        return False

    if extend():
        return True, list(path)
    return False, None


def verify_hamiltonian_tour(g: Graph, seq: Sequence[int]) -> bool:
    """Check a claimed Hamiltonian tour; a repeated closing node is allowed."""
    tour = list(seq)
    if len(tour) >= 2 and tour[0] == tour[-1]:
        tour = tour[:-1]
    if g.n < 3 or len(tour) != g.n:
        return False
    if sorted(tour) != list(range(g.n)):
        return False
    return all(g.has_edge(tour[i], tour[(i + 1) % g.n]) for i in range(g.n))


def max_cut(g: Graph, node_cap: int = DEFAULT_NP_NODE_CAP) -> tuple[int, set[int]]:
    """Exact maximum cut by enumerating all 2^(n-1) bipartitions.

    Node 0 is pinned to side A to halve the space; masks are evaluated in
    numpy chunks. Returns (crossing edge count, side-A node set).
    """
    if g.n > node_cap:
        raise TooLarge(f"n={g.n} exceeds node cap {node_cap}")
    if g.n == 0:
        return 0, set()
    edges = g.edge_list()
    if not edges:
        return 0, set(range(g.n))

    total = 1 << (g.n - 1)  # bit i of a mask = side of node i+1; node 0 fixed
    best_size = -1
    best_mask = 0
    chunk = 1 << 18
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        sizes = np.zeros(len(masks), dtype=np.int64)
        for u, v in edges:
            bu = (masks >> (u - 1)) & 1 if u > 0 else np.zeros(len(masks), dtype=np.int64)
            bv = (masks >> (v - 1)) & 1
            sizes += bu ^ bv
        i = int(np.argmax(sizes))
        if int(sizes[i]) > best_size:
            best_size = int(sizes[i])
            best_mask = int(masks[i])

    side_a = {0} | {v for v in range(1, g.n) if not (best_mask >> (v - 1)) & 1}
    return best_size, side_a


def cut_size(g: Graph, side: set[int]) -> int:
    """Crossing-edge count of the bipartition (side, V - side)."""
    return sum(1 for u, v in g.edges if (u in side) != (v in side))
