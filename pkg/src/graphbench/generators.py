"""Synthetic graph generators for the seven families, with the task/family
admissibility matrix and per-item seed derivation.

Every generator is a pure function of its seeded stream, so corpus
construction parallelizes without changing output.
"""

from __future__ import annotations

import enum
import hashlib
import math
import random
from typing import Iterable

from .errors import ExhaustedAttempts, InvalidN
from .graphs import Graph
from .tasks import TaskKind


class GraphFamily(enum.Enum):
    """The seven generator families; values appear in CLI flags and JSONL."""

    ERM = "erm"
    ERP = "erp"
    BERM = "berm"
    BERP = "berp"
    BAG = "bag"
    BAF = "baf"
    SF = "sf"


class DifficultySplit(enum.Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"

    @property
    def node_range(self) -> tuple[int, int]:
        """Inclusive node-count band for the split."""
        return {
            DifficultySplit.EASY: (5, 10),
            DifficultySplit.MEDIUM: (10, 20),
            DifficultySplit.HARD: (20, 30),
        }[self]


ALL_FAMILIES = frozenset(GraphFamily)

# Which families each task draws from. Connectivity skips BAG (connected by
# construction, the answer would always be yes); diameter needs finite
# distances so families that can disconnect are out; triangle skips families
# that cannot form one; cycle skips the acyclic-by-definition forest; the
# NP-hard Hamiltonian task keeps only the families that admit cycles often
# enough to balance labels.
_ADMISSIBLE: dict[TaskKind, frozenset[GraphFamily]] = {
    TaskKind.CONNECTIVITY: frozenset({GraphFamily.BAF, GraphFamily.BERM, GraphFamily.BERP,
                                      GraphFamily.ERM, GraphFamily.ERP}),
    TaskKind.CYCLE: frozenset({GraphFamily.BAG, GraphFamily.BERM, GraphFamily.BERP,
                               GraphFamily.ERM, GraphFamily.ERP, GraphFamily.SF}),
    TaskKind.DIAMETER: frozenset({GraphFamily.BAG, GraphFamily.ERM, GraphFamily.ERP,
                                  GraphFamily.SF}),
    TaskKind.TRIANGLE: frozenset({GraphFamily.BAG, GraphFamily.ERM, GraphFamily.ERP,
                                  GraphFamily.SF}),
    TaskKind.BFS_ORDER: ALL_FAMILIES,
    TaskKind.SHORTEST_PATH: ALL_FAMILIES,
    TaskKind.HAMILTONIAN: frozenset({GraphFamily.ERM, GraphFamily.ERP, GraphFamily.BAG}),
    TaskKind.MAX_CUT: ALL_FAMILIES,
}


def admissible_families(task: TaskKind) -> frozenset[GraphFamily]:
    return _ADMISSIBLE[task]


def derive_seed(*parts: object) -> int:
    """Stable child seed from a tuple of identifying parts."""
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def derive_rng(*parts: object) -> random.Random:
    return random.Random(derive_seed(*parts))


def sample_n(split: DifficultySplit, rng: random.Random) -> int:
    lo, hi = split.node_range
    return rng.randint(lo, hi)


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _weighted_choice(rng: random.Random, weights: list[int]) -> int:
    """Index drawn proportionally to integer weights (at least one positive)."""
    total = sum(weights)
    r = rng.randrange(total)
    acc = 0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    return len(weights) - 1


def _gen_erm(n: int, rng: random.Random) -> Graph:
    pairs = _all_pairs(n)
    m = rng.randint(1, len(pairs))
    return Graph.from_edges(n, rng.sample(pairs, m))


def _gen_erp(n: int, rng: random.Random) -> Graph:
    p = rng.random()
    edges = [pair for pair in _all_pairs(n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def _bipartite_sides(n: int, rng: random.Random) -> tuple[list[int], list[int]]:
    # Each side gets at least 2 nodes so the structure is nontrivial.
    left_size = rng.randint(2, n - 2)
    nodes = list(range(n))
    return nodes[:left_size], nodes[left_size:]


def _gen_berm(n: int, rng: random.Random) -> Graph:
    left, right = _bipartite_sides(n, rng)
    pairs = [(u, v) for u in left for v in right]
    m = rng.randint(1, len(pairs))
    return Graph.from_edges(n, rng.sample(pairs, m))


def _gen_berp(n: int, rng: random.Random) -> Graph:
    left, right = _bipartite_sides(n, rng)
    p = rng.random()
    edges = [(u, v) for u in left for v in right if rng.random() < p]
    return Graph.from_edges(n, edges)


def _gen_bag(n: int, rng: random.Random) -> Graph:
    """Preferential attachment over a complete seed graph.

    m0 ~ U{2..max(2, n//3)}; each new node attaches m = min(m0+1, existing)
    distinct targets with probability proportional to degree. The cap at the
    existing node count keeps the rule feasible right after the seed.
    """
    m0 = rng.randint(2, max(2, n // 3))
    edges = set(_all_pairs(m0))
    degree = [m0 - 1] * m0 + [0] * (n - m0)
    for v in range(m0, n):
        m = min(m0 + 1, v)
        targets: set[int] = set()
        while len(targets) < m:
            t = _weighted_choice(rng, degree[:v])
            targets.add(t)
        for t in targets:
            edges.add((t, v))
            degree[t] += 1
            degree[v] += 1
    return Graph.from_edges(n, edges)


def _gen_baf(n: int, rng: random.Random) -> Graph:
    """Preferential-attachment forest: m0 isolated roots, then one edge per
    new node with target weight degree+1. Yields exactly n - m0 edges."""
    m0 = rng.randint(2, max(2, n // 3))
    edges = []
    degree = [0] * n
    for v in range(m0, n):
        t = _weighted_choice(rng, [d + 1 for d in degree[:v]])
        edges.append((t, v))
        degree[t] += 1
        degree[v] += 1
    return Graph.from_edges(n, edges)


def _gen_sf(n: int, rng: random.Random) -> Graph:
    """Degree-weighted random edge insertion over a fixed node set.

    The edge budget U{n..ceil(1.5n)} matches the sparse edge/node ratios this
    family is meant to produce; degree+1 weights bootstrap from the empty
    graph. Duplicate and self edges are rejected and redrawn.
    """
    target = rng.randint(n, math.ceil(1.5 * n))
    target = min(target, n * (n - 1) // 2)
    edges: set[tuple[int, int]] = set()
    degree = [0] * n
    attempts = 0
    max_attempts = 100 * target
    while len(edges) < target and attempts < max_attempts:
        attempts += 1
        u = _weighted_choice(rng, [d + 1 for d in degree])
        v = _weighted_choice(rng, [d + 1 for d in degree])
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e in edges:
            continue
        edges.add(e)
        degree[u] += 1
        degree[v] += 1
    return Graph.from_edges(n, edges)


_GENERATORS = {
    GraphFamily.ERM: (_gen_erm, 2),
    GraphFamily.ERP: (_gen_erp, 2),
    GraphFamily.BERM: (_gen_berm, 4),
    GraphFamily.BERP: (_gen_berp, 4),
    GraphFamily.BAG: (_gen_bag, 3),
    GraphFamily.BAF: (_gen_baf, 3),
    GraphFamily.SF: (_gen_sf, 2),
}


def generate(family: GraphFamily, n: int, rng: random.Random) -> Graph:
    """Generate one graph of exactly n nodes from the family's construction."""
    gen, min_n = _GENERATORS[family]
    if n < min_n:
        raise InvalidN(f"{family.value} needs n >= {min_n}, got {n}")
    return gen(n, rng)


def generate_connected(family: GraphFamily, n: int, rng: random.Random,
                       max_attempts: int = 200) -> Graph:
    """Resample until the graph is connected (needed for diameter queries)."""
    from .graphs import is_connected

    for _ in range(max_attempts):
        g = generate(family, n, rng)
        if is_connected(g):
            return g
    raise ExhaustedAttempts(
        f"no connected {family.value} graph with n={n} in {max_attempts} attempts")


def is_bipartite(g: Graph) -> bool:
    """BFS two-coloring check, used by the generator property tests."""
    color: dict[int, int] = {}
    for s in range(g.n):
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v not in color:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def parse_families(spec: str | Iterable[str]) -> list[GraphFamily]:
    """Family list from a comma-separated flag value like 'bag,erp'."""
    if isinstance(spec, str):
        spec = spec.split(",")
    return [GraphFamily(token.strip().lower()) for token in spec if str(token).strip()]
