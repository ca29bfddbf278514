"""Query corpus assembly, JSONL persistence, external edge-list import,
dataset statistics, and the ground-truth selfcheck.

Every query derives its own RNG stream from (master seed, task, split,
family, index), so rebuilding any slice of a corpus reproduces it exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

from . import graphs
from .errors import ExhaustedAttempts, MalformedInput
from .generators import (DifficultySplit, GraphFamily, admissible_families,
                         derive_rng, derive_seed, generate, generate_connected)
from .graphs import Graph
from .tasks import NP_TASKS, TaskKind, compute_ground_truth, ground_truth_matches


@dataclass
class QuerySpec:
    """One benchmark item: graph + task + parameters + ground truth."""

    id: str
    task: TaskKind
    difficulty: DifficultySplit
    family: GraphFamily
    graph: Graph
    params: dict[str, int]
    ground_truth: Any
    seed: int

    @property
    def n(self) -> int:
        return self.graph.n

    def to_record(self) -> dict[str, Any]:
        """JSONL record with stable field order."""
        return {
            "id": self.id,
            "task": self.task.value,
            "difficulty": self.difficulty.value,
            "graph_type": self.family.value,
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edge_list()],
            "params": self.params,
            "ground_truth": self.ground_truth,
            "seed": self.seed,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "QuerySpec":
        return cls(
            id=rec["id"],
            task=TaskKind(rec["task"]),
            difficulty=DifficultySplit(rec["difficulty"]),
            family=GraphFamily(rec["graph_type"]),
            graph=Graph.from_edges(rec["n"], [tuple(e) for e in rec["edges"]]),
            params={k: int(v) for k, v in rec["params"].items()},
            ground_truth=rec["ground_truth"],
            seed=rec["seed"],
        )


def write_jsonl(records: Iterable[dict[str, Any]], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(", ", ": ")) + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)


def load_queries(path: str | Path) -> list[QuerySpec]:
    return [QuerySpec.from_record(rec) for rec in read_jsonl(path)]


def _sample_n_for_task(task: TaskKind, split: DifficultySplit, rng: random.Random,
                       np_node_cap: int) -> int:
    lo, hi = split.node_range
    if task in NP_TASKS:
        hi = min(hi, np_node_cap)
    return rng.randint(lo, hi)


def _sample_params(task: TaskKind, g: Graph, rng: random.Random) -> dict[str, int]:
    if task is TaskKind.BFS_ORDER:
        return {"start": rng.randrange(g.n)}
    if task is TaskKind.CONNECTIVITY:
        u, v = rng.sample(range(g.n), 2)
        return {"u": u, "v": v}
    if task is TaskKind.SHORTEST_PATH:
        for _ in range(1000):
            u, v = rng.sample(range(g.n), 2)
            if graphs.connected(g, u, v):
                return {"u": u, "v": v}
        raise ExhaustedAttempts("no connected node pair found")
    return {}


def build_query(task: TaskKind, split: DifficultySplit, family: GraphFamily,
                index: int, master_seed: int,
                np_node_cap: int = graphs.DEFAULT_NP_NODE_CAP,
                seen_hashes: set[frozenset] | None = None,
                max_attempts: int = 50) -> QuerySpec:
    """Build one query from its derived seed stream.

    `seen_hashes` holds edge sets already used in the cell; exact duplicates
    are resampled. Shortest-path pairs are redrawn until reachable, and
    graphs with no reachable pair at all are resampled.
    """
    for attempt in range(max_attempts):
        seed = (master_seed, task.value, split.value, family.value, index, attempt)
        rng = derive_rng(*seed)
        n = _sample_n_for_task(task, split, rng, np_node_cap)
        try:
            if task is TaskKind.DIAMETER:
                g = generate_connected(family, n, rng)
            else:
                g = generate(family, n, rng)
            # A graph with an isolated vertex is trivially non-Hamiltonian
            # and the edge-only serializations cannot even express it, so
            # Hamiltonian cells resample those draws.
            if task is TaskKind.HAMILTONIAN and any(g.degree(u) == 0 for u in range(g.n)):
                continue
            if seen_hashes is not None and g.edges in seen_hashes:
                continue
            params = _sample_params(task, g, rng)
            gt = compute_ground_truth(task, g, params, node_cap=np_node_cap)
        except ExhaustedAttempts:
            continue
        if seen_hashes is not None:
            seen_hashes.add(g.edges)
        qid = f"{task.value}-{split.value}-{family.value}-{index:05d}"
        return QuerySpec(id=qid, task=task, difficulty=split, family=family,
                         graph=g, params=params, ground_truth=gt,
                         seed=derive_seed(*seed))
    raise ExhaustedAttempts(
        f"could not build {task.value}/{split.value}/{family.value} item {index}")


def build_corpus(tasks: Sequence[TaskKind], splits: Sequence[DifficultySplit],
                 families: Sequence[GraphFamily] | None, count: int,
                 master_seed: int, per_cell: bool = False,
                 np_node_cap: int = graphs.DEFAULT_NP_NODE_CAP) -> list[QuerySpec]:
    """Assemble queries for every (task, split, admissible family) cell.

    With per_cell=True, `count` items are built per family cell; otherwise
    `count` is the total per (task, split) and families take turns
    round-robin. Duplicate edge sets within a cell are resampled.
    """
    out: list[QuerySpec] = []
    for task in tasks:
        allowed = sorted(admissible_families(task), key=lambda f: f.value)
        chosen = [f for f in allowed if families is None or f in families]
        if not chosen:
            continue
        for split in splits:
            seen: dict[GraphFamily, set] = {f: set() for f in chosen}
            counters = {f: 0 for f in chosen}
            if per_cell:
                plan = [(f, i) for f in chosen for i in range(count)]
            else:
                plan = []
                for j in range(count):
                    f = chosen[j % len(chosen)]
                    plan.append((f, counters[f]))
                    counters[f] += 1
            for family, index in plan:
                out.append(build_query(task, split, family, index, master_seed,
                                       np_node_cap=np_node_cap,
                                       seen_hashes=seen[family]))
    return out


def import_edge_list(path: str | Path) -> Graph:
    """Read a 'u v' edge-list file, compacting arbitrary node ids to 0..n-1."""
    ids: set[int] = set()
    raw_edges: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise MalformedInput(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(toks[0]), int(toks[1])
            except ValueError:
                raise MalformedInput(f"{path}:{lineno}: non-integer node id in {line!r}") from None
            ids.update((u, v))
            raw_edges.append((u, v))
    remap = {node: i for i, node in enumerate(sorted(ids))}
    return Graph.from_edges(len(remap), ((remap[u], remap[v]) for u, v in raw_edges))


def corpus_stats(corpus: Sequence[QuerySpec]) -> list[dict[str, Any]]:
    """Average node and edge counts per (task, family, split) cell."""
    cells: dict[tuple, list[QuerySpec]] = {}
    for q in corpus:
        cells.setdefault((q.task, q.family, q.difficulty), []).append(q)
    rows = []
    for (task, family, split), items in sorted(
            cells.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value, kv[0][2].value)):
        rows.append({
            "task": task.value,
            "graph_type": family.value,
            "difficulty": split.value,
            "count": len(items),
            "avg_nodes": sum(q.n for q in items) / len(items),
            "avg_edges": sum(q.graph.m for q in items) / len(items),
        })
    return rows


def selfcheck(corpus: Sequence[QuerySpec],
              np_node_cap: int = graphs.DEFAULT_NP_NODE_CAP) -> list[str]:
    """Revalidate every stored ground truth against a fresh oracle run.

    Returns the list of failing query ids (empty when the corpus is clean).
    """
    bad = []
    seen_ids: set[str] = set()
    for q in corpus:
        ok = True
        if q.id in seen_ids:
            ok = False
        seen_ids.add(q.id)
        if q.family not in admissible_families(q.task):
            ok = False
        try:
            if ok:
                ok = ground_truth_matches(q.task, q.graph, q.params, q.ground_truth,
                                          node_cap=np_node_cap)
        except Exception:
            ok = False
        if not ok:
            bad.append(q.id)
    return bad
