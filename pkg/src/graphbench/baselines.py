"""Task-specific random baselines, analytic where a closed form exists and
Monte Carlo otherwise.

Policies: boolean tasks answer True on every query, so the baseline is the
corpus's True-label fraction; diameter guesses uniformly from [1, N]; triangle
guesses uniformly from [1, M] with M capped per difficulty; sequence-style
tasks (BFS order, shortest path, max-cut) have combinatorially many answers
and baseline at 0.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from .errors import MixedTasks
from .generators import DifficultySplit
from .tasks import TaskKind

if TYPE_CHECKING:
    from .corpus import QuerySpec

DEFAULT_TRIANGLE_CAPS = {
    DifficultySplit.EASY: 50,
    DifficultySplit.MEDIUM: 120,
    DifficultySplit.HARD: 300,
}


@dataclass
class BaselineConfig:
    triangle_caps: dict[DifficultySplit, int] = field(
        default_factory=lambda: dict(DEFAULT_TRIANGLE_CAPS))


def _triangle_bound(query: "QuerySpec", cfg: BaselineConfig) -> int:
    cap = cfg.triangle_caps[query.difficulty]
    return max(1, min(math.comb(query.n, 3), cap))


def _check_corpus(corpus: Sequence["QuerySpec"]) -> TaskKind:
    if not corpus:
        raise MixedTasks("baseline needs a nonempty corpus")
    tasks = {q.task for q in corpus}
    if len(tasks) != 1:
        raise MixedTasks(f"corpus mixes tasks: {sorted(t.value for t in tasks)}")
    return next(iter(tasks))


def _truth_value(task: TaskKind, query: "QuerySpec") -> bool:
    return bool(query.ground_truth["exists"]) if task is TaskKind.HAMILTONIAN \
        else bool(query.ground_truth)


def analytic_baseline(corpus: Sequence["QuerySpec"],
                      cfg: BaselineConfig | None = None) -> float:
    """Exact expected accuracy of the random-guessing policy."""
    cfg = cfg or BaselineConfig()
    task = _check_corpus(corpus)
    if task in (TaskKind.CYCLE, TaskKind.CONNECTIVITY, TaskKind.HAMILTONIAN):
        return sum(_truth_value(task, q) for q in corpus) / len(corpus)
    if task is TaskKind.DIAMETER:
        # The true diameter always lies in [1, N], so a uniform draw is
        # right with probability 1/N.
        return sum(1.0 / q.n for q in corpus if 1 <= q.ground_truth <= q.n) / len(corpus)
    if task is TaskKind.TRIANGLE:
        total = 0.0
        for q in corpus:
            bound = _triangle_bound(q, cfg)
            if 1 <= q.ground_truth <= bound:
                total += 1.0 / bound
        return total / len(corpus)
    if task in (TaskKind.BFS_ORDER, TaskKind.SHORTEST_PATH, TaskKind.MAX_CUT):
        return 0.0
    raise ValueError(f"unknown task {task!r}")


def monte_carlo_baseline(corpus: Sequence["QuerySpec"], rng: random.Random,
                         trials: int = 10_000,
                         cfg: BaselineConfig | None = None) -> float:
    """Simulate the guessing policy; converges on the analytic value."""
    cfg = cfg or BaselineConfig()
    task = _check_corpus(corpus)
    if task in (TaskKind.BFS_ORDER, TaskKind.SHORTEST_PATH, TaskKind.MAX_CUT):
        # The answer space is combinatorially large; a sampled guess
        # essentially never lands, so the simulation is pinned at 0.
        return 0.0
    hits = 0
    for _ in range(trials):
        q = corpus[rng.randrange(len(corpus))]
        if task in (TaskKind.CYCLE, TaskKind.CONNECTIVITY, TaskKind.HAMILTONIAN):
            hits += _truth_value(task, q)
        elif task is TaskKind.DIAMETER:
            hits += rng.randint(1, q.n) == q.ground_truth
        elif task is TaskKind.TRIANGLE:
            hits += rng.randint(1, _triangle_bound(q, cfg)) == q.ground_truth
    return hits / trials


def random_baseline(corpus: Sequence["QuerySpec"], mode: str = "analytic",
                    rng: random.Random | None = None, trials: int = 10_000,
                    cfg: BaselineConfig | None = None) -> float:
    """Baseline accuracy for a single-task corpus, in [0, 1]."""
    if mode == "analytic":
        return analytic_baseline(corpus, cfg)
    if mode == "monte-carlo":
        return monte_carlo_baseline(corpus, rng or random.Random(0), trials, cfg)
    raise ValueError(f"unknown baseline mode {mode!r}")
