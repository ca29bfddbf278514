"""Sequential DQN search over serialization-strategy factors, plus the
exhaustive grid search and the Cost/Rate efficiency metrics.

One decision epoch per factor dimension: epoch t picks an action from the
t-th dimension with an epsilon-greedy policy over a per-epoch Q network (a
three-layer ReLU MLP on one-hot state/action encodings). The terminal update
regresses on the observed reward; intermediate updates regress on the next
epoch's max Q. There is no replay buffer; updates are purely online.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol, Sequence

import numpy as np

from .errors import EmptyFactor, ZeroDenominator
from .generators import DifficultySplit
from .prompts import CASE_FUNCTIONS, PromptScheme, QA_DELIMS, SENTENCE_DELIMS, WORD_DELIMS
from .serialize import SerializationFormat
from .tasks import TaskKind

Combo = tuple[str, ...]
RewardFn = Callable[[Combo], float]

DEFAULT_MODELS = ("llama-3", "llama-3.1", "mistral", "phi-4", "qwen-2.5")


@dataclass(frozen=True)
class FactorSpace:
    """Ordered factor dimensions, each a named finite action set."""

    dims: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        for name, options in self.dims:
            if not options:
                raise EmptyFactor(f"factor {name!r} has no actions")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.dims)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(options) for _, options in self.dims)

    @property
    def k_total(self) -> int:
        total = 1
        for s in self.sizes:
            total *= s
        return total

    def options(self, t: int) -> tuple[str, ...]:
        return self.dims[t][1]

    def combos(self):
        return itertools.product(*(options for _, options in self.dims))


def default_space(models: Sequence[str] = DEFAULT_MODELS) -> FactorSpace:
    """The T=3 search space: prompt scheme, serialization format, model."""
    return FactorSpace((
        ("prompt_scheme", tuple(s.value for s in PromptScheme)),
        ("serialization", tuple(f.value for f in SerializationFormat)),
        ("model", tuple(models)),
    ))


def scaled_space(models: Sequence[str] = DEFAULT_MODELS, extra_factors: int = 4) -> FactorSpace:
    """The extended space appending up to four decoration factor pools."""
    pools = [
        ("sentence_delim", tuple(SENTENCE_DELIMS)),
        ("qa_delim", tuple(QA_DELIMS)),
        ("word_delim", tuple(WORD_DELIMS)),
        ("case", tuple(CASE_FUNCTIONS)),
    ]
    base = list(default_space(models).dims)
    return FactorSpace(tuple(base + pools[:extra_factors]))


@dataclass
class EpisodeEntry:
    episode: int
    combo: Combo
    reward: float
    epsilon: float


@dataclass
class SearchResult:
    best_combo: Combo
    best_reward: float
    episodes: int
    explored: int
    log: list[EpisodeEntry] = field(default_factory=list)
    epsilon_mode: str = "multiplicative"

    def to_dict(self) -> dict:
        return {
            "best_combo": list(self.best_combo),
            "best_reward": self.best_reward,
            "episodes": self.episodes,
            "explored": self.explored,
            "epsilon_mode": self.epsilon_mode,
        }


@dataclass
class DQNConfig:
    episodes: int = 80
    learning_rate: float = 0.001
    epsilon: float = 1.0
    epsilon_min: float = 0.01
    epsilon_decay: float = 0.95
    decay_mode: str = "multiplicative"  # or "linear"
    hidden: tuple[int, int] = (64, 64)
    optimizer: str = "adam"
    input_skip: bool = False
    seed: int = 0


class QFunction(Protocol):
    def predict(self, prefix: Combo) -> float: ...
    def update(self, prefix: Combo, target: float, lr: float) -> None: ...


class _QNet:
    """Three-layer ReLU MLP trained online on squared error.

    The output layer starts near zero so initial Q estimates do not drown
    the reward scale. Optimizers: "adam" (default), plain "sgd", and "nlms"
    (steepest descent with an exact line-search step size, so one update
    moves the prediction a fixed fraction of the way to its target; this
    keeps rarely visited actions from lagging). With skip=True a direct
    linear path from the one-hot input to the output is added, which fits
    the additive part of a reward landscape in a handful of updates.
    """

    def __init__(self, in_dim: int, hidden: tuple[int, int], rng: np.random.Generator,
                 optimizer: str = "adam", skip: bool = False):
        self.optimizer = optimizer
        sizes = [in_dim, hidden[0], hidden[1], 1]
        self.weights = []
        self.biases = []
        for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
            scale = np.sqrt(2.0 / fan_in) if i < len(sizes) - 2 else 0.01
            self.weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))
        self.skip = np.zeros(in_dim) if skip else None
        params = self.weights + self.biases + ([self.skip] if skip else [])
        self._m = [np.zeros_like(p) for p in params]
        self._v = [np.zeros_like(p) for p in params]
        self._t = 0

    def _forward(self, x: np.ndarray):
        acts = [x]
        h = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            h = np.maximum(z, 0.0) if i < len(self.weights) - 1 else z
            acts.append(h)
        if self.skip is not None:
            acts[-1] = acts[-1] + float(self.skip @ x)
        return acts

    def predict(self, x: np.ndarray) -> float:
        return float(self._forward(x)[-1][0])

    def update(self, x: np.ndarray, target: float, lr: float) -> None:
        acts = self._forward(x)
        pred = float(acts[-1][0])
        err = 2.0 * (pred - target)
        if err == 0.0:
            return
        grad_out = np.array([err])
        grads_w = [np.zeros_like(w) for w in self.weights]
        grads_b = [np.zeros_like(b) for b in self.biases]
        delta = grad_out
        for i in reversed(range(len(self.weights))):
            grads_w[i] = np.outer(acts[i], delta)
            grads_b[i] = delta
            if i > 0:
                delta = (self.weights[i] @ delta) * (acts[i] > 0)
        params = self.weights + self.biases
        grads = grads_w + grads_b
        if self.skip is not None:
            params = params + [self.skip]
            grads = grads + [err * x]
        self._t += 1
        if self.optimizer == "nlms":
            norm_sq = sum(float((g * g).sum()) for g in grads) / err ** 2
            step = lr / max(norm_sq, 1e-12)
            for p, g in zip(params, grads):
                p -= step * g
            return
        if self.optimizer == "sgd":
            for p, g in zip(params, grads):
                p -= lr * g
            return
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        for j, (p, g) in enumerate(zip(params, grads)):
            self._m[j] = beta1 * self._m[j] + (1 - beta1) * g
            self._v[j] = beta2 * self._v[j] + (1 - beta2) * g * g
            m_hat = self._m[j] / (1 - beta1 ** self._t)
            v_hat = self._v[j] / (1 - beta2 ** self._t)
            p -= lr * m_hat / (np.sqrt(v_hat) + eps)


class _Encoder:
    """One-hot encoding of the initial state plus chosen-so-far actions."""

    def __init__(self, s0: tuple[str, str], space: FactorSpace):
        tasks = [t.value for t in TaskKind]
        splits = [d.value for d in DifficultySplit]
        self._s0_vec = np.zeros(len(tasks) + len(splits))
        if s0[0] in tasks:
            self._s0_vec[tasks.index(s0[0])] = 1.0
        if s0[1] in splits:
            self._s0_vec[len(tasks) + splits.index(s0[1])] = 1.0
        self.space = space

    def input_dim(self, t: int) -> int:
        return len(self._s0_vec) + sum(self.space.sizes[:t + 1])

    def encode(self, prefix: Combo) -> np.ndarray:
        parts = [self._s0_vec]
        for d, action in enumerate(prefix):
            onehot = np.zeros(self.space.sizes[d])
            onehot[self.space.options(d).index(action)] = 1.0
            parts.append(onehot)
        return np.concatenate(parts)


class MLPQ:
    def __init__(self, encoder: _Encoder, t: int, hidden: tuple[int, int],
                 rng: np.random.Generator, optimizer: str = "adam", skip: bool = False):
        self._encoder = encoder
        self._net = _QNet(encoder.input_dim(t), hidden, rng, optimizer=optimizer, skip=skip)

    def predict(self, prefix: Combo) -> float:
        return self._net.predict(self._encoder.encode(prefix))

    def update(self, prefix: Combo, target: float, lr: float) -> None:
        self._net.update(self._encoder.encode(prefix), target, lr)


class TabularQ:
    """Exact Q table keyed by action prefix; useful for the greedy-
    consistency check where networks start at the true values."""

    def __init__(self, values: Mapping[Combo, float]):
        self.values = dict(values)

    def predict(self, prefix: Combo) -> float:
        return self.values.get(prefix, 0.0)

    def update(self, prefix: Combo, target: float, lr: float) -> None:
        current = self.values.get(prefix, 0.0)
        self.values[prefix] = current + lr * (target - current)


def make_tabular_q(space: FactorSpace, table: Mapping[Combo, float]) -> list[TabularQ]:
    """Per-epoch exact Q functions computed from a full reward table."""
    t_count = len(space.dims)
    layers: list[dict[Combo, float]] = [dict() for _ in range(t_count)]
    for combo, reward in table.items():
        layers[t_count - 1][combo] = float(reward)
    for t in range(t_count - 2, -1, -1):
        for combo, value in layers[t + 1].items():
            prefix = combo[:t + 1]
            layers[t][prefix] = max(layers[t].get(prefix, float("-inf")), value)
    return [TabularQ(layer) for layer in layers]


def run_dqn(s0: tuple[str, str], space: FactorSpace, reward_fn: RewardFn,
            cfg: DQNConfig | None = None,
            q_functions: Sequence[QFunction] | None = None) -> SearchResult:
    """Algorithm: per episode, choose actions epsilon-greedily epoch by
    epoch, evaluate the completed combination, and take one squared-error
    gradient step per epoch (terminal target = reward; intermediate target =
    next epoch's max Q). Epsilon decays after each episode, floored at
    epsilon_min. Rewards are memoized per combination, so revisits do not
    re-spend evaluations and `explored` counts distinct combinations.
    """
    cfg = cfg or DQNConfig()
    t_count = len(space.dims)
    rng = random.Random(cfg.seed)
    if q_functions is None:
        encoder = _Encoder(s0, space)
        np_rng = np.random.default_rng(cfg.seed)
        q_functions = [MLPQ(encoder, t, cfg.hidden, np_rng, optimizer=cfg.optimizer,
                            skip=cfg.input_skip) for t in range(t_count)]

    reward_cache: dict[Combo, float] = {}

    def evaluate(combo: Combo) -> float:
        if combo not in reward_cache:
            reward_cache[combo] = float(reward_fn(combo))
        return reward_cache[combo]

    epsilon = cfg.epsilon
    log: list[EpisodeEntry] = []
    best_combo: Combo | None = None
    best_reward = float("-inf")

    for episode in range(1, cfg.episodes + 1):
        prefix: Combo = ()
        for t in range(t_count):
            options = space.options(t)
            if rng.random() < epsilon:
                action = options[rng.randrange(len(options))]
            else:
                values = [q_functions[t].predict(prefix + (a,)) for a in options]
                action = options[int(np.argmax(values))]
            prefix = prefix + (action,)
            if t == t_count - 1:
                target = evaluate(prefix)
            else:
                nxt = space.options(t + 1)
                target = max(q_functions[t + 1].predict(prefix + (a,)) for a in nxt)
            q_functions[t].update(prefix, target, cfg.learning_rate)
        reward = reward_cache[prefix]
        log.append(EpisodeEntry(episode, prefix, reward, epsilon))
        if reward > best_reward:
            best_reward, best_combo = reward, prefix
        if cfg.decay_mode == "multiplicative":
            epsilon = max(cfg.epsilon_min, epsilon * cfg.epsilon_decay)
        elif cfg.decay_mode == "linear":
            epsilon = max(cfg.epsilon_min,
                          epsilon - (cfg.epsilon - cfg.epsilon_min) / max(1, cfg.episodes - 1))
        else:
            raise ValueError(f"unknown decay mode {cfg.decay_mode!r}")

    assert best_combo is not None
    return SearchResult(best_combo=best_combo, best_reward=best_reward,
                        episodes=cfg.episodes, explored=len(reward_cache),
                        log=log, epsilon_mode=cfg.decay_mode)


def grid_search(space: FactorSpace, reward_fn: RewardFn) -> SearchResult:
    """Evaluate every combination; optimal by construction, Cost = 1."""
    best_combo: Combo | None = None
    best_reward = float("-inf")
    log = []
    for i, combo in enumerate(space.combos(), 1):
        reward = float(reward_fn(combo))
        log.append(EpisodeEntry(i, combo, reward, 0.0))
        if reward > best_reward:
            best_reward, best_combo = reward, combo
    if best_combo is None:
        raise EmptyFactor("factor space has no combinations")
    return SearchResult(best_combo=best_combo, best_reward=best_reward,
                        episodes=len(log), explored=len(log), log=log,
                        epsilon_mode="grid")


def cost_rate(result: SearchResult, space: FactorSpace, acc_max: float) -> tuple[float, float]:
    """Cost = explored/K; Rate = best found accuracy / best possible."""
    if acc_max <= 0:
        raise ZeroDenominator("acc_max must be positive")
    return result.explored / space.k_total, result.best_reward / acc_max


def make_planted_landscape(space: FactorSpace, seed: int, noise: float = 0.03,
                           scale: float = 0.8, cap: float | None = None,
                           weights: Sequence[float] = (0.45, 0.35, 0.2),
                           ) -> tuple[dict[Combo, float], Combo]:
    """Synthetic reward table with one planted optimum at 1.0.

    Non-optimal rewards follow an additive per-factor structure, as real
    accuracy tables do: matching the planted action in dimension d adds
    weights[d]*scale. The weights are ordered so that the per-dimension
    greedy ranking is consistent even when the exact optimum has not been
    visited (w1 > min(w2, w3) and w2 > w3). `cap` clips non-optimal rewards
    (e.g. 0.5 for a hard needle-in-haystack table).
    """
    rng = random.Random(seed)
    planted = tuple(options[rng.randrange(len(options))] for _, options in space.dims)
    t_count = len(space.dims)
    w = list(weights)[:t_count]
    if len(w) < t_count:
        w += [w[-1]] * (t_count - len(w))
    w = [x / sum(w) for x in w]
    table: dict[Combo, float] = {}
    for combo in space.combos():
        if combo == planted:
            table[combo] = 1.0
            continue
        score = sum(wd for wd, a, p in zip(w, combo, planted) if a == p)
        value = scale * score + rng.random() * noise
        table[combo] = min(value, cap if cap is not None else scale)
    return table, planted


def table_reward_fn(table: Mapping[Combo, float]) -> RewardFn:
    return lambda combo: table[combo]
