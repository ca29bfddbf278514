"""Submission layer for rendered prompts: a chat-completions HTTP backend,
deterministic mock backends for desk-scale testing, a content-addressed disk
cache, and bounded-concurrency batch execution.

This is the only concurrent module; everything it calls into is pure.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol, Sequence

import requests

from . import prompts as prompt_mod
from .errors import MalformedResponse, RateLimited, TransportError
from .graphs import Graph
from .serialize import SerializationFormat, parse
from .tasks import TaskKind, compute_ground_truth

ENDPOINT_ENV = "GRAPHBENCH_ENDPOINT"
API_KEY_ENV = "GRAPHBENCH_API_KEY"
CACHE_DIR_ENV = "GRAPHBENCH_CACHE_DIR"


@dataclass(frozen=True)
class CompletionRequest:
    model: str
    prompt: str
    temperature: float = 0.7
    top_p: float = 0.9
    max_tokens: int | None = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def cache_key(self) -> str:
        payload = "\x00".join([self.model, self.prompt, repr(self.temperature),
                               repr(self.top_p), repr(self.max_tokens)])
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class CompletionResponse:
    text: str
    tokens_in: int | None = None
    tokens_out: int | None = None
    latency_ms: float = 0.0
    backend: str = ""
    cached: bool = False


class Backend(Protocol):
    name: str

    def complete(self, req: CompletionRequest) -> CompletionResponse: ...


class HttpBackend:
    """POST to a chat-completions style endpoint.

    The endpoint URL and key come from arguments or the GRAPHBENCH_ENDPOINT /
    GRAPHBENCH_API_KEY environment variables.
    """

    def __init__(self, endpoint: str | None = None, api_key: str | None = None,
                 timeout: float = 120.0, session: requests.Session | None = None):
        self.endpoint = endpoint or os.environ.get(ENDPOINT_ENV, "")
        if not self.endpoint:
            raise TransportError(f"no endpoint configured (set {ENDPOINT_ENV})")
        self.api_key = api_key or os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout
        self.session = session or requests.Session()
        self.name = "http"

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        body = {
            "model": req.model,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "top_p": req.top_p,
        }
        if req.max_tokens is not None:
            body["max_tokens"] = req.max_tokens
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        start = time.monotonic()
        try:
            resp = self.session.post(self.endpoint, json=body, headers=headers,
                                     timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        latency = (time.monotonic() - start) * 1000.0
        if resp.status_code == 429:
            raise RateLimited(f"429 from {self.endpoint}")
        if resp.status_code >= 400:
            raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            data = resp.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected response shape: {exc}") from exc
        usage = data.get("usage") or {}
        return CompletionResponse(
            text=text,
            tokens_in=usage.get("prompt_tokens"),
            tokens_out=usage.get("completion_tokens"),
            latency_ms=latency,
            backend=self.name,
        )


_CONNECTOR_RE = re.compile(
    r"And the graph representation of: (?P<fmt>[^\n]+?) is \n", re.IGNORECASE)
_Q_RE = re.compile(r"^Q: (?P<q>.+)$", re.MULTILINE)

_DISPLAY_TO_FMT = {f.display_name.lower(): f for f in SerializationFormat}


def parse_prompt(prompt: str) -> tuple[TaskKind, Graph, dict[str, int]]:
    """Recover (task, graph, params) from a canonical undecorated prompt.

    Works on the final item of the prompt (the last graph block and last
    question line), which is exactly what a responder must answer.
    """
    connectors = list(_CONNECTOR_RE.finditer(prompt))
    if not connectors:
        raise MalformedResponse("prompt has no graph connector line")
    conn = connectors[-1]
    fmt = _DISPLAY_TO_FMT.get(conn.group("fmt").strip().lower())
    if fmt is None:
        raise MalformedResponse(f"unknown serialization name {conn.group('fmt')!r}")
    tail = prompt[conn.end():]
    graph_text = tail.split("\n\n", 1)[0]
    g = parse(graph_text, fmt)

    questions = list(_Q_RE.finditer(prompt))
    if not questions:
        raise MalformedResponse("prompt has no question line")
    q = questions[-1].group("q").strip()
    ql = q.lower()
    if "bfs traversal order" in ql:
        m = re.search(r"from node (\d+)", ql)
        return TaskKind.BFS_ORDER, _cover(g, int(m.group(1))), {"start": int(m.group(1))}
    if "cycle" in ql and "hamiltonian" not in ql:
        return TaskKind.CYCLE, g, {}
    if "hamiltonian" in ql:
        return TaskKind.HAMILTONIAN, g, {}
    if "path between node" in ql:
        m = re.search(r"between node (\d+) and node (\d+)", ql)
        u, v = int(m.group(1)), int(m.group(2))
        return TaskKind.CONNECTIVITY, _cover(g, u, v), {"u": u, "v": v}
    if "shortest path" in ql:
        m = re.search(r"from node (\d+) to node (\d+)", ql)
        u, v = int(m.group(1)), int(m.group(2))
        return TaskKind.SHORTEST_PATH, _cover(g, u, v), {"u": u, "v": v}
    if "diameter" in ql:
        return TaskKind.DIAMETER, g, {}
    if "triangle" in ql:
        return TaskKind.TRIANGLE, g, {}
    if "maximum cut" in ql:
        return TaskKind.MAX_CUT, g, {}
    raise MalformedResponse(f"cannot identify task from question {q!r}")


def _cover(g: Graph, *nodes: int) -> Graph:
    """Grow the node count to cover nodes named in the question. Edge-only
    serializations cannot express isolated nodes, but the question text
    still implies they exist."""
    need = max(nodes) + 1
    return g if need <= g.n else Graph(need, g.edges)


def _wrong_answer(task: TaskKind, g: Graph, params: dict[str, int], gt) -> str:
    """An answer in the canonical phrasing that is guaranteed to score 0."""
    if task in (TaskKind.CYCLE, TaskKind.CONNECTIVITY):
        return prompt_mod.gold_answer(task, g, params, not gt)
    if task in (TaskKind.DIAMETER, TaskKind.TRIANGLE):
        return prompt_mod.gold_answer(task, g, params, gt + 1)
    if task is TaskKind.BFS_ORDER:
        order = prompt_mod._bfs_order(g, params["start"])
        bad = [order[1], order[0], *order[2:]] if len(order) > 1 else [order[0], order[0]]
        seq = ",".join(map(str, bad))
        return f"The BFS traversal order starting from node {params['start']} is {seq}"
    if task is TaskKind.SHORTEST_PATH:
        return (f"The shortest path from node {params['u']} to node {params['v']} "
                f"is {params['u']}.")
    if task is TaskKind.HAMILTONIAN:
        if gt["exists"]:
            return "No, there is no Hamiltonian cycle in this graph."
        tour = ",".join(map(str, list(range(g.n)) + [0]))
        return f"Yes, there is a Hamiltonian cycle in this graph. The cycle is {tour}."
    if task is TaskKind.MAX_CUT:
        bad = dict(gt)
        bad["size"] = gt["size"] + 1
        return prompt_mod.gold_answer(task, g, params, bad)
    raise ValueError(f"unknown task {task!r}")


class MockBackend:
    """Deterministic responder that reads the prompt, reruns the oracle, and
    answers in the canonical phrasing.

    mode="oracle" always answers correctly; mode="bernoulli" answers
    incorrectly with probability error_rate, decided by a stable hash of the
    prompt so repeats (and cache hits) agree. An optional rate_limit_prob
    makes the first attempt for a matching prompt fail with RateLimited, for
    retry testing.
    """

    def __init__(self, mode: str = "oracle", error_rate: float = 0.0, seed: int = 0,
                 fixed_tokens_out: int | None = None, rate_limit_prob: float = 0.0,
                 np_node_cap: int = 64):
        if mode not in ("oracle", "bernoulli"):
            raise ValueError(f"unknown mock mode {mode!r}")
        self.mode = mode
        self.error_rate = error_rate
        self.seed = seed
        self.fixed_tokens_out = fixed_tokens_out
        self.rate_limit_prob = rate_limit_prob
        self.np_node_cap = np_node_cap
        self.name = f"mock-{mode}"
        self.calls = 0
        self._attempts: dict[str, int] = {}
        self._lock = threading.Lock()

    def _unit(self, prompt: str, salt: str) -> float:
        digest = hashlib.sha256(f"{self.seed}\x00{salt}\x00{prompt}".encode()).digest()
        return int.from_bytes(digest[:8], "big") / 2**64

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        with self._lock:
            self.calls += 1
            if self.rate_limit_prob > 0:
                attempt = self._attempts.get(req.prompt, 0)
                self._attempts[req.prompt] = attempt + 1
                if attempt == 0 and self._unit(req.prompt, "ratelimit") < self.rate_limit_prob:
                    raise RateLimited("injected rate limit")
        task, g, params = parse_prompt(req.prompt)
        gt = compute_ground_truth(task, g, params, node_cap=self.np_node_cap)
        wrong = (self.mode == "bernoulli"
                 and self._unit(req.prompt, "bernoulli") < self.error_rate)
        if wrong:
            text = _wrong_answer(task, g, params, gt)
        else:
            text = prompt_mod.gold_answer(task, g, params, gt)
        tokens_out = self.fixed_tokens_out
        if tokens_out is None:
            tokens_out = len(text.split())
        return CompletionResponse(text=text, tokens_in=len(req.prompt.split()),
                                  tokens_out=tokens_out, latency_ms=0.0,
                                  backend=self.name)


class CannedBackend:
    """Replays stored transcripts keyed by the request's cache key or raw
    prompt; unknown prompts raise MalformedResponse."""

    def __init__(self, responses: dict[str, str]):
        self.responses = responses
        self.name = "canned"

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        text = self.responses.get(req.cache_key(), self.responses.get(req.prompt))
        if text is None:
            raise MalformedResponse(f"no canned response for prompt {req.prompt[:60]!r}...")
        return CompletionResponse(text=text, tokens_out=len(text.split()),
                                  backend=self.name)


@dataclass
class BatchResult:
    request: CompletionRequest
    response: CompletionResponse | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.response is not None


class Gateway:
    """Caching, retrying front door to a backend.

    The cache is content-addressed on disk, so interrupted runs resume
    without re-spending completions; identical requests never hit the
    network twice.
    """

    def __init__(self, backend: Backend, cache_dir: str | Path | None = None,
                 max_retries: int = 5, backoff_base: float = 0.5,
                 backoff_cap: float = 30.0,
                 sleep: Callable[[float], None] = time.sleep):
        self.backend = backend
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_DIR_ENV) or None
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.backoff_cap = backoff_cap
        self.sleep = sleep
        self.network_calls = 0
        self.cache_hits = 0
        self._lock = threading.Lock()

    def _cache_path(self, key: str) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / key[:2] / f"{key}.json"

    def _cache_read(self, req: CompletionRequest) -> CompletionResponse | None:
        path = self._cache_path(req.cache_key())
        if path is None or not path.exists():
            return None
        data = json.loads(path.read_text("utf-8"))
        return CompletionResponse(text=data["text"], tokens_in=data.get("tokens_in"),
                                  tokens_out=data.get("tokens_out"),
                                  latency_ms=data.get("latency_ms", 0.0),
                                  backend=data.get("backend", ""), cached=True)

    def _cache_write(self, req: CompletionRequest, resp: CompletionResponse) -> None:
        path = self._cache_path(req.cache_key())
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {"text": resp.text, "tokens_in": resp.tokens_in,
                   "tokens_out": resp.tokens_out, "latency_ms": resp.latency_ms,
                   "backend": resp.backend}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload), "utf-8")
        tmp.replace(path)

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        cached = self._cache_read(req)
        if cached is not None:
            with self._lock:
                self.cache_hits += 1
            return cached
        delay = self.backoff_base
        for attempt in range(self.max_retries + 1):
            with self._lock:
                self.network_calls += 1
            try:
                resp = self.backend.complete(req)
                break
            except RateLimited:
                if attempt == self.max_retries:
                    raise
                self.sleep(min(delay, self.backoff_cap))
                delay *= 2
        self._cache_write(req, resp)
        return resp

    def run_batch(self, requests_in: Sequence[CompletionRequest],
                  max_in_flight: int = 4) -> list[BatchResult]:
        """Complete every request with at most max_in_flight outstanding.

        Output order matches input order; per-item failures are recorded in
        place and never abort the batch.
        """
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        results = [BatchResult(request=r) for r in requests_in]

        def work(i: int) -> None:
            try:
                results[i].response = self.complete(requests_in[i])
            except Exception as exc:
                results[i].error = f"{type(exc).__name__}: {exc}"

        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            list(pool.map(work, range(len(requests_in))))
        return results
