"""Glue that runs queries end to end: compose prompts, submit through the
gateway, extract and score answers, and emit result records.

Result records carry the JSONL fields plus the query's task / difficulty /
graph_type so reports can pivot without a separate join.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from . import answer_eval
from .corpus import QuerySpec
from .gateway import CompletionRequest, Gateway
from .prompts import DecorationFactors, ExemplarBank, IDENTITY_DECORATION, PromptScheme, build_exemplars, compose_prompt
from .serialize import SerializationFormat
from .tasks import TaskKind


class BankStore:
    """Lazily built, memoized exemplar banks per (task, scheme)."""

    def __init__(self, k: int = 5):
        self.k = k
        self._banks: dict[tuple[TaskKind, PromptScheme], ExemplarBank] = {}

    def get(self, task: TaskKind, scheme: PromptScheme) -> ExemplarBank | None:
        if not scheme.shot_bearing:
            return None
        key = (task, scheme)
        if key not in self._banks:
            self._banks[key] = build_exemplars(task, scheme, k=self.k)
        return self._banks[key]


def score_response(query: QuerySpec, response_text: str) -> tuple[Any, int]:
    """Extract and score one response; returns (normalized answer, score)."""
    ans = answer_eval.extract(query.task, response_text)
    s = answer_eval.score(query.task, query.graph, query.params, query.ground_truth, ans)
    return _answer_repr(ans), s


def _answer_repr(ans: answer_eval.ExtractedAnswer) -> Any:
    if isinstance(ans, answer_eval.BoolAnswer):
        return ans.value
    if isinstance(ans, answer_eval.NumberAnswer):
        return ans.value
    if isinstance(ans, answer_eval.SequenceAnswer):
        return list(ans.nodes)
    if isinstance(ans, answer_eval.CutAnswer):
        part = None
        if ans.partition:
            part = [sorted(ans.partition[0]), sorted(ans.partition[1])]
        return {"size": ans.size, "partition": part}
    return None


def run_evaluation(queries: Sequence[QuerySpec], schemes: Sequence[PromptScheme],
                   formats: Sequence[SerializationFormat], gateway: Gateway,
                   model: str = "mock", max_in_flight: int = 4,
                   deco: DecorationFactors = IDENTITY_DECORATION,
                   bank_store: BankStore | None = None,
                   temperature: float = 0.7, top_p: float = 0.9,
                   ) -> list[dict[str, Any]]:
    """Evaluate every (query, scheme, format) cell and return result records."""
    bank_store = bank_store or BankStore()
    jobs: list[tuple[QuerySpec, PromptScheme, SerializationFormat, CompletionRequest]] = []
    for query in queries:
        for scheme in schemes:
            bank = bank_store.get(query.task, scheme)
            for fmt in formats:
                prompt = compose_prompt(query, scheme, fmt, bank=bank, deco=deco)
                req = CompletionRequest(model=model, prompt=prompt,
                                        temperature=temperature, top_p=top_p)
                jobs.append((query, scheme, fmt, req))

    results = gateway.run_batch([j[3] for j in jobs], max_in_flight=max_in_flight)
    records = []
    for (query, scheme, fmt, req), item in zip(jobs, results):
        rec: dict[str, Any] = {
            "query_id": query.id,
            "model": model,
            "prompt_scheme": scheme.value,
            "serialization": fmt.value,
            "task": query.task.value,
            "difficulty": query.difficulty.value,
            "graph_type": query.family.value,
        }
        if item.ok:
            extracted, s = score_response(query, item.response.text)
            rec.update({
                "response": item.response.text,
                "extracted": extracted,
                "score": s,
                "tokens_in": item.response.tokens_in,
                "tokens_out": item.response.tokens_out,
                "latency_ms": item.response.latency_ms,
            })
        else:
            rec.update({"response": None, "extracted": None, "score": 0,
                        "tokens_in": None, "tokens_out": None,
                        "latency_ms": None, "error": item.error})
        records.append(rec)
    return records


def accuracy(records: Iterable[dict[str, Any]]) -> float:
    records = list(records)
    if not records:
        return 0.0
    return sum(r["score"] for r in records) / len(records)
