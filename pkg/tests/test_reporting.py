"""Aggregation, sensitivity metrics, and token reports."""

import itertools
import math
import random

import pytest

from graphbench.errors import EmptyGroup, InsufficientCoverage
from graphbench.reporting import aggregate, rows_to_csv, sensitivity, token_report


def make_records(score_fn, models=("m1", "m2"), schemes=("0-shot", "CoT"),
                 formats=("edge_list", "gmol"), families=("erm", "bag"),
                 per_cell=4, task="cycle", difficulty="easy"):
    records = []
    for model, scheme, fmt, family in itertools.product(models, schemes, formats, families):
        for i in range(per_cell):
            records.append({
                "query_id": f"q{i}", "model": model, "prompt_scheme": scheme,
                "serialization": fmt, "graph_type": family, "task": task,
                "difficulty": difficulty,
                "score": score_fn(model, scheme, fmt, family, i),
                "tokens_out": 100,
            })
    return records


def test_oracle_run_every_pivot_is_one():
    records = make_records(lambda *a: 1)
    for dim in ("model", "prompt_scheme", "serialization", "graph_type"):
        for row in aggregate(records, [dim]):
            assert row["mean"] == 1.0 and row["ci95"] == 0.0


def test_single_combination_margin_zero():
    records = make_records(lambda *a: 1, models=("m1",), schemes=("0-shot",),
                           formats=("edge_list",), families=("erm",))
    rows = aggregate(records, ["model"])
    assert rows[0]["combinations"] == 1 and rows[0]["ci95"] == 0.0


def test_ci_unit_is_combination_mean():
    # one combo scores all 1, the other all 0 -> mean 0.5 regardless of
    # per-combo record counts
    def score(model, scheme, fmt, family, i):
        return 1 if scheme == "0-shot" else 0
    records = make_records(score, models=("m1",), formats=("edge_list",),
                           families=("erm",))
    rows = aggregate(records, ["model"])
    assert rows[0]["mean"] == 0.5
    assert rows[0]["combinations"] == 2
    expected_margin = 1.96 * (0.5 * math.sqrt(2)) / math.sqrt(2)
    assert math.isclose(rows[0]["ci95"], expected_margin)


def test_bernoulli_records_near_expected():
    rng = random.Random(1)
    records = make_records(lambda *a: int(rng.random() >= 0.1), per_cell=80)
    overall = aggregate(records, [])
    n = len(records)
    sigma = math.sqrt(0.9 * 0.1 / n)
    assert abs(overall[0]["mean"] - 0.9) <= 3 * sigma


def test_aggregation_permutation_invariant():
    rng = random.Random(2)
    records = make_records(lambda *a: rng.randint(0, 1))
    rows = aggregate(records, ["model"])
    shuffled = list(records)
    rng.shuffle(shuffled)
    assert aggregate(shuffled, ["model"]) == rows


def test_collapsed_group_matches_overall_mean():
    rng = random.Random(3)
    records = make_records(lambda *a: rng.randint(0, 1))
    overall = aggregate(records, [], combo_dims=[])[0]["mean"]
    assert math.isclose(overall, sum(r["score"] for r in records) / len(records))


def test_empty_group():
    with pytest.raises(EmptyGroup):
        aggregate([], ["model"])


def test_sensitivity_identical_accuracy_is_robust():
    records = make_records(lambda *a: 1)
    rows = sensitivity(records, "cycle", "easy")
    assert all(r["s_p"] == 0 and r["s_f"] == 0 for r in rows)
    assert all(r["quadrant"] == "Robust" for r in rows)


def test_sensitivity_scheme_only_variation():
    # accuracy depends only on the prompt scheme: S_p > 0, S_f = 0
    def score(model, scheme, fmt, family, i):
        return 1 if scheme == "CoT" else 0
    records = make_records(score, families=("erm", "bag", "sf"))
    rows = sensitivity(records, "cycle", "easy")
    assert all(r["s_f"] == 0 for r in rows)
    assert all(r["s_p"] == 0.5 for r in rows)


def test_sensitivity_hand_computed_values():
    # one family: cell accuracies scheme x format = [[1, 0], [1, 1]]
    cells = {("0-shot", "edge_list"): 1, ("0-shot", "gmol"): 0,
             ("CoT", "edge_list"): 1, ("CoT", "gmol"): 1}
    records = []
    for (scheme, fmt), s in cells.items():
        for family in ("erm", "bag"):
            records.append({"model": "m", "prompt_scheme": scheme, "serialization": fmt,
                            "graph_type": family, "task": "cycle", "difficulty": "easy",
                            "score": s, "tokens_out": None})
    rows = sensitivity(records, "cycle", "easy")
    # S_p: std across schemes per format -> [0, 0.5], mean 0.25
    # S_f: std across formats per scheme -> [0.5, 0], mean 0.25
    for r in rows:
        assert math.isclose(r["s_p"], 0.25)
        assert math.isclose(r["s_f"], 0.25)


def test_sensitivity_requires_coverage():
    records = make_records(lambda *a: 1, schemes=("0-shot",))
    with pytest.raises(InsufficientCoverage):
        sensitivity(records, "cycle", "easy")
    with pytest.raises(EmptyGroup):
        sensitivity(records, "diameter", "easy")


def test_token_report_fixed_tokens():
    records = make_records(lambda *a: 1)
    report = token_report(records, ["model"])
    assert report["excluded_no_usage"] == 0
    assert all(row["mean_tokens_out"] == 100 for row in report["rows"])


def test_token_report_exclusions():
    records = make_records(lambda *a: 1, per_cell=2)
    for r in records:
        r["tokens_out"] = None
    report = token_report(records, ["model"])
    assert report["rows"] == [] and report["excluded_no_usage"] == len(records)
    records[0]["tokens_out"] = 40
    records[1]["tokens_out"] = 60
    report = token_report(records, [])
    assert report["rows"][0]["mean_tokens_out"] == 50.0
    assert report["excluded_no_usage"] == len(records) - 2


def test_rows_to_csv():
    rows = [{"a": 1, "b": 0.5}, {"a": 2, "b": 0.25}]
    assert rows_to_csv(rows) == "a,b\n1,0.5000\n2,0.2500\n"
    assert rows_to_csv([]) == ""
