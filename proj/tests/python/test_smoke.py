"""Smoke tests for the python module: the worked examples of every exposed
operation, checked against the same values the C++ suites pin down."""

import math

import pytest

import tgcast


@pytest.fixture
def toy_graph():
    return tgcast.TemporalGraph([(1, 2, 5), (2, 3, 7), (1, 3, 9)], name="toy")


def test_graph_basics(toy_graph):
    assert len(toy_graph) == 3
    assert toy_graph.name == "toy"
    assert toy_graph.node_universe() == [1, 2, 3]
    assert toy_graph.interactions()[0] == (1, 2, 5)


def test_history_before_is_strict(toy_graph):
    assert toy_graph.history_before(7) == [(1, 2, 5)]
    assert toy_graph.history_before(5) == []
    assert len(toy_graph.history_before(10)) == 3


def test_unsorted_input_is_sorted_stably():
    g = tgcast.TemporalGraph([(2, 3, 7), (1, 2, 5)])
    assert g.interactions() == [(1, 2, 5), (2, 3, 7)]


def test_temporal_neighborhood(toy_graph):
    assert toy_graph.temporal_neighborhood(1, 10) == [(3, 9), (2, 5)]
    assert toy_graph.temporal_neighborhood(3, 8) == [(2, 7)]
    assert toy_graph.temporal_neighborhood(5, 99) == []


def test_transition_probs():
    probs = tgcast.transition_probs([(3, 9), (2, 5)], beta=0.5)
    assert probs[0][:2] == (3, 9)
    assert probs[0][2] == pytest.approx(2 / 3, abs=1e-12)
    assert probs[1][2] == pytest.approx(1 / 3, abs=1e-12)


def test_termination_distribution_chain():
    g = tgcast.TemporalGraph([(20, 10, 8), (10, 30, 4)])
    mass = tgcast.termination_distribution(g, 20, 10, alpha=0.5, max_steps=2)
    assert mass[(20, 10)] == pytest.approx(0.5, abs=1e-12)
    assert mass[(10, 8)] == pytest.approx(0.25, abs=1e-12)
    assert mass[(30, 4)] == pytest.approx(0.25, abs=1e-12)
    assert sum(mass.values()) == pytest.approx(1.0, abs=1e-9)


def test_select_context(toy_graph):
    nodes, links = tgcast.select_context(toy_graph, 1, 10)
    assert nodes[0] == 1
    assert all(t < 10 for (_, _, t) in links)
    assert (1, 2, 5) in links


def test_group_queries():
    grouped = tgcast.group_queries([(1, 2, 5), (1, 3, 5), (2, 3, 7)])
    assert grouped == [(1, 5, [2, 3]), (2, 7, [3])]


def test_verbalize_and_prompt():
    text = tgcast.verbalize_context([(3390, 8648, 833529), (3390, 8648, 927657)])
    assert text == "(3390, 8648, 833529), (3390, 8648, 927657)"
    prompt = tgcast.build_prompt(text, 3390, 2677935)
    assert "<think>" in prompt and "<answer>" in prompt
    assert "3390" in prompt and "2677935" in prompt


def test_answer_parsing():
    assert tgcast.extract_tagged("<answer>[1]</answer><answer>[2]</answer>", "answer") == "[2]"
    assert tgcast.extract_tagged("plain", "answer") is None

    nodes, status = tgcast.parse_prediction_set("[8734, 8852, 9149]")
    assert nodes == [8734, 8852, 9149]
    assert status == "clean"

    nodes, status = tgcast.parse_response("no tags, nodes 5 and 7")
    assert nodes == []
    assert status == "missing-tags"


def test_reward_kernel():
    assert tgcast.f1_reward([1, 2, 3], [2, 4]) == pytest.approx(0.4, abs=1e-15)
    assert tgcast.f1_reward([8929], [8929]) == 1.0
    assert tgcast.f1_reward([], [7]) == 0.0

    adv = tgcast.group_advantages([1, 0, 0, 0, 0])
    assert adv == pytest.approx([2.0, -0.5, -0.5, -0.5, -0.5], abs=1e-12)
    assert tgcast.group_advantages([0.5, 0.5, 0.5]) == [0, 0, 0]


def test_metrics_worked_instance():
    out = tgcast.rank_of(3, [3, 7], [3, 5], 10, mode="mrr")
    assert (out["optimistic"], out["pessimistic"]) == (1.0, 2.0)
    out = tgcast.rank_of(7, [3, 7], [3, 5], 10, mode="mrr")
    assert (out["optimistic"], out["pessimistic"]) == (2.0, 10.0)

    instances = [([3, 7], [3, 5])]
    assert tgcast.mrr(instances, 10) == pytest.approx(5 / 12, abs=1e-12)
    assert tgcast.pmrr(instances, 10) == pytest.approx(1 / 3, abs=1e-12)


def test_judge_roundtrip():
    prompt = tgcast.build_judge_prompt("(1, 2, 5)", "trace", [8734, 8852, 9149])
    assert "[8734, 8852, 9149]" in prompt

    payload = (
        '{"claims":[{"text":"a","faithful":true},{"text":"b","faithful":true},'
        '{"text":"c","faithful":true},{"text":"d","faithful":true},'
        '{"text":"e","faithful":false}],"consistency":2,"justified":[8852]}'
    )
    verdict = tgcast.parse_verdict(payload, [8734, 8852, 9149])
    assert verdict["delta_f"] == pytest.approx(0.8)
    assert verdict["delta_lc"] == 1.0
    assert verdict["delta_a"] == pytest.approx(1 / 3)

    assert tgcast.parse_verdict("not json", [1]) is None


def test_baselines():
    g = tgcast.TemporalGraph([(1, 2, 5), (1, 3, 9), (2, 3, 7)])
    assert tgcast.edgebank_predict(g, 1, 10) == [2, 3]
    assert tgcast.edgebank_predict(g, 1, 10, kind="edgebank-window", window=3) == [3]
    assert tgcast.edgebank_predict(g, 4, 10) == []
    assert tgcast.recency_predict(g, 1, 10) == [3]
    ties = tgcast.TemporalGraph([(1, 2, 5), (1, 3, 5)])
    assert tgcast.recency_predict(ties, 1, 6) == [2, 3]


def test_template_constants():
    assert "<answer>" in tgcast.FORECAST_TEMPLATE
    assert len(tgcast.FORECAST_TEMPLATE_CHECKSUM) == 16
    assert "JSON" in tgcast.JUDGE_TEMPLATE
    assert tgcast.JUDGE_TEMPLATE_CHECKSUM != tgcast.FORECAST_TEMPLATE_CHECKSUM
