import random
from fractions import Fraction

import pytest

from congestlab.errors import (BandwidthViolation, ChannelViolation,
                               RegimeMismatch, SupportTooLarge)
from congestlab.graphs import Layer, TypedTripartiteGraph, VertexId
from congestlab.protocols import (ProtocolSpec, exact_success,
                                  estimate_success, judge, registry, simulate,
                                  vertex_input, wilson_interval)
from congestlab.randomness import RandomnessView
from congestlab.sampling import enumerate_g0, sample_g0


def triangle_instance():
    g = TypedTripartiteGraph(1, 1)
    a, b, c = VertexId(Layer.A, 1), VertexId(Layer.B, 1), VertexId(Layer.C, 1)
    for u, v in ((a, b), (b, c), (c, a)):
        g.set_type(u, v, 0)
    return g


def test_vertex_input_partners_by_round():
    g = triangle_instance()
    inp = vertex_input(g, VertexId(Layer.A, 1))
    assert set(inp.partners_at_round(1)) == {VertexId(Layer.B, 1),
                                             VertexId(Layer.C, 1)}


def test_simulate_regime_mismatch():
    pi = registry(rounds=2)["all-no"]
    with pytest.raises(RegimeMismatch):
        simulate(pi, triangle_instance(), RandomnessView(0))


def test_type_broadcast_detects_triangle():
    pi = registry(rounds=1)["type-broadcast"]
    transcript, outputs = simulate(pi, triangle_instance(), RandomnessView(0))
    assert any(outputs.values())
    assert judge(triangle_instance(), outputs)
    assert transcript.max_length() == 1


def test_type_broadcast_silent_on_non_edge():
    g = TypedTripartiteGraph(1, 1)
    g.set_type(VertexId(Layer.A, 1), VertexId(Layer.B, 1), 1)
    pi = registry(rounds=1)["type-broadcast"]
    _, outputs = simulate(pi, g, RandomnessView(0))
    assert not any(outputs.values())
    assert judge(g, outputs)


def test_bandwidth_violation_detected():
    pi = ProtocolSpec(
        "fat", 1, 1,
        lambda i, inp, inbox, view: {v: "11" for v in inp.partners_at_round(i)},
        lambda inp, inbox, view: False)
    with pytest.raises(BandwidthViolation):
        simulate(pi, triangle_instance(), RandomnessView(0))


def test_non_bitstring_message_rejected():
    pi = ProtocolSpec(
        "bad", 1, 8,
        lambda i, inp, inbox, view: {v: "2" for v in inp.partners_at_round(i)},
        lambda inp, inbox, view: False)
    with pytest.raises(BandwidthViolation):
        simulate(pi, triangle_instance(), RandomnessView(0))


def test_channel_violation_detected():
    g = TypedTripartiteGraph(1, 1)  # no channels at all
    pi = ProtocolSpec(
        "ghost", 1, 1,
        lambda i, inp, inbox, view: {VertexId(Layer.B, 1): "0"}
        if inp.identity.layer is Layer.A else {},
        lambda inp, inbox, view: False)
    with pytest.raises(ChannelViolation):
        simulate(pi, g, RandomnessView(0))


def test_judge_rules():
    g = triangle_instance()
    vs = list(g.vertices())
    assert judge(g, {v: v.layer is Layer.A for v in vs})
    assert not judge(g, {v: False for v in vs})
    g2 = TypedTripartiteGraph(1, 1)
    assert judge(g2, {v: False for v in g2.vertices()})
    assert not judge(g2, {v: True for v in g2.vertices()})


def test_transcript_jsonl_contains_all_messages():
    pi = registry(rounds=1)["constant-message"]
    transcript, _ = simulate(pi, triangle_instance(), RandomnessView(0))
    lines = transcript.to_jsonl().splitlines()
    assert len(lines) == 6  # three channels, both directions


def test_exact_success_all_no_is_seven_eighths():
    pi = registry(rounds=0)["all-no"]
    assert exact_success(pi, enumerate_g0(1)) == Fraction(7, 8)


def test_exact_success_always_yes_is_one_eighth():
    pi = registry(rounds=0)["always-yes"]
    assert exact_success(pi, enumerate_g0(1)) == Fraction(1, 8)


def test_exact_success_rejects_tape_dependence():
    pi = ProtocolSpec(
        "coin", 0, 1,
        lambda i, inp, inbox, view: {},
        lambda inp, inbox, view: view.private_rng("c").random() < 0.5,
        deterministic=False)
    with pytest.raises(SupportTooLarge):
        exact_success(pi, enumerate_g0(1))


def test_estimate_success_matches_exact():
    pi = registry(rounds=0)["all-no"]
    freq, (lo, hi) = estimate_success(
        pi, lambda s: sample_g0(1, random.Random(s))[0], 2000, 0)
    assert lo <= 7 / 8 <= hi
    assert abs(freq - 7 / 8) < 0.03


def test_wilson_interval_bounds():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0.0 and 0 < hi < 0.35
    lo, hi = wilson_interval(10, 10)
    assert hi == 1.0 and lo > 0.65
