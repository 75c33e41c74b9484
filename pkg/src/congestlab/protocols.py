"""Deterministic protocol abstraction, synchronous simulation, and judging.

Messages are bit strings of explicit length (zero-length allowed); a pair
without an available channel carries no entry at all, which receivers can
distinguish from an empty message through the channel metadata in their
input vectors.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .errors import (BandwidthViolation, ChannelViolation, RegimeMismatch,
                     SupportTooLarge)
from .graphs import LAYERS, Layer, TypedTripartiteGraph, VertexId
from .randomness import RandomnessView


@dataclass
class VertexInput:
    """Everything one vertex knows up front: identity and its type vectors."""

    identity: VertexId
    vectors: dict  # other Layer -> length-n list of types
    r: int

    @property
    def n(self) -> int:
        return len(next(iter(self.vectors.values())))

    def pair_type(self, other: VertexId) -> int:
        return self.vectors[other.layer][other.index - 1]

    def partners_at_round(self, i: int):
        """Vertices reachable in round i (pairs of type <= r+1-i)."""
        cutoff = self.r + 1 - i
        for layer, vec in self.vectors.items():
            for idx, t in enumerate(vec, start=1):
                if t <= cutoff:
                    yield VertexId(layer, idx)


def vertex_input(g: TypedTripartiteGraph, v: VertexId) -> VertexInput:
    return VertexInput(
        identity=v,
        vectors={w: g.neighborhood_vector(v, w) for w in v.layer.others},
        r=g.r,
    )


@dataclass
class ProtocolSpec:
    """A protocol: per-round message map plus an output rule.

    message_fn(round, input, inbox, view) returns {partner VertexId: bits};
    output_fn(input, inbox, view) returns True for Yes.  ``inbox`` maps
    (round, sender) to the received bit string.  ``deterministic`` protocols
    must ignore the randomness view entirely.  ``message_given_type`` is set
    when every round-1 message is a fixed function of the pair type alone;
    it maps a type to the bits sent over a channel of that type.
    """

    name: str
    rounds: int
    bandwidth: int
    message_fn: object
    output_fn: object
    deterministic: bool = True
    message_given_type: object = None


class Transcript:
    """All messages of one execution, keyed by (round, sender, receiver)."""

    def __init__(self):
        self.entries: dict = {}

    def record(self, rnd: int, sender: VertexId, receiver: VertexId, bits: str):
        self.entries[(rnd, sender, receiver)] = bits

    def inbox_of(self, v: VertexId, upto_round: int) -> dict:
        return {
            (rnd, s): bits
            for (rnd, s, rcv), bits in self.entries.items()
            if rcv == v and rnd <= upto_round
        }

    def max_length(self) -> int:
        return max((len(b) for b in self.entries.values()), default=0)

    def to_jsonl(self) -> str:
        lines = []
        for (rnd, s, rcv), bits in sorted(
            self.entries.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]), repr(kv[0][2]))
        ):
            lines.append(json.dumps({
                "round": rnd, "from": repr(s), "to": repr(rcv),
                "bits": bits, "len": len(bits),
            }))
        return "\n".join(lines)


def _check_bits(bits: str, s: int, sender, receiver):
    if not isinstance(bits, str) or any(ch not in "01" for ch in bits):
        raise BandwidthViolation(
            f"message {sender}->{receiver} is not a bit string: {bits!r}"
        )
    if len(bits) > s:
        raise BandwidthViolation(
            f"message {sender}->{receiver} has {len(bits)} bits > s={s}"
        )


def simulate(p: ProtocolSpec, g: TypedTripartiteGraph, rnd: RandomnessView):
    """Synchronous execution; returns (Transcript, {vertex: Yes boolean})."""
    if p.rounds != g.r:
        raise RegimeMismatch(f"protocol rounds {p.rounds} != graph regime {g.r}")
    inputs = {v: vertex_input(g, v) for v in g.vertices()}
    transcript = Transcript()
    for i in range(1, p.rounds + 1):
        available = g.channels_at_round(i)
        round_msgs = []
        for v, inp in inputs.items():
            inbox = transcript.inbox_of(v, i - 1)
            msgs = p.message_fn(i, inp, inbox, rnd.restrict(v))
            for target, bits in msgs.items():
                key = (min(v, target), max(v, target))
                if key not in available:
                    raise ChannelViolation(
                        f"round {i}: no channel for {v}->{target}"
                    )
                _check_bits(bits, p.bandwidth, v, target)
                round_msgs.append((v, target, bits))
        # deliver only after the whole round is computed
        for v, target, bits in round_msgs:
            transcript.record(i, v, target, bits)
    outputs = {
        v: bool(p.output_fn(inp, transcript.inbox_of(v, p.rounds),
                            rnd.restrict(v)))
        for v, inp in inputs.items()
    }
    return transcript, outputs


def judge(g: TypedTripartiteGraph, outputs: dict) -> bool:
    """Success rule: any Yes suffices on triangle instances, otherwise all
    vertices must say No."""
    if g.has_triangle():
        return any(outputs.values())
    return not any(outputs.values())


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def estimate_success(p: ProtocolSpec, sampler, trials: int, seed: int):
    """Monte Carlo success frequency with a 95% Wilson interval.

    ``sampler(seed)`` must return an instance (or a tuple whose first item
    is the instance).
    """
    successes = 0
    for i in range(trials):
        drawn = sampler(seed + i)
        g = drawn[0] if isinstance(drawn, tuple) else drawn
        _, outputs = simulate(p, g, RandomnessView(seed + i))
        if judge(g, outputs):
            successes += 1
    return successes / trials, wilson_interval(successes, trials)


def exact_success(p: ProtocolSpec, support, probe_seeds=None,
                  cap: int = 10 ** 6):
    """Exact success probability over an explicit weighted support.

    ``support`` yields (graph, ..., weight) tuples with exact rational
    weights.  For protocols that consume randomness, the judged outcome is
    required to be identical across ``probe_seeds`` on every instance (the
    default probes 20 seeds); a tape-dependent outcome raises, since no
    exact value exists then.
    """
    from fractions import Fraction

    seeds = probe_seeds if probe_seeds is not None else (
        [0] if p.deterministic else list(range(20))
    )
    total = Fraction(0)
    count = 0
    for entry in support:
        count += 1
        if count > cap:
            raise SupportTooLarge(f"support exceeds cap {cap}")
        g, weight = entry[0], entry[-1]
        verdicts = set()
        for s in seeds:
            _, outputs = simulate(p, g, RandomnessView(s))
            verdicts.add(judge(g, outputs))
        if len(verdicts) != 1:
            raise SupportTooLarge(
                "judged outcome depends on the randomness tapes; "
                "no exact success value exists"
            )
        if verdicts.pop():
            total += weight
    return total


# -- registry -------------------------------------------------------------


def _no_messages(i, inp, inbox, view):
    return {}


def _broadcast(bits_of_type):
    def fn(i, inp, inbox, view):
        return {v: bits_of_type(inp.pair_type(v))
                for v in inp.partners_at_round(i)}
    return fn


def _all_no(inp, inbox, view):
    return False


def _all_yes(inp, inbox, view):
    return True


def _probe_first_slot(i, inp, inbox, view):
    out = {}
    for v in inp.partners_at_round(i):
        first = inp.vectors[v.layer][0]
        out[v] = "1" if first == 0 else "0"
    return out


def _parity_messages(i, inp, inbox, view):
    count = sum(vec.count(0) for vec in inp.vectors.values())
    bit = "1" if count % 2 else "0"
    return {v: bit for v in inp.partners_at_round(i)}


def _edge_witness_output(inp, inbox, view):
    # Yes iff this vertex touches edges toward both other layers and some
    # neighbor reported an edge of its own
    has_both = all(0 in vec for vec in inp.vectors.values())
    heard = any(bits == "1" for bits in inbox.values())
    return has_both and heard


def registry(rounds: int = 1, bandwidth: int = 1) -> dict:
    """Built-in protocols at a given (rounds, bandwidth)."""
    return {
        "all-no": ProtocolSpec(
            "all-no", rounds, bandwidth, _no_messages, _all_no,
            message_given_type=lambda t: None,
        ),
        "always-yes": ProtocolSpec(
            "always-yes", rounds, bandwidth, _no_messages, _all_yes,
            message_given_type=lambda t: None,
        ),
        "constant-message": ProtocolSpec(
            "constant-message", rounds, bandwidth,
            _broadcast(lambda t: "0"), _all_no,
            message_given_type=lambda t: "0",
        ),
        "type-broadcast": ProtocolSpec(
            "type-broadcast", rounds, bandwidth,
            _broadcast(lambda t: "1" if t == 0 else "0"),
            _edge_witness_output,
            message_given_type=lambda t: "1" if t == 0 else "0",
        ),
        "parity": ProtocolSpec(
            "parity", rounds, bandwidth, _parity_messages, _all_no,
        ),
        "probe-first-slot": ProtocolSpec(
            "probe-first-slot", rounds, bandwidth, _probe_first_slot, _all_no,
        ),
    }
