import pytest

from congestlab.errors import OutOfRange, RoundOutOfRange, SameLayerPair
from congestlab.graphs import (LAYERS, Layer, TypedTripartiteGraph, VertexId,
                               brute_force_has_triangle, pair_key)


def make_triangle_graph():
    g = TypedTripartiteGraph(3, 2)
    a, b, c = VertexId(Layer.A, 1), VertexId(Layer.B, 2), VertexId(Layer.C, 3)
    g.set_type(a, b, 0)
    g.set_type(b, c, 0)
    g.set_type(c, a, 0)
    g.set_type(VertexId(Layer.A, 2), VertexId(Layer.B, 1), 2)
    return g


def test_default_type_is_r_plus_1():
    g = TypedTripartiteGraph(2, 1)
    assert g.pair_type(VertexId(Layer.A, 1), VertexId(Layer.B, 1)) == 2


def test_same_layer_pair_rejected():
    g = TypedTripartiteGraph(2, 1)
    with pytest.raises(SameLayerPair):
        g.set_type(VertexId(Layer.A, 1), VertexId(Layer.A, 2), 0)


def test_out_of_range_rejected():
    g = TypedTripartiteGraph(2, 1)
    with pytest.raises(OutOfRange):
        g.pair_type(VertexId(Layer.A, 3), VertexId(Layer.B, 1))


def test_channels_at_round_cutoff():
    g = make_triangle_graph()  # r = 2
    round1 = g.channels_at_round(1)  # type <= 2
    round2 = g.channels_at_round(2)  # type <= 1
    assert len(round1) == 4
    assert len(round2) == 3
    with pytest.raises(RoundOutOfRange):
        g.channels_at_round(3)


def test_has_triangle_matches_brute_force():
    g = make_triangle_graph()
    assert g.has_triangle()
    assert brute_force_has_triangle(g)
    g2 = TypedTripartiteGraph(3, 2)
    g2.set_type(VertexId(Layer.A, 1), VertexId(Layer.B, 1), 0)
    assert not g2.has_triangle()
    assert not brute_force_has_triangle(g2)


def test_neighborhood_vector_roundtrip():
    g = make_triangle_graph()
    vec = g.neighborhood_vector(VertexId(Layer.A, 1), Layer.B)
    assert vec == [3, 0, 3]


def test_channel_degree_counts_default_complement():
    g = make_triangle_graph()
    a = VertexId(Layer.A, 1)
    assert g.channel_degree(a, 0, Layer.B) == 1
    assert g.channel_degree(a, g.default_type, Layer.B) == 2


def test_json_roundtrip_and_validate():
    g = make_triangle_graph()
    g2 = TypedTripartiteGraph.from_json(g.to_json())
    assert g == g2
    assert g.validate() == []


def test_from_dict_rejects_bad_type():
    with pytest.raises(ValueError):
        TypedTripartiteGraph.from_dict(
            {"n": 2, "r": 1, "pairs": [["A", 1, "B", 1, 9]]})


def test_pair_key_is_layer_ordered():
    u, v = VertexId(Layer.C, 1), VertexId(Layer.A, 2)
    assert pair_key(u, v) == (v, u)


def test_vertices_enumeration():
    g = TypedTripartiteGraph(2, 0)
    assert len(list(g.vertices())) == 6
    assert all(v.layer in LAYERS for v in g.vertices())
