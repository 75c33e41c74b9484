from congestlab.graphs import Layer, VertexId
from congestlab.randomness import RandomnessView

A1 = VertexId(Layer.A, 1)
B1 = VertexId(Layer.B, 1)
C2 = VertexId(Layer.C, 2)


def test_replay_is_exact():
    v1, v2 = RandomnessView(7), RandomnessView(7)
    assert v1.public_rng("x").random() == v2.public_rng("x").random()
    assert (v1.pair_rng(A1, B1, "m").random()
            == v2.pair_rng(A1, B1, "m").random())
    assert (v1.private_rng(C2, "p").random()
            == v2.private_rng(C2, "p").random())


def test_labels_give_independent_streams():
    v = RandomnessView(7)
    assert v.public_rng("x").random() != v.public_rng("y").random()


def test_pair_tape_symmetric_in_endpoints():
    v = RandomnessView(3)
    assert (v.pair_rng(A1, B1, "m").random()
            == v.pair_rng(B1, A1, "m").random())


def test_seeds_differ():
    assert (RandomnessView(1).public_rng("x").random()
            != RandomnessView(2).public_rng("x").random())


def test_restricted_view_routes_to_owner():
    v = RandomnessView(5)
    rv = v.restrict(A1)
    assert rv.public_rng("x").random() == v.public_rng("x").random()
    assert rv.pair_rng(B1, "m").random() == v.pair_rng(A1, B1, "m").random()
    assert rv.private_rng("p").random() == v.private_rng(A1, "p").random()
