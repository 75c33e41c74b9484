import pytest

from congestlab.errors import InfeasibleParams
from congestlab.params import (ParamSchedule, canonical_params,
                               feasibility_check, require_feasible)

MICRO = ParamSchedule(n=[1, 29], d=[6], alpha=[1], beta=[1], gamma=[1])


def test_canonical_exact_integers():
    p = canonical_params(2, 1)
    assert p.n == [2, 2 ** 34]
    assert p.d == [2 ** 13]
    assert p.alpha == [2 ** 11]
    assert p.beta == [2 ** 5]
    assert p.gamma == [2 ** 6]
    assert p.canonical


def test_canonical_is_feasible_even_when_huge():
    assert feasibility_check(canonical_params(2, 2)) == []


def test_spec_example_schedule_is_feasible():
    p = ParamSchedule(n=[1, 2000], d=[3], alpha=[2], beta=[2], gamma=[2])
    assert feasibility_check(p) == []


def test_micro_schedule_is_feasible():
    assert feasibility_check(MICRO) == []
    require_feasible(MICRO)


def test_sampling_room_violation():
    p = ParamSchedule(n=[2, 50], d=[6], alpha=[1], beta=[1], gamma=[1])
    bad = feasibility_check(p)
    assert any("SamplingRoomViolation" in v for v in bad)


def test_degree_violation():
    p = ParamSchedule(n=[4, 4000], d=[3], alpha=[1], beta=[1], gamma=[1])
    bad = feasibility_check(p)
    assert any("DegreeViolation" in v for v in bad)


def test_public_slot_violation():
    p = ParamSchedule(n=[1, 2000], d=[3], alpha=[1], beta=[1], gamma=[3])
    bad = feasibility_check(p)
    assert any("PublicSlotViolation" in v for v in bad)


def test_length_mismatch():
    p = ParamSchedule(n=[1, 29], d=[6, 6], alpha=[1], beta=[1], gamma=[1])
    bad = feasibility_check(p)
    assert any("LengthMismatch" in v for v in bad)


def test_level_accessor_bounds():
    with pytest.raises(InfeasibleParams):
        MICRO.level(0)
    with pytest.raises(InfeasibleParams):
        MICRO.level(2)
    assert MICRO.level(1)["n_prev"] == 1


def test_json_roundtrip_and_canonical_shortcut():
    p2 = ParamSchedule.from_json(MICRO.to_json())
    assert p2.to_dict() == MICRO.to_dict()
    p3 = ParamSchedule.from_json('{"canonical": {"n0": 2, "r": 1}}')
    assert p3.n == [2, 2 ** 34]
