import math
import random

import pytest

from congestlab.errors import (InvalidCoordinate, InvalidDistribution,
                               PremiseViolated)
from congestlab.infotheory import (FiniteDistribution, JointTable,
                                   cond_entropy, cond_mutual_info, entropy,
                                   kl, mi_kl_identity_check,
                                   monotonicity_checks, mutual_info,
                                   overconditioning_check, pinsker_check,
                                   random_distribution, random_joint,
                                   table_with_a_indep_d_given_bc,
                                   table_with_a_indep_d_given_c, tvd,
                                   tvd_chain_bound_check, _verify_ci)

RNG = random.Random(42)


def test_distribution_must_sum_to_one():
    with pytest.raises(InvalidDistribution):
        FiniteDistribution({0: 0.5, 1: 0.4})
    with pytest.raises(InvalidDistribution):
        FiniteDistribution({0: 1.5, 1: -0.5})


def test_entropy_of_fair_coin_is_one_bit():
    assert entropy(FiniteDistribution({0: 0.5, 1: 0.5})) == pytest.approx(1.0)
    assert entropy(FiniteDistribution({0: 1.0})) == 0.0


def test_chain_rule_exact():
    for _ in range(50):
        j = random_joint(["A", "B"], [3, 4], RNG)
        lhs = entropy(j.marginal(["A", "B"]))
        rhs = entropy(j.marginal(["A"])) + cond_entropy(j, ["B"], ["A"])
        assert abs(lhs - rhs) <= 1e-9


def test_mutual_info_symmetric_and_nonnegative():
    for _ in range(30):
        j = random_joint(["A", "B"], [2, 3], RNG)
        iab = mutual_info(j, ["A"], ["B"])
        iba = mutual_info(j, ["B"], ["A"])
        assert abs(iab - iba) <= 1e-9
        assert iab >= -1e-12


def test_independent_coordinates_have_zero_mi():
    table = {(a, b): 0.25 for a in range(2) for b in range(2)}
    j = JointTable(["A", "B"], table)
    assert mutual_info(j, ["A"], ["B"]) == pytest.approx(0.0, abs=1e-12)


def test_kl_support_violation_is_infinite():
    p = FiniteDistribution({0: 1.0})
    q = FiniteDistribution({1: 1.0})
    assert kl(p, q) == math.inf
    assert tvd(p, q) == pytest.approx(1.0)


def test_invalid_coordinate_raises():
    j = random_joint(["A", "B"], [2, 2], RNG)
    with pytest.raises(InvalidCoordinate):
        j.marginal(["Z"])


def test_conditional_on_zero_event_raises():
    j = JointTable(["A", "B"], {(0, 0): 1.0})
    with pytest.raises(InvalidDistribution):
        j.conditional(["A"], ["B"], (1,))


def test_mi_kl_identity():
    for _ in range(30):
        j = random_joint(["A", "B", "C"], [2, 2, 2], RNG)
        assert mi_kl_identity_check(j, ["A"], ["B"], ["C"]) <= 1e-9


def test_pinsker():
    for _ in range(100):
        p = random_distribution(5, RNG)
        q = random_distribution(5, RNG)
        d, bound, ok = pinsker_check(p, q)
        assert ok
        assert d <= bound + 1e-12


def test_tvd_chain_bound():
    for _ in range(30):
        mu = random_joint(["X", "Y"], [2, 3], RNG)
        nu = random_joint(["X", "Y"], [2, 3], RNG)
        lhs, rhs, ok = tvd_chain_bound_check(mu, nu)
        assert ok and lhs <= rhs + 1e-9


def test_overconditioning():
    for _ in range(30):
        xz = random_joint(["X", "Z"], [3, 2], RNG)
        yz = random_joint(["Y", "Z"], [3, 2], RNG)
        lhs, joint, _, ok = overconditioning_check(xz, yz)
        assert ok and lhs <= joint + 1e-9


def test_overconditioning_equality_with_shared_z():
    # build two tables with identical Z marginal to exercise the averaged form
    z = [0.3, 0.7]
    xz = JointTable(["X", "Z"], {(x, c): z[c] * p
                                 for c, ps in enumerate(([0.2, 0.8],
                                                         [0.6, 0.4]))
                                 for x, p in enumerate(ps)})
    yz = JointTable(["Y", "Z"], {(y, c): z[c] * p
                                 for c, ps in enumerate(([0.5, 0.5],
                                                         [0.1, 0.9]))
                                 for y, p in enumerate(ps)})
    lhs, joint, averaged, ok = overconditioning_check(xz, yz)
    assert ok
    assert averaged == pytest.approx(joint, abs=1e-9)


def test_factored_tables_satisfy_their_premises():
    for _ in range(10):
        j2 = table_with_a_indep_d_given_c([2, 2, 2, 2], RNG)
        _verify_ci(j2, ["A"], ["D"], ["C"])
        j3 = table_with_a_indep_d_given_bc([2, 2, 2, 2], RNG)
        _verify_ci(j3, ["A"], ["D"], ["B", "C"])


def test_verify_ci_rejects_dependence():
    table = {(0, 0): 0.5, (1, 1): 0.5}
    j = JointTable(["A", "D"], table)
    with pytest.raises(PremiseViolated):
        _verify_ci(j, ["A"], ["D"], [])


def test_monotonicity_suite_passes():
    report = monotonicity_checks(random.Random(0), tables=30)
    assert all(report.values())


def test_cmi_chain_rule():
    # I(A; B,C) = I(A; B) + I(A; C | B)
    for _ in range(30):
        j = random_joint(["A", "B", "C"], [2, 2, 2], RNG)
        lhs = mutual_info(j, ["A"], ["B", "C"])
        rhs = (mutual_info(j, ["A"], ["B"])
               + cond_mutual_info(j, ["A"], ["C"], ["B"]))
        assert abs(lhs - rhs) <= 1e-9
