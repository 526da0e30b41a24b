"""Smoke tests for the _stabsec extension module (run via ctest)."""

import math
import sys

import _stabsec as ss


def test_core_round_trip():
    inst = ss.Instance(3, 3)
    m = ss.matching_from_pairs([(1, 1), (2, 2), (3, 3)])
    assert ss.blocking_pairs(inst, m) == []
    rep = ss.evaluate_satisfaction(inst, m)
    assert rep["satisfied_pairs"] == [(1, 1), (2, 2), (3, 3)]

    swapped = ss.matching_from_pairs([(1, 2), (2, 1), (3, 3)])
    assert ss.blocking_pairs(inst, swapped) == [(1, 1)]
    rep = ss.evaluate_satisfaction(inst, swapped)
    assert rep["satisfied_girls"] == [2, 3]
    assert rep["satisfied_boys"] == [2, 3]

    stable = ss.stable_matching(ss.Instance(3, 5))
    assert stable.pairs() == [(1, 1), (2, 2), (3, 3)]

    back = ss.Instance.from_json(inst.to_json())
    assert back.num_girls == 3


def test_optimum_and_weights():
    inst = ss.Instance(2, 3, None, [5.0, 1.0, 7.0])
    assert ss.optimum_value(inst, "boy-weight") == 12.0
    assert ss.optimum_value(inst, "girls") == 2.0


def test_run_once_and_simulate():
    inst = ss.Instance(6, 6)
    perm = ss.sample_uniform_arrival(6, seed=7)
    assert sorted(perm) == [1, 2, 3, 4, 5, 6]
    out = ss.run_once("rwy", inst, perm, gamma=0.15, seed=11)
    assert len(out["matching"]) == 6  # three-phase runs stay perfect
    assert out["conservative"]

    summary = ss.simulate("pairs", n=50, trials=300, criterion="pairs", seed=5)
    assert summary["trials"] == 300
    assert 0.0 <= summary["mean_ratio"] <= 1.0

    det = ss.simulate("classic", n=30, trials=64, criterion="girls", seed=9)
    again = ss.simulate("classic", n=30, trials=64, criterion="girls", seed=9)
    assert det == again


def test_adversarial_sampling():
    assert ss.sample_adversarial_arrival(4, [1.0, 1.0, 1.0], seed=3) == [1, 2, 3, 4]
    assert ss.sample_adversarial_arrival(4, [0.0, 0.0, 0.0], seed=3) == [4, 3, 2, 1]


def test_exact_analysis():
    dp = ss.dp_value(2, dist="half", criterion="girls")
    assert (dp["value_num"], dp["value_den"]) == ("3", "2")

    rec = ss.adversarial_recursion(4)
    assert rec["v"][0] == "1"
    assert rec["p"][0] == "1/2"
    assert rec["step_inequality"] and rec["bound_chain"]

    bound = ss.aux_bound(2)
    assert (bound["value_num"], bound["value_den"]) == ("1", "1")

    opt = ss.aux_optimal(4)
    assert opt["value"] <= ss.aux_bound(4)["bound"] + 1e-12

    assert ss.good_event(10000, 100) > 1.0 / 13


def test_attack():
    out = ss.attack("greedy", 8, seed=1)
    assert out["satisfied_girls"] <= 1
    assert sorted(out["permutation"]) == list(range(1, 9))


def test_dp_matches_simulation():
    dp = ss.dp_value(4, dist="uniform", criterion="boys")
    mc = ss.simulate("rwy-r0", n=4, trials=4000, criterion="boys", seed=13)
    assert mc["mean_ratio"] * 4 <= dp["value"] + 0.15  # optimal dominates


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
