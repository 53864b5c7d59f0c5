import pathlib
import random

import pytest

import wao

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_sha_empty_biquadratic():
    res = wao.sha(SCENARIOS / "biquadratic.json", set="empty")
    assert res["invariant_factors"] == [2]
    assert len(res["generators"]) == 1


def test_verdict_obstructed():
    res = wao.verdict(SCENARIOS / "biquadratic_5_13.json", tuple="obstructed")
    assert res["verdict"] == "obstructed"
    assert res["witness"]["value"] == "1/2"


def test_pair_perfect():
    rep = wao.pair(SCENARIOS / "biquadratic_5_13.json")
    assert rep["results"]["matrix"] == [["1/2"]]
    assert rep["certificates"]["perfect"]


def test_mu2_ch_trivial():
    assert wao.ch(SCENARIOS / "cyclotomic5_mu2.json")["invariant_factors"] == []


def test_refusal_raises():
    with pytest.raises(wao.WaoError) as e:
        wao.ch(SCENARIOS / "induced_m1_3.json", set="dyadic")
    assert e.value.exit_code == 2
    assert e.value.report["error"]["kind"] == "refusal"


def test_reports_deterministic():
    a = wao.run("verdict", SCENARIOS / "biquadratic_5_13.json", tuple="obstructed")
    b = wao.run("verdict", SCENARIOS / "biquadratic_5_13.json", tuple="obstructed")
    assert a == b


def test_smith_invariants():
    assert wao.smith_invariants([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert wao.smith_invariants([[10**30, 0], [0, 1]]) == [1, 10**30]


def test_hilbert_against_oracle():
    rng = random.Random(3)
    for _ in range(200):
        a, b = rng.choice([-1, 1]) * rng.randint(1, 60), rng.choice([-1, 1]) * rng.randint(1, 60)
        for v in (0, 2, 3, 5, 7):
            assert wao.hilbert_symbol(a, b, v) == wao.hilbert_oracle(a, b, v)
    assert wao.hilbert_symbol(-1, -1, "inf") == -1
