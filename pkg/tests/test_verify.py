import dataclasses
import json

import pytest

from cubepaths import verify
from cubepaths.cube import full_bits, is_down_bits
from cubepaths.verify import (
    THEOREMS,
    CapError,
    SweepPlan,
    certify,
    default_suite,
    enumerate_down_sets,
    negative_control,
    random_instance,
    recheck,
    run_theorem,
)


@pytest.mark.parametrize("n,count", [(1, 3), (2, 6), (3, 20), (4, 168), (5, 7581)])
def test_down_set_counts(n, count):
    assert sum(1 for _ in enumerate_down_sets(n)) == count


def test_down_up_pair_count_q4():
    assert sum(1 for _ in verify._ex_down_up(4)) == 7246


@pytest.mark.parametrize("tid,n", [("diredges", 3), ("containments", 4)])
def test_exhaustive_sweeps_pass(tid, n):
    certs = run_theorem(SweepPlan(tid, (n, n)))
    assert certs and all(c.passed for c in certs)


def test_weak_kk_random_n6():
    certs = run_theorem(SweepPlan("weakKK", (6, 6), "random", 1000, 42))
    assert len(certs) == 1000 and all(c.passed for c in certs)


@pytest.mark.parametrize("tid", sorted(THEOREMS))
def test_every_theorem_passes_small_exhaustive(tid):
    certs = run_theorem(SweepPlan(tid, (1, 2)))
    assert all(c.passed for c in certs)


@pytest.mark.parametrize("tid", sorted(THEOREMS))
def test_every_theorem_passes_random(tid):
    hi = 5 if THEOREMS[tid].max_free else 6
    certs = run_theorem(SweepPlan(tid, (4, hi), "random", 15, 9))
    assert all(c.passed for c in certs), [c.to_json() for c in certs if not c.passed][:1]


@pytest.mark.parametrize("shape", verify.SHAPES)
def test_random_instance_is_deterministic(shape):
    assert random_instance(5, shape, 1234) == random_instance(5, shape, 1234)


def test_random_pairs_have_required_shape():
    for seed in range(200):
        inst = random_instance(5, "between-set", seed)
        n, a, b, s = inst["n"], inst["A"], inst["B"], inst["S"]
        assert a and b and a & b == 0
        assert is_down_bits(n, a) and is_down_bits(n, full_bits(n) & ~b)
        assert a & ~s == 0 and s & b == 0
        inst = random_instance(5, "disjoint-pair", seed, max_free=6)
        free = full_bits(5) & ~(inst["A"] | inst["B"])
        assert inst["A"] & inst["B"] == 0 and free.bit_count() <= 6


def test_random_instance_rejects_unknown_shape():
    with pytest.raises(ValueError):
        random_instance(3, "nonsense", 0)
    with pytest.raises(CapError):
        random_instance(17, "subset", 0)


def test_certificates_recheck_identically():
    for tid in THEOREMS:
        for cert in run_theorem(SweepPlan(tid, (3, 3), "random", 3, 5)):
            again = recheck(cert)
            assert json.dumps(again.to_json(), sort_keys=True) == json.dumps(cert.to_json(), sort_keys=True)


def test_certificate_json_round_trip():
    cert = run_theorem(SweepPlan("diredges", (3, 3), "random", 1, 2))[0]
    obj = json.loads(json.dumps(cert.to_json()))
    inst = verify.decode_instance(obj["instance"])
    assert inst == cert.instance
    assert certify("diredges", inst, obj["seed"]).to_json() == cert.to_json()


def test_random_sweeps_are_reproducible():
    plan = SweepPlan("bledgesfull", (4, 5), "random", 20, 3)
    first = [c.to_json() for c in run_theorem(plan)]
    assert first == [c.to_json() for c in run_theorem(plan)]


def test_parallel_sweep_matches_serial():
    plan = SweepPlan("edgeiso", (3, 3), "random", 50, 1)
    assert [c.to_json() for c in run_theorem(plan, workers=2)] == [c.to_json() for c in run_theorem(plan, workers=1)]


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.delenv("CUBEPATHS_THREADS", raising=False)
    assert verify.worker_count() == 1
    monkeypatch.setenv("CUBEPATHS_THREADS", "3")
    assert verify.worker_count() == 3
    monkeypatch.setenv("CUBEPATHS_THREADS", "x")
    with pytest.raises(ValueError):
        verify.worker_count()


def test_fail_fast_stops_at_first_failure(monkeypatch):
    thm = THEOREMS["edgeiso"]
    broken = dataclasses.replace(thm, check=lambda inst: ({}, inst["S"] != 3))
    monkeypatch.setitem(THEOREMS, "edgeiso", broken)
    certs = run_theorem(SweepPlan("edgeiso", (2, 2)), fail_fast=True)
    assert len(certs) == 4 and certs[-1].verdict == "fail"
    assert len(run_theorem(SweepPlan("edgeiso", (2, 2)))) == 16


def test_default_suite_covers_every_theorem():
    plans = default_suite()
    for tid, thm in THEOREMS.items():
        mine = [p for p in plans if p.theorem_id == tid]
        ex = [p for p in mine if p.strategy == "exhaustive"]
        rnd = [p for p in mine if p.strategy == "random"]
        assert ex and rnd
        assert max(p.n_range[1] for p in rnd) > max(p.n_range[1] for p in ex)


def test_plan_caps():
    with pytest.raises(CapError):
        SweepPlan("edgelemma", (4, 4))
    with pytest.raises(CapError):
        SweepPlan("diredges", (5, 5))
    with pytest.raises(CapError):
        SweepPlan("edgeiso", (17, 17), "random", 1)
    with pytest.raises(ValueError):
        SweepPlan("nope", (1, 1))
    with pytest.raises(ValueError):
        SweepPlan("edgeiso", (3, 3), "random", 0)


def test_negative_control_finds_strict_pairs():
    out = negative_control(3)
    assert out["strict"] > 0 and out["checked"] >= out["strict"]
    ex = out["example"]
    assert ex["p_e_directed"] < ex["p_e"]
    with pytest.raises(CapError):
        negative_control(4)


def test_matching_bound_for_empty_family():
    assert verify.matching_bound(3, 0) == 0
