import random

import numpy as np
import pytest

from hermrel import batch, errors
from hermrel import projective as pj
from hermrel.census import (
    SweepPlan,
    SweepReport,
    _run_block,
    parse_plan_file,
    run_sweep,
    sample_block,
    sweep_congruence,
    sweep_corollary_bounds,
    sweep_properties,
)
from hermrel.curve import Curve


def test_plan_validation():
    with pytest.raises(ValueError):
        SweepPlan("3^2", mode="partial")
    with pytest.raises(ValueError):
        SweepPlan("3^2", checks=("nonsense",))
    with pytest.raises(ValueError):
        SweepPlan("3^2", workers=0)
    assert SweepPlan("3^2", checks=("m_bounds", "congruence")).checks == ("congruence", "m_bounds")


def test_parse_plan_file():
    text = "# demo\nfield = 3^2\nmode=sampled\ncount=500  # small\nseed=7\nchecks=congruence\n"
    plan = parse_plan_file(text, workers=2, count=None)
    assert plan == SweepPlan("3^2", count=500, seed=7, checks=("congruence",), workers=2)
    with pytest.raises(ValueError):
        parse_plan_file("colour=blue\nfield=3^2")
    with pytest.raises(ValueError):
        parse_plan_file("field 3^2")


def test_sample_block_deterministic_and_invertible(F9):
    plan = SweepPlan("3^2", count=1000, block_size=256)
    a, ia = sample_block(F9, plan, 2)
    b, ib = sample_block(F9, plan, 2)
    assert np.array_equal(a, b) and np.array_equal(ia, ib)
    assert ia.tolist() == list(range(512, 768))
    assert np.all(batch.det_batch(F9, a) != 0)
    last, il = sample_block(F9, plan, 3)
    assert last.shape == (232, 9) and il[-1] == 999
    assert sample_block(F9, plan, 4)[0].shape == (0, 9)


def test_sampling_covers_entries_uniformly(F9):
    plan = SweepPlan("3^2", count=20000)
    mats = np.concatenate([sample_block(F9, plan, b)[0] for b in range(5)])
    freq = np.bincount(mats.reshape(-1), minlength=9) / mats.size
    assert np.all(np.abs(freq - 1 / 9) < 0.01)


def test_exhaustive_q4():
    rep = sweep_congruence(SweepPlan("2^2", mode="exhaustive"))
    assert rep.ok
    assert rep.curves == 60480 and rep.gl_matrices == 60480 * 3
    assert dict(rep.m_histogram) == {0: 2520, 1: 20160, 2: 15120, 3: 20160, 4: 2520}


def test_exhaustive_matches_scalar_oracle(F4):
    rep = sweep_congruence(SweepPlan("2^2", mode="exhaustive"))
    rng = random.Random(0)
    elements = batch.pgl_elements(F4)
    sample = [tuple(elements[k].tolist()) for k in rng.sample(range(len(elements)), 300)]
    for A in sample:
        C = Curve(F4, A)
        assert rep.histogram[(C.point_count(), len(C.inflexions()))] > 0


def test_budget():
    with pytest.raises(errors.BudgetExceededError):
        sweep_congruence(SweepPlan("3^2", mode="exhaustive"))


def test_bounds_q4_special_curves():
    rep = sweep_corollary_bounds(SweepPlan("2^2", mode="exhaustive"))
    assert rep.ok
    assert rep.counters["maximal_hermitian"] + rep.counters["maximal_special_q4"] == rep.m_histogram[4]
    assert rep.counters["maximal_special_q4"] > 0


def test_bounds_q9_sample():
    rep = sweep_corollary_bounds(SweepPlan("3^2", count=30000))
    assert rep.ok
    assert not any(5 < m < 9 for m in rep.m_histogram)
    assert rep.counters["maximal_hermitian"] == rep.m_histogram.get(9, 0)


def test_violation_detection():
    # a report is only as good as its ability to fail: fake a bad block
    rep = SweepReport("congruence", "3^2:10", 9, "sampled", 1, ("congruence",))
    rep.violations.append({"check": "congruence", "index": 3, "A": [1] * 9, "detail": "x"})
    assert not rep.ok
    assert not rep.merge(SweepReport("congruence", "3^2:10", 9, "sampled", 1, ("congruence",))).ok
    with pytest.raises(ValueError):
        rep.merge(SweepReport("bounds", "3^2:10", 9, "sampled", 1, ("congruence",)))


def test_props_sweep(F9):
    rep = sweep_properties(SweepPlan("3^2", count=300, extension_count=5))
    assert rep.ok
    assert rep.counters["extension_curves"] == 5
    assert rep.curves == 300


def test_props_sweep_skips_extension_at_q4():
    rep = sweep_properties(SweepPlan("2^2", count=100))
    assert rep.ok and rep.counters["extension_curves"] == 0


def test_props_sweep_rejects_large_extension():
    with pytest.raises(errors.EmbeddingUnavailableError):
        sweep_properties(SweepPlan("2^8", count=10))


@pytest.mark.parametrize("kind", ["congruence", "bounds", "props"])
def test_merge_order_independent(kind):
    block_size = 100 if kind != "props" else 10
    plan = SweepPlan("3^2", count=12 * block_size, block_size=block_size, extension_count=3)
    plan = plan.with_default_checks(kind)
    parts = [_run_block((kind, plan, b)) for b in range(12)]
    single = run_sweep(kind, plan)
    rng = random.Random(kind)
    for _ in range(3):
        rng.shuffle(parts)
        merged = parts[0]
        for p in parts[1:]:
            merged = merged.merge(p)
        assert merged.to_json() == single.to_json()


def test_workers_byte_identical():
    plan = SweepPlan("3^2", count=20000, block_size=2048)
    one = sweep_corollary_bounds(plan).to_json()
    assert sweep_corollary_bounds(SweepPlan("3^2", count=20000, block_size=2048, workers=3)).to_json() == one


def test_seed_matters():
    a = sweep_congruence(SweepPlan("3^2", count=5000, seed=1)).to_json()
    b = sweep_congruence(SweepPlan("3^2", count=5000, seed=2)).to_json()
    assert a != b


def test_report_formats():
    rep = sweep_congruence(SweepPlan("3^2", count=2000))
    d = rep.to_dict()
    assert "stats" not in d and "stats" in rep.to_dict(include_stats=True)
    assert sum(h["count"] for h in d["histogram"]) == 2000
    csv = rep.to_csv().splitlines()
    assert csv[0] == "kind,field,N,inflexions,m,count"
    assert sum(int(line.split(",")[-1]) for line in csv[1:]) == 2000


def test_throughput_q9():
    rep = sweep_congruence(SweepPlan("3^2", count=100_000, block_size=8192))
    assert rep.ok
    assert rep.stats["curves_per_second"] >= 10_000, rep.stats


def test_scan_matches_scalar_on_sampled_block(F9):
    plan = SweepPlan("3^2", count=200).with_default_checks("congruence")
    mats, _ = sample_block(F9, plan, 0)
    rep = _run_block(("congruence", plan, 0))
    hist = {}
    for A in mats.tolist():
        C = Curve(F9, pj.normalize(F9, A))
        key = (C.point_count(), len(C.inflexions()))
        hist[key] = hist.get(key, 0) + 1
    assert dict(rep.histogram) == hist
