import csv
import json
import pathlib

import pytest

import quad

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def small_config(**overrides):
    config = json.loads((CONFIGS / "rand.json").read_text())
    config.update({"k": 2, "m_i": [5, 10], "n_i": [15, 30], "trials": 2, "seed": 3})
    config.update(overrides)
    return config


def test_demand_and_supply():
    assert quad.demand_at_price([5, 4, 1], 3) == 2
    assert quad.supply_at_price([5, 4, 1], 5) == 2


def test_increasing_marginals_raise():
    with pytest.raises(quad.QuadError, match="NotDMR"):
        quad.demand_at_price([1, 5], 3)


def test_borda_round():
    points = quad.borda_points([1, 8, 7], [2, 4, 6], [[2, 6, 4], [2, 4, 6], [4, 2, 6]])
    assert points == {2: 8, 4: 6, 6: 4}


def test_formulas():
    assert quad.expected_tasks(100) == 50.0
    assert abs(quad.tail_bound(1000) - 10 / 27) < 1e-12


def test_quad_outcome_is_budget_balanced_and_deterministic():
    instance = quad.generate_instance(small_config(), seed=11)
    first = quad.run_quad(instance)
    assert first == quad.run_quad(instance)
    assert sum(first["payments_cents"].values()) == first["platform_revenue_cents"]
    assert first["platform_revenue_cents"] >= 0
    assert len(first["winning_buyers"]) == len(first["winning_sellers"])


def test_mcafee_through_bindings():
    instance = quad.generate_instance(small_config(), seed=5)
    out = quad.run_benchmark(instance, "mcafee")
    assert out["mechanism"] == "mcafee"
    assert sum(out["payments_cents"].values()) == out["trade_spread_cents"]


def test_experiment_writes_csv(tmp_path):
    summary = quad.run_experiment(small_config(mechanism="ppm-d"), str(tmp_path))
    assert summary["trials"] == 2
    assert summary["deviator_count"] > 0
    with open(tmp_path / "agent_utility.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["config_hash"] == quad.config_hash(json.dumps(small_config(mechanism="ppm-d")))
    assert any(r["metric"] == "deviator" for r in rows)


def test_bad_config_names_field():
    with pytest.raises(quad.QuadError, match="trials"):
        quad.config_hash(json.dumps({"trials": 0}))


def test_examples_suite_passes():
    results = quad.run_suite("examples")
    assert results and all(passed for _, passed, _ in results)
