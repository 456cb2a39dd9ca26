"""Python access to the quad double-auction simulator.

Outcomes and instances travel as JSON; the helpers below decode them.
"""

import json

from ._quad import (
    QuadError,
    borda_points,
    config_hash,
    demand_at_price,
    expected_tasks,
    supply_at_price,
    tail_bound,
)
from . import _quad


def generate_instance(config, seed):
    return json.loads(_quad.generate_instance(json.dumps(config), seed))


def run_quad(instance):
    return json.loads(_quad.run_quad(json.dumps(instance)))


def run_benchmark(instance, mechanism, rule="midrange", range_low=5.0, range_high=30.0):
    return json.loads(_quad.run_benchmark(json.dumps(instance), mechanism, rule, range_low, range_high))


def run_experiment(config, out_dir=None):
    return _quad.run_experiment(json.dumps(config), out_dir)


def run_suite(name, scale=1.0, seed=None):
    if seed is None:
        return _quad.run_suite(name, scale)
    return _quad.run_suite(name, scale, seed)


__all__ = [
    "QuadError",
    "borda_points",
    "config_hash",
    "demand_at_price",
    "expected_tasks",
    "generate_instance",
    "run_benchmark",
    "run_experiment",
    "run_quad",
    "run_suite",
    "supply_at_price",
    "tail_bound",
]
