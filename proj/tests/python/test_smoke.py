"""Smoke tests for the python bindings."""

import math

import pytest

import mprsim

TINY_SCENARIO = """
id = pysmoke
channel.mpr_limit = 8
stations_per_ac = 2 2 2 2
traffic.mode = saturation
run.total_slots = 20000
run.seed = 7
"""


def test_decrement_amount_matches_the_rule():
    assert mprsim.decrement_amount("adaptive", 8, 7, 3) == 5
    assert mprsim.decrement_amount("adaptive", 8, 7, 8) == 0
    assert mprsim.decrement_amount("adaptive", 8, 7, 0) == 8
    assert mprsim.decrement_amount("fixed_one", 8, 1, 1) == 1
    assert mprsim.decrement_amount("fixed_one", 8, 1, 2) == 0


def test_slot_idleness_is_threshold_relative():
    assert mprsim.slot_is_idle(2, 2)
    assert not mprsim.slot_is_idle(3, 2)


def test_default_ac_table():
    table = mprsim.default_ac_table(8)
    assert [ac["threshold"] for ac in table] == [7, 4, 2, 1]
    assert [ac["countdown"] for ac in table] == [
        "adaptive",
        "adaptive",
        "fixed_one",
        "fixed_one",
    ]


def test_frame_duration_and_load_helpers():
    assert mprsim.frame_duration_slots(8184) == 172
    rate = mprsim.rate_for_normalized_load(2.0, 40, 8584.0)
    assert math.isclose(mprsim.normalized_offered_load(rate, 40, 8584.0), 2.0)


def test_run_is_deterministic():
    a = mprsim.run_scenario(TINY_SCENARIO, record_trace=True)
    b = mprsim.run_scenario(TINY_SCENARIO, record_trace=True)
    assert a["trace_hash"] == b["trace_hash"]
    assert a["per_ac"] == b["per_ac"]
    assert a["conservation"]["packets_reconcile"]
    assert a["conservation"]["frames_reconcile"]


def test_seed_override_changes_the_run():
    a = mprsim.run_scenario(TINY_SCENARIO, record_trace=True)
    b = mprsim.run_scenario(TINY_SCENARIO, seed=8, record_trace=True)
    assert a["trace_hash"] != b["trace_hash"]


def test_check_scenario_round_trips():
    resolved = mprsim.check_scenario(TINY_SCENARIO)
    assert "ac0.threshold = 7" in resolved
    assert mprsim.check_scenario(resolved) == resolved


def test_bad_scenario_raises_config_error():
    with pytest.raises(mprsim.ConfigError):
        mprsim.check_scenario("channel.mpr_limit = 8\nac0.threshold = 9\n")


def test_throughput_is_positive_and_bounded():
    report = mprsim.run_scenario(TINY_SCENARIO)
    agg = report["aggregate"]["throughput"]
    assert 0 < agg <= 8
