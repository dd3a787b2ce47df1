"""Slotted CSMA/CA simulator for k-MPR channels with per-AC adaptive backoff."""

from ._core import (
    ConfigError,
    check_scenario,
    decrement_amount,
    default_ac_table,
    default_scenario_text,
    frame_duration_slots,
    normalized_offered_load,
    rate_for_normalized_load,
    run_scenario,
    run_scenario_file,
    slot_is_idle,
)

__all__ = [
    "ConfigError",
    "check_scenario",
    "decrement_amount",
    "default_ac_table",
    "default_scenario_text",
    "frame_duration_slots",
    "normalized_offered_load",
    "rate_for_normalized_load",
    "run_scenario",
    "run_scenario_file",
    "slot_is_idle",
]
