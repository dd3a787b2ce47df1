#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mprsim/channel.hpp"
#include "mprsim/mac.hpp"
#include "mprsim/metrics.hpp"
#include "mprsim/trace.hpp"
#include "mprsim/traffic.hpp"

namespace mprsim {

struct TimingConfig {
    double slot_us = 50;
    double difs_us = 128;
    double bitrate_bps = 1e6;
    // Post-frame slots the sender stays busy for (models ACK turnaround on
    // the sender side; nothing occupies the channel).
    std::uint32_t ack_overhead_slots = 0;
};

struct RunConfig {
    std::uint64_t total_slots = 1'000'000;
    std::int64_t warmup_slots = -1; // -1 = 10% of total
    std::uint64_t seed = 1;
    bool record_trace = false;
};

struct ScenarioConfig {
    std::string scenario_id = "scenario";
    ChannelConfig channel;
    std::array<AccessCategoryConfig, kNumAccessCategories> ac_table;
    std::array<std::uint32_t, kNumAccessCategories> stations_per_ac{10, 10, 10, 10};
    TrafficConfig traffic;
    TimingConfig timing;
    RunConfig run;
    MetricsOptions metrics;
    bool ac_table_is_default = true; // thresholds derived from K, re-derived on K sweeps

    std::uint32_t total_stations() const {
        std::uint32_t n = 0;
        for (auto c : stations_per_ac) n += c;
        return n;
    }
    std::uint64_t effective_warmup_slots() const {
        return run.warmup_slots >= 0 ? static_cast<std::uint64_t>(run.warmup_slots)
                                     : run.total_slots / 10;
    }
};

// Scenario with all defaults applied (default AC table for the configured K,
// AIFS = DIFS, warmup = 10%).
ScenarioConfig make_default_scenario();

// AIFS in whole slots, rounded up so a station never transmits earlier than
// the microsecond value allows.
std::uint32_t aifs_slots_for(double aifs_us, double slot_us);

// Full validation; each problem is reported as "key: message" so the
// scenario parser can anchor it to a config line. Empty result = valid.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

// Whole-run packet/frame accounting, kept over the entire run (not just the
// measurement window) so conservation can be checked exactly.
struct ConservationCounters {
    std::uint64_t arrivals = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_retry = 0;
    std::uint64_t dropped_queue = 0;
    std::uint64_t queued_at_end = 0;    // backlog of non-transmitting stations
    std::uint64_t in_flight_at_end = 0; // HoL packets of transmitting stations
    std::uint64_t frames_started = 0;
    std::uint64_t frames_succeeded = 0;
    std::uint64_t frames_collided = 0;

    bool packets_reconcile() const {
        return arrivals ==
               delivered + dropped_retry + dropped_queue + queued_at_end + in_flight_at_end;
    }
    bool frames_reconcile() const {
        return frames_started == frames_succeeded + frames_collided + in_flight_at_end;
    }
};

struct RunResult {
    MetricsReport report;
    ConservationCounters conservation;
    std::optional<Trace> trace;            // present when record_trace
    std::optional<std::uint64_t> trace_hash; // ditto
};

// Executes the scenario. Per slot, in canonical order: (1) packet arrivals,
// (2) completions retire at the slot boundary and results are delivered,
// (3) stations observe the slot-start count and step, (4) all new frames are
// admitted simultaneously. Identical config + seed gives a bit-identical
// report and trace. Throws std::invalid_argument when validation fails.
RunResult run(const ScenarioConfig& cfg);

// Standard-DCF baseline: requires K = 1; every station is bound to a single
// AC with threshold 0 and fixed-one countdown, which reduces the countdown to
// the classical decrement-one-per-idle-slot rule.
RunResult run_dcf_baseline(ScenarioConfig cfg);

} // namespace mprsim
