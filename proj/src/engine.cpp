#include "mprsim/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace mprsim {

ScenarioConfig make_default_scenario() {
    ScenarioConfig cfg;
    cfg.channel.mpr_limit = 8;
    cfg.ac_table = default_ac_table(cfg.channel.mpr_limit);
    for (auto& ac : cfg.ac_table) ac.aifs_us = cfg.timing.difs_us;
    cfg.ac_table_is_default = true;
    return cfg;
}

std::uint32_t aifs_slots_for(double aifs_us, double slot_us) {
    return static_cast<std::uint32_t>(std::ceil(aifs_us / slot_us - 1e-9));
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;
    if (cfg.channel.mpr_limit < 1) {
        errors.push_back("channel.mpr_limit: must be >= 1");
    }
    if (cfg.total_stations() == 0) {
        errors.push_back("stations_per_ac: at least one station is required");
    }
    for (std::size_t i = 0; i < cfg.ac_table.size(); ++i) {
        const auto& ac = cfg.ac_table[i];
        std::string prefix = "ac" + std::to_string(i) + ".";
        if (ac.threshold >= cfg.channel.mpr_limit) {
            errors.push_back(prefix + "threshold: must be < channel.mpr_limit (" +
                             std::to_string(cfg.channel.mpr_limit) + ")");
        }
        if (ac.backoff.cw_min < 1) {
            errors.push_back(prefix + "cw_min: must be >= 1");
        }
        if (ac.backoff.max_backoff_stage > 30 ||
            (ac.backoff.cw_min > 0 &&
             static_cast<std::uint64_t>(ac.backoff.cw_min) << ac.backoff.max_backoff_stage >
                 0x7fffffffull)) {
            errors.push_back(prefix + "max_backoff_stage: cw_min * 2^m overflows");
        }
        if (ac.aifs_us < 0) {
            errors.push_back(prefix + "aifs_us: must be >= 0");
        }
    }
    if (cfg.traffic.payload_bits == 0) {
        errors.push_back("traffic.payload_bits: must be > 0");
    }
    if (cfg.traffic.mode == TrafficMode::poisson && cfg.traffic.rate_pps < 0) {
        errors.push_back("traffic.rate_pps: must be >= 0");
    }
    if (cfg.timing.slot_us <= 0) {
        errors.push_back("timing.slot_us: must be > 0");
    }
    if (cfg.timing.bitrate_bps <= 0) {
        errors.push_back("timing.bitrate_bps: must be > 0");
    }
    if (cfg.run.total_slots == 0 || cfg.effective_warmup_slots() >= cfg.run.total_slots) {
        errors.push_back("run.total_slots: must exceed run.warmup_slots");
    }
    return errors;
}

namespace {

struct EngineState {
    std::vector<Station> stations;
    std::vector<Rng> backoff_rng;
    std::vector<Rng> arrival_rng;
    std::vector<std::uint64_t> resume_slot; // ack-overhead hold, per station
};

void throw_if_invalid(const ScenarioConfig& cfg) {
    auto errors = validate_scenario(cfg);
    if (errors.empty()) return;
    std::string msg = "invalid scenario";
    for (const auto& e : errors) {
        msg += "\n  ";
        msg += e;
    }
    throw std::invalid_argument(msg);
}

} // namespace

RunResult run(const ScenarioConfig& cfg) {
    throw_if_invalid(cfg);

    const double slot_us = cfg.timing.slot_us;
    const std::uint32_t duration_slots =
        frame_duration_slots(cfg.traffic, cfg.timing.bitrate_bps, slot_us);
    const std::uint64_t warmup = cfg.effective_warmup_slots();
    const bool saturation = cfg.traffic.mode == TrafficMode::saturation;
    const std::uint32_t header_bits = cfg.traffic.mac_header_bits + cfg.traffic.phy_header_bits;

    EngineState st;
    for (std::size_t ac = 0; ac < kNumAccessCategories; ++ac) {
        std::uint32_t aifs = aifs_slots_for(cfg.ac_table[ac].aifs_us, slot_us);
        for (std::uint32_t i = 0; i < cfg.stations_per_ac[ac]; ++i) {
            auto id = static_cast<std::uint32_t>(st.stations.size());
            st.stations.emplace_back(id, cfg.ac_table[ac], cfg.channel.mpr_limit, aifs);
            st.backoff_rng.push_back(make_station_stream(cfg.run.seed, id, StreamPurpose::backoff));
            st.arrival_rng.push_back(make_station_stream(cfg.run.seed, id, StreamPurpose::arrivals));
            st.resume_slot.push_back(0);
        }
    }
    const std::size_t n = st.stations.size();

    Channel channel(cfg.channel);
    MetricsAccumulator metrics(cfg.timing.bitrate_bps, cfg.metrics, header_bits);
    ConservationCounters cons;
    RunResult result;
    if (cfg.run.record_trace) result.trace.emplace();

    std::vector<TransmissionStart> starters;
    std::vector<StationPhase> phase_before(n);

    for (std::uint64_t slot = 0; slot < cfg.run.total_slots; ++slot) {
        channel.set_slot(slot);
        const double now_us = static_cast<double>(slot) * slot_us;
        const bool measured = slot >= warmup;

        SlotRecord rec;
        SlotRecord* trace_rec = nullptr;
        if (result.trace) {
            rec.slot = slot;
            trace_rec = &rec;
        }
        if (trace_rec) {
            for (std::size_t i = 0; i < n; ++i) phase_before[i] = st.stations[i].phase();
        }

        // 1. Arrivals land at the slot boundary, before anything is stepped.
        for (std::size_t i = 0; i < n; ++i) {
            Station& station = st.stations[i];
            std::uint32_t count = 0;
            if (saturation) {
                count = (!station.has_hol() && station.queue().empty()) ? 1 : 0;
            } else {
                count = arrivals_in_slot(st.arrival_rng[i], cfg.traffic, slot_us);
            }
            for (std::uint32_t k = 0; k < count; ++k) {
                ++cons.arrivals;
                if (measured) metrics.record_arrival(station.ac().ac_id);
                bool accepted = false;
                station.enqueue({now_us, now_us}, cfg.traffic.queue_capacity, accepted);
                if (!accepted) {
                    ++cons.dropped_queue;
                    if (measured) metrics.record_drop(station.ac().ac_id);
                }
            }
        }

        // 2. Frames ending at this boundary retire; their senders learn the
        // outcome now, before anyone senses or steps.
        if (channel.sense() > 0) {
            for (const auto& c : channel.retire_completions()) {
                Station& station = st.stations[c.station_id];
                if (saturation && station.queue().empty()) {
                    // Always-backlogged source: the next packet is already
                    // waiting when the head of line frees.
                    ++cons.arrivals;
                    if (measured) metrics.record_arrival(station.ac().ac_id);
                    bool accepted = false;
                    station.enqueue({now_us, now_us}, cfg.traffic.queue_capacity, accepted);
                    if (!accepted) {
                        ++cons.dropped_queue;
                        if (measured) metrics.record_drop(station.ac().ac_id);
                    }
                }
                auto outcome = station.on_transmission_result(c.success, now_us, st.backoff_rng[c.station_id]);
                st.resume_slot[c.station_id] = slot + cfg.timing.ack_overhead_slots;
                if (c.success) ++cons.frames_succeeded; else ++cons.frames_collided;
                if (outcome.delivered) {
                    ++cons.delivered;
                    if (measured) {
                        double anchor = cfg.metrics.delay_anchor == DelayAnchor::arrival
                                            ? outcome.packet.arrival_us
                                            : outcome.packet.hol_us;
                        metrics.record_delivery(c.ac_id, anchor, now_us, cfg.traffic.payload_bits);
                    }
                } else if (outcome.dropped) {
                    ++cons.dropped_retry;
                    if (measured) metrics.record_drop(c.ac_id);
                    if (trace_rec) trace_rec->drops.push_back({c.station_id, c.ac_id});
                }
                if (trace_rec) trace_rec->ends.push_back({c.station_id, c.ac_id, c.success});
            }
        }

        // 3. Ideal enhanced carrier sensing: the count at slot start, before
        // this slot's starters.
        const std::uint32_t sensed = channel.sense();
        if (trace_rec) trace_rec->sensed = sensed;

        // 4. Stations step in id order; simultaneous transmit decisions are
        // collected and admitted together.
        starters.clear();
        for (std::size_t i = 0; i < n; ++i) {
            Station& station = st.stations[i];
            if (station.phase() == StationPhase::transmitting) continue;
            if (slot < st.resume_slot[i]) continue;
            StepOutcome step = station.step(sensed, now_us, st.backoff_rng[i]);
            if (trace_rec && step.counter_delta != 0) {
                trace_rec->decrements.push_back(
                    {static_cast<std::uint32_t>(i), step.counter_delta});
            }
            if (step.wants_to_transmit) {
                starters.push_back({static_cast<std::uint32_t>(i), station.ac().ac_id});
            }
        }

        // 5. All new frames start at once; exceeding the MPR limit dooms
        // everything in flight.
        if (!starters.empty()) {
            channel.admit_transmissions(starters, duration_slots);
            for (const auto& s : starters) {
                st.stations[s.station_id].begin_transmission(slot + duration_slots);
                ++cons.frames_started;
                if (trace_rec) trace_rec->starts.push_back({s.station_id, s.ac_id, slot + duration_slots});
            }
        }

        if (trace_rec) {
            for (std::size_t i = 0; i < n; ++i) {
                if (st.stations[i].phase() != phase_before[i]) {
                    trace_rec->phase_changes.push_back(
                        {static_cast<std::uint32_t>(i), st.stations[i].phase()});
                }
            }
            result.trace->slots.push_back(std::move(rec));
        }
    }

    for (const auto& station : st.stations) {
        if (station.phase() == StationPhase::transmitting) {
            ++cons.in_flight_at_end;
            cons.queued_at_end += station.queue().size();
        } else {
            cons.queued_at_end += station.backlog();
        }
    }

    const double observed_us = static_cast<double>(cfg.run.total_slots - warmup) * slot_us;
    result.report = metrics.finalize(observed_us);
    result.conservation = cons;
    if (result.trace) result.trace_hash = trace_hash(*result.trace);
    return result;
}

RunResult run_dcf_baseline(ScenarioConfig cfg) {
    if (cfg.channel.mpr_limit != 1) {
        throw std::invalid_argument("run_dcf_baseline: requires channel.mpr_limit == 1");
    }
    std::uint32_t n = cfg.total_stations();
    cfg.stations_per_ac = {n, 0, 0, 0};
    cfg.ac_table[0].threshold = 0;
    cfg.ac_table[0].mode = CountdownMode::fixed_one;
    for (std::size_t i = 1; i < cfg.ac_table.size(); ++i) {
        cfg.ac_table[i].threshold = 0;
    }
    cfg.ac_table_is_default = false;
    return run(cfg);
}

} // namespace mprsim
