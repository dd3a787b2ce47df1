#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

#include "mprsim/rng.hpp"

namespace mprsim {

enum class CountdownMode : std::uint8_t {
    adaptive,  // decrement by K - L while L <= threshold
    fixed_one, // decrement by 1 while L <= threshold
};

struct BackoffConfig {
    std::uint32_t cw_min = 16;
    std::uint32_t max_backoff_stage = 5; // m
    std::uint32_t retry_limit = 4;
    // Draw interval is [0, cw] inclusive (literal reading of the countdown
    // rule); set false for the conventional [0, cw-1].
    bool draw_inclusive = true;
};

struct AccessCategoryConfig {
    std::uint8_t ac_id = 0;
    std::uint32_t threshold = 0; // K_t, must be < K
    CountdownMode mode = CountdownMode::adaptive;
    BackoffConfig backoff;
    double aifs_us = 128.0; // defaults to DIFS
};

// Contention window at a backoff stage: cw_min * 2^min(stage, m).
std::uint32_t contention_window(const BackoffConfig& cfg, std::uint32_t stage);

// Counter decrement for one elapsed slot with L ongoing transmissions:
//   adaptive : K - L if L <= K_t, else 0
//   fixed_one: 1     if L <= K_t, else 0
std::uint32_t decrement_amount(CountdownMode mode, std::uint32_t mpr_limit, std::uint32_t threshold,
                               std::uint32_t sensed_count);

// A slot is idle for an AC while the ongoing-transmission count is at or
// below its threshold.
inline bool slot_is_idle(std::uint32_t sensed_count, std::uint32_t threshold) {
    return sensed_count <= threshold;
}

// Uniform backoff draw from [0, cw] (or [0, cw-1] when inclusive is false).
// Consumes exactly one RNG draw.
std::uint32_t draw_backoff(Rng& rng, std::uint32_t cw, bool inclusive = true);

// The Table-II service differentiation defaults for MPR limit K (requires
// K >= 2 so every threshold stays < K):
//   AC0: K_t = K-1,       adaptive
//   AC1: K_t = ceil(K/2), adaptive
//   AC2: K_t = ceil(K/4), fixed
//   AC3: K_t = 1,         fixed
std::array<AccessCategoryConfig, 4> default_ac_table(std::uint32_t mpr_limit);

enum class StationPhase : std::uint8_t {
    idle_no_packet,
    deferring,     // counter nonpositive, waiting out the AIFS idle run
    counting_down, // counter positive
    transmitting,
};

struct Packet {
    double arrival_us = 0;  // entered the MAC queue
    double hol_us = 0;      // became head-of-line
};

struct StepOutcome {
    bool wants_to_transmit = false;
    std::int32_t counter_delta = 0; // 0 when frozen/held
};

// What on_transmission_result did with the head-of-line packet.
struct ResultOutcome {
    bool delivered = false;
    bool dropped = false;
    Packet packet; // the retired HoL packet (valid when delivered or dropped)
};

// Per-station MAC state machine. Owned and stepped by the engine,
// single-threaded; RNG substream is passed in by the owner.
class Station {
public:
    Station(std::uint32_t id, const AccessCategoryConfig& ac, std::uint32_t mpr_limit,
            std::uint32_t aifs_slots)
        : id_(id), ac_(ac), mpr_limit_(mpr_limit), aifs_slots_(aifs_slots) {}

    std::uint32_t id() const { return id_; }
    const AccessCategoryConfig& ac() const { return ac_; }
    StationPhase phase() const { return phase_; }
    std::int64_t counter() const { return counter_; }
    std::uint32_t stage() const { return stage_; }
    std::uint32_t retries() const { return retries_; }
    std::uint64_t tx_end_slot() const { return tx_end_slot_; }
    bool has_hol() const { return hol_.has_value(); }
    const std::deque<Packet>& queue() const { return queue_; }
    std::size_t backlog() const { return queue_.size() + (hol_ ? 1u : 0u); }

    void enqueue(Packet p, std::size_t queue_capacity, bool& accepted);

    // One slot boundary for a non-transmitting station. sensed_count is the
    // channel count at slot start (before this slot's starters). Applies the
    // countdown rules, runs the attempt's AIFS re-check, promotes a queued
    // packet to head-of-line, and reports whether the station starts a frame
    // this slot. The counter holds once nonpositive; the frame starts after
    // the channel stays idle (by this AC's threshold) for AIFS-many slots
    // following the crossing, restarting whenever a busy slot intervenes.
    StepOutcome step(std::uint32_t sensed_count, double now_us, Rng& rng);

    // Marks the frame started; the engine admits it to the channel.
    void begin_transmission(std::uint64_t end_slot);

    // Outcome of the frame that just retired. Success delivers the HoL packet
    // and resets the ladder; failure escalates the stage and retries, dropping
    // the packet past the retry limit. Either way the next packet (if any)
    // gets a fresh backoff draw. Throws std::logic_error when the station is
    // not transmitting.
    ResultOutcome on_transmission_result(bool success, double now_us, Rng& rng);

private:
    void load_next_packet(double now_us, Rng& rng);

    std::uint32_t id_;
    AccessCategoryConfig ac_;
    std::uint32_t mpr_limit_;
    std::uint32_t aifs_slots_;

    StationPhase phase_ = StationPhase::idle_no_packet;
    std::int64_t counter_ = 0;
    std::uint32_t stage_ = 0;
    std::uint32_t retries_ = 0;
    std::uint32_t idle_run_ = 0;     // consecutive idle observations
    std::uint32_t difs_wait_ = 0;    // idle slots still owed by the pending attempt
    bool backoff_drawn_ = false;     // false while a fresh HoL may use immediate access
    bool just_drawn_ = false;        // draw happened at this boundary; countdown starts next
    std::uint64_t tx_end_slot_ = 0;

    std::optional<Packet> hol_;
    std::deque<Packet> queue_;
};

} // namespace mprsim
