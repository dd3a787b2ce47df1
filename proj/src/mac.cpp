#include "mprsim/mac.hpp"

#include <cmath>
#include <stdexcept>

namespace mprsim {

std::uint32_t contention_window(const BackoffConfig& cfg, std::uint32_t stage) {
    std::uint32_t s = stage < cfg.max_backoff_stage ? stage : cfg.max_backoff_stage;
    return cfg.cw_min << s;
}

std::uint32_t decrement_amount(CountdownMode mode, std::uint32_t mpr_limit, std::uint32_t threshold,
                               std::uint32_t sensed_count) {
    if (threshold >= mpr_limit) {
        throw std::invalid_argument("decrement_amount: threshold must be < MPR limit");
    }
    if (!slot_is_idle(sensed_count, threshold)) return 0;
    if (mode == CountdownMode::fixed_one) return 1;
    return mpr_limit - sensed_count; // L <= K_t < K, so this is >= 1
}

std::uint32_t draw_backoff(Rng& rng, std::uint32_t cw, bool inclusive) {
    if (cw < 1) throw std::invalid_argument("draw_backoff: cw must be >= 1");
    return inclusive ? rng.uniform_in(0, cw) : rng.uniform_below(cw);
}

std::array<AccessCategoryConfig, 4> default_ac_table(std::uint32_t mpr_limit) {
    if (mpr_limit < 2) {
        throw std::invalid_argument(
            "default_ac_table: MPR limit must be >= 2 so every derived threshold stays below it");
    }
    auto ceil_div = [](std::uint32_t a, std::uint32_t b) { return (a + b - 1) / b; };
    std::array<AccessCategoryConfig, 4> table;
    table[0] = {0, mpr_limit - 1, CountdownMode::adaptive, {}, 128.0};
    table[1] = {1, ceil_div(mpr_limit, 2), CountdownMode::adaptive, {}, 128.0};
    table[2] = {2, ceil_div(mpr_limit, 4), CountdownMode::fixed_one, {}, 128.0};
    table[3] = {3, 1, CountdownMode::fixed_one, {}, 128.0};
    for (auto& ac : table) {
        if (ac.threshold >= mpr_limit) {
            throw std::invalid_argument("default_ac_table: derived threshold not < MPR limit");
        }
    }
    return table;
}

void Station::enqueue(Packet p, std::size_t queue_capacity, bool& accepted) {
    if (queue_capacity != 0 && queue_.size() >= queue_capacity) {
        accepted = false;
        return;
    }
    queue_.push_back(p);
    accepted = true;
}

void Station::load_next_packet(double now_us, Rng& rng) {
    hol_.reset();
    backoff_drawn_ = false;
    if (queue_.empty()) {
        phase_ = StationPhase::idle_no_packet;
        counter_ = 0;
        return;
    }
    hol_ = queue_.front();
    queue_.pop_front();
    hol_->hol_us = now_us;
    // Post-backoff: a fresh draw from the stage-0 window before the next
    // frame, so a winner cannot capture the channel.
    counter_ = draw_backoff(rng, contention_window(ac_.backoff, 0), ac_.backoff.draw_inclusive);
    backoff_drawn_ = true;
    just_drawn_ = true;
    if (counter_ <= 0) difs_wait_ = aifs_slots_;
    phase_ = counter_ > 0 ? StationPhase::counting_down : StationPhase::deferring;
}

StepOutcome Station::step(std::uint32_t sensed_count, double now_us, Rng& rng) {
    if (phase_ == StationPhase::transmitting) {
        throw std::logic_error("step: station is transmitting");
    }

    StepOutcome out;
    bool idle = slot_is_idle(sensed_count, ac_.threshold);

    // Promote a queued packet when the head of line is free.
    if (!hol_ && !queue_.empty()) {
        hol_ = queue_.front();
        queue_.pop_front();
        hol_->hol_us = now_us;
        backoff_drawn_ = false;
    }

    if (hol_) {
        if (!backoff_drawn_) {
            // Fresh head of line: transmit immediately when the channel has
            // already been idle for AIFS, otherwise start a backoff. The
            // countdown begins at the next boundary.
            if (idle_run_ >= aifs_slots_ && idle) {
                out.wants_to_transmit = true;
                counter_ = 0;
            } else {
                counter_ = draw_backoff(rng, contention_window(ac_.backoff, stage_),
                                        ac_.backoff.draw_inclusive);
                backoff_drawn_ = true;
                if (counter_ <= 0) difs_wait_ = aifs_slots_;
                phase_ = counter_ > 0 ? StationPhase::counting_down : StationPhase::deferring;
            }
        } else if (counter_ > 0) {
            // Counting down. A draw made at this boundary starts counting at
            // the next one (no idle slot has elapsed for it yet).
            if (idle && !just_drawn_) {
                std::uint32_t dec =
                    decrement_amount(ac_.mode, mpr_limit_, ac_.threshold, sensed_count);
                counter_ -= dec;
                out.counter_delta = -static_cast<std::int32_t>(dec);
                if (counter_ <= 0) {
                    // Attempt: the channel must now stay idle for AIFS before
                    // the frame actually starts.
                    difs_wait_ = aifs_slots_;
                    phase_ = StationPhase::deferring;
                }
            }
        } else {
            // Attempt pending: the counter holds (no further decrements); the
            // re-check wants AIFS-many consecutive idle slots after the
            // crossing and restarts whenever a busy slot intervenes.
            if (!idle) {
                difs_wait_ = aifs_slots_;
            } else if (!just_drawn_) {
                if (difs_wait_ > 0) --difs_wait_;
                if (difs_wait_ == 0) out.wants_to_transmit = true;
            }
        }
    }

    just_drawn_ = false;
    idle_run_ = idle ? idle_run_ + 1 : 0;
    return out;
}

void Station::begin_transmission(std::uint64_t end_slot) {
    if (!hol_) throw std::logic_error("begin_transmission: no head-of-line packet");
    phase_ = StationPhase::transmitting;
    tx_end_slot_ = end_slot;
    idle_run_ = 0; // half-duplex: no observations while on the air
    difs_wait_ = 0;
    just_drawn_ = false;
}

ResultOutcome Station::on_transmission_result(bool success, double now_us, Rng& rng) {
    if (phase_ != StationPhase::transmitting) {
        throw std::logic_error("on_transmission_result: station is not transmitting");
    }

    ResultOutcome out;
    if (success) {
        out.delivered = true;
        out.packet = *hol_;
        stage_ = 0;
        retries_ = 0;
        load_next_packet(now_us, rng);
        return out;
    }

    ++retries_;
    if (retries_ > ac_.backoff.retry_limit) {
        out.dropped = true;
        out.packet = *hol_;
        stage_ = 0;
        retries_ = 0;
        load_next_packet(now_us, rng);
        return out;
    }

    // The window doubles up to the stage cap; the retry budget is tracked
    // independently of the stage.
    stage_ = stage_ + 1 < ac_.backoff.max_backoff_stage ? stage_ + 1 : ac_.backoff.max_backoff_stage;
    counter_ = draw_backoff(rng, contention_window(ac_.backoff, stage_), ac_.backoff.draw_inclusive);
    backoff_drawn_ = true;
    just_drawn_ = true;
    if (counter_ <= 0) difs_wait_ = aifs_slots_;
    phase_ = counter_ > 0 ? StationPhase::counting_down : StationPhase::deferring;
    return out;
}

} // namespace mprsim
