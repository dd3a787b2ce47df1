#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mprsim {

// k-MPR collision channel: a slot's transmissions all succeed while the
// concurrent count stays <= mpr_limit; the first slot it exceeds the limit,
// every in-flight frame (old and new) is marked doomed and stays doomed.
struct ChannelConfig {
    std::uint32_t mpr_limit = 1; // K, >= 1
};

struct InFlightTransmission {
    std::uint32_t station_id = 0;
    std::uint8_t ac_id = 0;
    std::uint64_t start_slot = 0;
    std::uint64_t end_slot = 0; // exclusive
    bool doomed = false;
};

struct TransmissionStart {
    std::uint32_t station_id = 0;
    std::uint8_t ac_id = 0;
};

struct Completion {
    std::uint32_t station_id = 0;
    std::uint8_t ac_id = 0;
    bool success = false;
};

// Slotted channel state. Owned by the engine; single-threaded per run.
// Ideal enhanced carrier sensing: sense() is exactly the in-flight count.
class Channel {
public:
    explicit Channel(ChannelConfig cfg) : cfg_(cfg) {}

    const ChannelConfig& config() const { return cfg_; }
    std::uint64_t slot() const { return slot_; }
    void set_slot(std::uint64_t slot) { slot_ = slot; }

    std::uint32_t sense() const { return static_cast<std::uint32_t>(in_flight_.size()); }

    const std::vector<InFlightTransmission>& in_flight() const { return in_flight_; }

    // Admits all starters as [slot, slot + duration_slots). If the resulting
    // count exceeds mpr_limit, every in-flight frame is doomed, including the
    // ones that were already ongoing. Throws std::logic_error on a half-duplex
    // violation (a starter that is already transmitting): that is an engine
    // bug, not a protocol event.
    void admit_transmissions(std::span<const TransmissionStart> starters, std::uint32_t duration_slots);

    // Removes every frame with end_slot == current slot and reports it with
    // success = !doomed, in admission order.
    std::vector<Completion> retire_completions();

private:
    ChannelConfig cfg_;
    std::vector<InFlightTransmission> in_flight_;
    std::uint64_t slot_ = 0;
};

} // namespace mprsim
