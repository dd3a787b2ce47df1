#include "mprsim/channel.hpp"

#include <stdexcept>
#include <string>

namespace mprsim {

void Channel::admit_transmissions(std::span<const TransmissionStart> starters,
                                  std::uint32_t duration_slots) {
    if (starters.empty()) return;
    if (duration_slots == 0) throw std::logic_error("admit_transmissions: zero duration");

    for (const auto& s : starters) {
        for (const auto& f : in_flight_) {
            if (f.station_id == s.station_id) {
                throw std::logic_error("half-duplex violation: station " +
                                       std::to_string(s.station_id) + " is already transmitting");
            }
        }
        in_flight_.push_back({s.station_id, s.ac_id, slot_, slot_ + duration_slots, false});
    }

    // Collision is evaluated once per slot after all simultaneous starters
    // are in: exceeding the MPR limit dooms everything in flight, the
    // ongoing frames included.
    if (in_flight_.size() > cfg_.mpr_limit) {
        for (auto& f : in_flight_) f.doomed = true;
    }
}

std::vector<Completion> Channel::retire_completions() {
    std::vector<Completion> done;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < in_flight_.size(); ++i) {
        if (in_flight_[i].end_slot == slot_) {
            done.push_back({in_flight_[i].station_id, in_flight_[i].ac_id, !in_flight_[i].doomed});
        } else {
            in_flight_[kept++] = in_flight_[i];
        }
    }
    in_flight_.resize(kept);
    return done;
}

} // namespace mprsim
