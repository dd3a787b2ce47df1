#pragma once

#include <cstdint>

#include "mprsim/rng.hpp"

namespace mprsim {

enum class TrafficMode : std::uint8_t {
    poisson,
    saturation, // always backlogged
};

struct TrafficConfig {
    TrafficMode mode = TrafficMode::saturation;
    double rate_pps = 0;                 // per-station packet arrival rate, packets/s (poisson)
    std::uint32_t payload_bits = 8184;
    std::uint32_t mac_header_bits = 272;
    std::uint32_t phy_header_bits = 128;
    std::size_t queue_capacity = 0;      // 0 = unbounded
};

// Packets arriving at one station during one slot: Poisson with mean
// rate * slot duration. rate == 0 is the degenerate no-traffic limit.
std::uint32_t arrivals_in_slot(Rng& rng, const TrafficConfig& cfg, double slot_us);

// Whole-frame on-air time in microseconds (PHY + MAC header + payload).
double frame_duration_us(const TrafficConfig& cfg, double bitrate_bps);

// Frame occupancy in whole slots, rounded up.
std::uint32_t frame_duration_slots(const TrafficConfig& cfg, double bitrate_bps, double slot_us);

// Offered traffic normalized by the packet transmission time:
// N * per-station rate * frame duration. Dimensionless, may exceed 1.
double normalized_offered_load(double per_station_rate_pps, std::uint32_t n_stations,
                               double frame_us);

// Inverse: the per-station rate that realizes a target normalized load.
double rate_for_normalized_load(double load, std::uint32_t n_stations, double frame_us);

} // namespace mprsim
