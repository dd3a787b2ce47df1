#include "mprsim/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace mprsim {

std::uint32_t arrivals_in_slot(Rng& rng, const TrafficConfig& cfg, double slot_us) {
    if (cfg.mode != TrafficMode::poisson) {
        throw std::logic_error("arrivals_in_slot: traffic mode is not poisson");
    }
    return rng.poisson(cfg.rate_pps * slot_us * 1e-6);
}

double frame_duration_us(const TrafficConfig& cfg, double bitrate_bps) {
    double bits = static_cast<double>(cfg.phy_header_bits) + cfg.mac_header_bits + cfg.payload_bits;
    return bits / bitrate_bps * 1e6;
}

std::uint32_t frame_duration_slots(const TrafficConfig& cfg, double bitrate_bps, double slot_us) {
    double slots = frame_duration_us(cfg, bitrate_bps) / slot_us;
    return static_cast<std::uint32_t>(std::ceil(slots - 1e-9));
}

double normalized_offered_load(double per_station_rate_pps, std::uint32_t n_stations,
                               double frame_us) {
    return static_cast<double>(n_stations) * per_station_rate_pps * frame_us * 1e-6;
}

double rate_for_normalized_load(double load, std::uint32_t n_stations, double frame_us) {
    if (n_stations == 0 || frame_us <= 0) {
        throw std::invalid_argument("rate_for_normalized_load: need stations and a positive frame time");
    }
    return load / (static_cast<double>(n_stations) * frame_us * 1e-6);
}

} // namespace mprsim
