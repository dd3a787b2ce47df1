#pragma once

#include <cstdint>
#include <vector>

#include "mprsim/sweep.hpp"

namespace mprsim {

// Preset sweeps for the two reference experiments. Both use the default
// 802.11 FH-PHY parameter set (8184-bit payload, 272-bit MAC header, 128-bit
// PHY header, 1 Mb/s, 50 us slots, DIFS 128 us) with N stations split
// equally across the four ACs.

// Saturation throughput vs CW_min (N = 40, K = 8, m = 5, retry limit 4).
SweepSpec cw_sweep_experiment(std::vector<double> cw_values, std::uint32_t n_stations = 40,
                              std::uint32_t mpr_limit = 8, std::uint32_t replications = 10,
                              std::uint64_t total_slots = 1'000'000, std::uint64_t seed_base = 1);

// Throughput / MAC delay / jitter vs normalized offered load
// (N = 40, K = 8, m = 7, CW_min = 256, Poisson arrivals).
SweepSpec load_sweep_experiment(std::vector<double> load_values, std::uint32_t n_stations = 40,
                                std::uint32_t mpr_limit = 8, std::uint32_t max_backoff_stage = 7,
                                std::uint32_t cw_min = 256, std::uint32_t replications = 10,
                                std::uint64_t total_slots = 1'000'000, std::uint64_t seed_base = 1);

} // namespace mprsim
