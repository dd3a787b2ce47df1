#include "mprsim/experiments.hpp"

namespace mprsim {
namespace {

ScenarioConfig reference_base(std::uint32_t n_stations, std::uint32_t mpr_limit) {
    ScenarioConfig cfg = make_default_scenario();
    cfg.channel.mpr_limit = mpr_limit;
    cfg.ac_table = default_ac_table(mpr_limit);
    for (auto& ac : cfg.ac_table) ac.aifs_us = cfg.timing.difs_us;
    std::uint32_t each = n_stations / kNumAccessCategories;
    std::uint32_t rem = n_stations % kNumAccessCategories;
    for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
        cfg.stations_per_ac[i] = each + (i < rem ? 1 : 0);
    }
    return cfg;
}

} // namespace

SweepSpec cw_sweep_experiment(std::vector<double> cw_values, std::uint32_t n_stations,
                              std::uint32_t mpr_limit, std::uint32_t replications,
                              std::uint64_t total_slots, std::uint64_t seed_base) {
    SweepSpec spec;
    spec.sweep_id = "cw_sweep";
    spec.base = reference_base(n_stations, mpr_limit);
    spec.base.scenario_id = "saturation_cw";
    spec.base.traffic.mode = TrafficMode::saturation;
    spec.base.run.total_slots = total_slots;
    spec.param = SweepParam::cw_min;
    spec.values = std::move(cw_values);
    spec.replications = replications;
    spec.seed_base = seed_base;
    return spec;
}

SweepSpec load_sweep_experiment(std::vector<double> load_values, std::uint32_t n_stations,
                                std::uint32_t mpr_limit, std::uint32_t max_backoff_stage,
                                std::uint32_t cw_min, std::uint32_t replications,
                                std::uint64_t total_slots, std::uint64_t seed_base) {
    SweepSpec spec;
    spec.sweep_id = "load_sweep";
    spec.base = reference_base(n_stations, mpr_limit);
    spec.base.scenario_id = "poisson_load";
    spec.base.traffic.mode = TrafficMode::poisson;
    spec.base.traffic.rate_pps = 0; // set per sweep point
    for (auto& ac : spec.base.ac_table) {
        ac.backoff.cw_min = cw_min;
        ac.backoff.max_backoff_stage = max_backoff_stage;
    }
    spec.base.run.total_slots = total_slots;
    spec.param = SweepParam::load;
    spec.values = std::move(load_values);
    spec.replications = replications;
    spec.seed_base = seed_base;
    return spec;
}

} // namespace mprsim
