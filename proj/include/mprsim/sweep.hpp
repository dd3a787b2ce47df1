#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mprsim/engine.hpp"

namespace mprsim {

enum class SweepParam : std::uint8_t {
    cw_min,
    load,       // normalized offered load (poisson scenarios)
    mpr_limit,  // K; default AC tables are re-derived per value
    n_stations, // total N, split across ACs (AC0 first for remainders)
    seed,
};

const char* sweep_param_name(SweepParam p);

struct SweepSpec {
    std::string sweep_id = "sweep";
    ScenarioConfig base;
    SweepParam param = SweepParam::cw_min;
    std::vector<double> values;
    std::uint32_t replications = 10;
    std::uint64_t seed_base = 1; // replication r uses master seed seed_base + r
};

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value);

// One sweep point after a run.
struct SweepRow {
    double value = 0;
    std::uint64_t seed = 0;
    MetricsReport report;
    ConservationCounters conservation;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows; // sorted by (value, seed)
};

// Executes every (value, replication) point. jobs > 1 runs points on worker
// threads; results land in preassigned slots, so output order never depends
// on scheduling.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs = 1);

// Sweep-spec file format (docs/formats.md). The referenced scenario path is
// resolved relative to the spec file.
SweepSpec load_sweep_file(const std::string& path);
SweepSpec parse_sweep_text(const std::string& text, const std::string& origin,
                           const std::string& base_dir);

// CSV emission, schema pinned in docs/formats.md. Rows are sorted by
// (value, ac, seed); reruns are byte-identical.
std::string sweep_points_csv(const SweepResult& result);
std::string sweep_summary_csv(const SweepResult& result); // per-point mean and standard error
std::string run_metrics_csv(const std::string& scenario_id, std::uint64_t seed,
                            const MetricsReport& report);

} // namespace mprsim
