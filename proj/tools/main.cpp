#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mprsim/engine.hpp"
#include "mprsim/scenario.hpp"
#include "mprsim/sweep.hpp"
#include "mprsim/text.hpp"
#include "mprsim/trace.hpp"

namespace fs = std::filesystem;
using namespace mprsim;

namespace {

// --out beats MPRSIM_OUT beats ./out.
fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("MPRSIM_OUT"); env && *env) return env;
    return "out";
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void print_report(const MetricsReport& report) {
    std::cout << "ac  throughput  mean_delay_us  jitter_us2  delivered  dropped\n";
    for (std::size_t ac = 0; ac < kNumAccessCategories; ++ac) {
        const auto& m = report.per_ac[ac];
        std::cout << ac << "   " << format_double(m.normalized_throughput) << "  "
                  << format_double(m.mean_delay_us) << "  " << format_double(m.jitter_us2) << "  "
                  << m.delivered << "  " << m.dropped << "\n";
    }
    std::cout << "aggregate throughput " << format_double(report.aggregate.normalized_throughput)
              << ", delivered " << report.aggregate.delivered << ", dropped "
              << report.aggregate.dropped << "\n";
}

struct CommonFlags {
    std::string out_dir;
    std::int64_t seed = -1;
    std::int64_t slots = -1;
    std::int64_t warmup = -1;
};

void apply_overrides(ScenarioConfig& cfg, const CommonFlags& flags, bool trace) {
    if (flags.seed >= 0) cfg.run.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.slots > 0) cfg.run.total_slots = static_cast<std::uint64_t>(flags.slots);
    if (flags.warmup >= 0) cfg.run.warmup_slots = flags.warmup;
    if (trace) cfg.run.record_trace = true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mprsim: slotted CSMA/CA simulator for k-MPR channels"};
    app.require_subcommand(1);

    CommonFlags flags;
    bool trace = false;
    unsigned jobs = 1;
    std::uint32_t replications = 0;

    std::string run_config;
    auto* cmd_run = app.add_subcommand("run", "run one scenario and write its metrics CSV");
    cmd_run->add_option("config", run_config, "scenario file")->required();
    cmd_run->add_option("--seed", flags.seed, "master seed override");
    cmd_run->add_option("--slots", flags.slots, "total slots override");
    cmd_run->add_option("--warmup", flags.warmup, "warmup slots override");
    cmd_run->add_option("--out", flags.out_dir, "output directory (or MPRSIM_OUT)");
    cmd_run->add_flag("--trace", trace, "export the per-slot trace");

    std::string sweep_spec_path;
    auto* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV tables");
    cmd_sweep->add_option("spec", sweep_spec_path, "sweep spec file")->required();
    cmd_sweep->add_option("--seed", flags.seed, "seed base override");
    cmd_sweep->add_option("--slots", flags.slots, "total slots override");
    cmd_sweep->add_option("--warmup", flags.warmup, "warmup slots override");
    cmd_sweep->add_option("--out", flags.out_dir, "output directory (or MPRSIM_OUT)");
    cmd_sweep->add_option("--replications", replications, "seeds per sweep point");
    cmd_sweep->add_option("--jobs", jobs, "worker threads");

    std::string check_config;
    auto* cmd_check = app.add_subcommand("check", "validate a scenario and echo it resolved");
    cmd_check->add_option("config", check_config, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            ScenarioConfig cfg = load_scenario_file(run_config);
            apply_overrides(cfg, flags, trace);
            RunResult result = run(cfg);

            fs::path out_dir = resolve_out_dir(flags.out_dir);
            fs::path metrics_path = out_dir / (cfg.scenario_id + "_metrics.csv");
            write_file(metrics_path, run_metrics_csv(cfg.scenario_id, cfg.run.seed, result.report));
            if (result.trace) {
                std::ostringstream buf;
                write_trace(buf, *result.trace);
                write_file(out_dir / (cfg.scenario_id + "_trace.txt"), buf.str());
            }
            print_report(result.report);
            if (!result.conservation.packets_reconcile() ||
                !result.conservation.frames_reconcile()) {
                std::cerr << "error: conservation check failed\n";
                return 1;
            }
            std::cout << "wrote " << metrics_path.string() << "\n";
        } else if (*cmd_sweep) {
            SweepSpec spec = load_sweep_file(sweep_spec_path);
            if (flags.seed >= 0) spec.seed_base = static_cast<std::uint64_t>(flags.seed);
            if (replications > 0) spec.replications = replications;
            if (flags.slots > 0) spec.base.run.total_slots = static_cast<std::uint64_t>(flags.slots);
            if (flags.warmup >= 0) spec.base.run.warmup_slots = flags.warmup;

            SweepResult result = run_sweep(spec, jobs);
            fs::path out_dir = resolve_out_dir(flags.out_dir);
            fs::path points = out_dir / (spec.sweep_id + ".csv");
            fs::path summary = out_dir / (spec.sweep_id + "_summary.csv");
            write_file(points, sweep_points_csv(result));
            write_file(summary, sweep_summary_csv(result));
            std::cout << "wrote " << points.string() << " and " << summary.string() << "\n";
        } else if (*cmd_check) {
            ScenarioConfig cfg = load_scenario_file(check_config);
            std::cout << format_scenario(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
