#include "doctest.h"

#include <algorithm>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mprsim/experiments.hpp"
#include "mprsim/scenario.hpp"
#include "mprsim/sweep.hpp"

using namespace mprsim;

namespace {

SweepSpec tiny_cw_sweep() {
    SweepSpec spec = cw_sweep_experiment({16}, 8, 8, 1, 20000, 1);
    return spec;
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("a single value with one replication emits exactly four data rows") {
    SweepResult result = run_sweep(tiny_cw_sweep());
    std::string csv = sweep_points_csv(result);
    std::istringstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + 4); // header + one row per AC
    CHECK(csv.rfind("scenario_id,seed,param,value,ac_id,throughput,mean_delay_us,jitter_us2,"
                    "delivered,dropped\n",
                    0) == 0);
}

TEST_CASE("sweeps rerun byte-identically") {
    SweepSpec spec = cw_sweep_experiment({16, 50}, 8, 8, 2, 15000, 1);
    SweepResult a = run_sweep(spec);
    SweepResult b = run_sweep(spec);
    CHECK(sweep_points_csv(a) == sweep_points_csv(b));
    CHECK(sweep_summary_csv(a) == sweep_summary_csv(b));
}

TEST_CASE("worker threads do not change the output") {
    SweepSpec spec = cw_sweep_experiment({16, 50}, 8, 8, 2, 10000, 1);
    SweepResult serial = run_sweep(spec, 1);
    SweepResult threaded = run_sweep(spec, 4);
    CHECK(sweep_points_csv(serial) == sweep_points_csv(threaded));
}

TEST_CASE("rows are ordered by value, access category, then seed") {
    SweepSpec spec = cw_sweep_experiment({50, 16}, 8, 8, 2, 10000, 1);
    std::string csv = sweep_points_csv(run_sweep(spec));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::tuple<double, int, std::uint64_t>> keys;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ','); // scenario
        std::getline(row, field, ',');
        std::uint64_t seed = std::stoull(field);
        std::getline(row, field, ','); // param
        std::getline(row, field, ',');
        double value = std::stod(field);
        std::getline(row, field, ',');
        int ac = std::stoi(field);
        keys.emplace_back(value, ac, seed);
    }
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(keys.size() == 2 * 4 * 2);
}

TEST_CASE("sweep values apply to the right knobs") {
    ScenarioConfig base = make_default_scenario();

    ScenarioConfig cw = apply_sweep_value(base, SweepParam::cw_min, 256);
    for (const auto& ac : cw.ac_table) CHECK(ac.backoff.cw_min == 256);

    ScenarioConfig k4 = apply_sweep_value(base, SweepParam::mpr_limit, 4);
    CHECK(k4.channel.mpr_limit == 4);
    CHECK(k4.ac_table[0].threshold == 3); // re-derived default table
    CHECK(k4.ac_table[2].threshold == 1);

    ScenarioConfig n42 = apply_sweep_value(base, SweepParam::n_stations, 42);
    CHECK(n42.stations_per_ac[0] == 11);
    CHECK(n42.stations_per_ac[1] == 11);
    CHECK(n42.stations_per_ac[2] == 10);
    CHECK(n42.stations_per_ac[3] == 10);

    CHECK_THROWS_AS(apply_sweep_value(base, SweepParam::load, 1.0), ConfigError);
    base.traffic.mode = TrafficMode::poisson;
    ScenarioConfig loaded = apply_sweep_value(base, SweepParam::load, 2.0);
    CHECK(loaded.traffic.rate_pps == doctest::Approx(2.0 / (40 * 8584e-6)));
}

TEST_CASE("custom backoff settings survive an mpr_limit sweep") {
    ScenarioConfig base = make_default_scenario();
    for (auto& ac : base.ac_table) ac.backoff.cw_min = 256;
    ScenarioConfig k4 = apply_sweep_value(base, SweepParam::mpr_limit, 4);
    for (const auto& ac : k4.ac_table) CHECK(ac.backoff.cw_min == 256);
}

TEST_CASE("a seed sweep forces one replication") {
    SweepSpec spec = tiny_cw_sweep();
    spec.param = SweepParam::seed;
    spec.values = {1, 2, 3};
    spec.replications = 4;
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec.replications = 1;
    SweepResult r = run_sweep(spec);
    CHECK(r.rows.size() == 3);
    CHECK(r.rows[0].seed == 1);
    CHECK(r.rows[2].seed == 3);
}

TEST_CASE("sweep files parse with relative scenario paths and anchored errors") {
    CHECK_THROWS_AS(parse_sweep_text("param = cw_min\nvalues = 16\n", "spec.sweep", ""), ConfigError);
    CHECK_THROWS_AS(parse_sweep_text("scenario = x.scn\nparam = nonsense\n", "spec.sweep", ""),
                    ConfigError);
    try {
        parse_sweep_text("values = a b\n", "spec.sweep", "");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("spec.sweep:1") != std::string::npos);
    }
}

TEST_CASE("the summary aggregates per point and category") {
    SweepSpec spec = cw_sweep_experiment({16}, 8, 8, 3, 10000, 1);
    SweepResult result = run_sweep(spec);
    std::string summary = sweep_summary_csv(result);
    std::istringstream in(summary);
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "scenario_id,param,value,ac_id,n,throughput_mean,throughput_se,mean_delay_us_mean,"
          "mean_delay_us_se,jitter_us2_mean,jitter_us2_se,delivered_mean,dropped_mean");
    int rows = 0;
    double recomputed = 0;
    while (std::getline(in, line)) {
        if (rows == 0) {
            // AC0 row: cross-check the mean against the raw points.
            std::istringstream row(line);
            std::string field;
            for (int i = 0; i < 6; ++i) std::getline(row, field, ',');
            recomputed = std::stod(field);
        }
        ++rows;
    }
    CHECK(rows == 4);
    double manual = 0;
    for (const auto& r : result.rows) manual += r.report.per_ac[0].normalized_throughput;
    manual /= static_cast<double>(result.rows.size());
    CHECK(recomputed == doctest::Approx(manual).epsilon(1e-12));
}

} // TEST_SUITE
