#include "mprsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "mprsim/scenario.hpp"
#include "mprsim/text.hpp"

namespace mprsim {

const char* sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::cw_min: return "cw_min";
        case SweepParam::load: return "load";
        case SweepParam::mpr_limit: return "mpr_limit";
        case SweepParam::n_stations: return "n_stations";
        case SweepParam::seed: return "seed";
    }
    return "?";
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value) {
    ScenarioConfig cfg = base;
    switch (param) {
        case SweepParam::cw_min: {
            auto cw = static_cast<std::uint32_t>(value);
            for (auto& ac : cfg.ac_table) ac.backoff.cw_min = cw;
            break;
        }
        case SweepParam::load: {
            if (cfg.traffic.mode != TrafficMode::poisson) {
                throw ConfigError("load sweep needs traffic.mode = poisson");
            }
            cfg.traffic.rate_pps = rate_for_normalized_load(
                value, cfg.total_stations(),
                frame_duration_us(cfg.traffic, cfg.timing.bitrate_bps));
            break;
        }
        case SweepParam::mpr_limit: {
            auto k = static_cast<std::uint32_t>(value);
            cfg.channel.mpr_limit = k;
            if (cfg.ac_table_is_default && k >= 2) {
                auto table = default_ac_table(k);
                for (std::size_t i = 0; i < cfg.ac_table.size(); ++i) {
                    cfg.ac_table[i].threshold = table[i].threshold;
                    cfg.ac_table[i].mode = table[i].mode;
                }
            }
            break;
        }
        case SweepParam::n_stations: {
            auto n = static_cast<std::uint32_t>(value);
            std::uint32_t each = n / kNumAccessCategories;
            std::uint32_t rem = n % kNumAccessCategories;
            for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
                cfg.stations_per_ac[i] = each + (i < rem ? 1 : 0);
            }
            break;
        }
        case SweepParam::seed:
            cfg.run.seed = static_cast<std::uint64_t>(value);
            break;
    }
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
    if (spec.values.empty()) throw ConfigError("sweep: needs at least one value");
    if (spec.replications < 1) throw ConfigError("sweep: replications must be >= 1");
    if (spec.param == SweepParam::seed && spec.replications != 1) {
        throw ConfigError("sweep: a seed sweep uses replications = 1");
    }

    std::vector<double> values = spec.values;
    std::sort(values.begin(), values.end());

    SweepResult result;
    result.spec = spec;
    result.rows.resize(values.size() * spec.replications);

    auto run_point = [&](std::size_t idx) {
        std::size_t vi = idx / spec.replications;
        std::uint32_t rep = static_cast<std::uint32_t>(idx % spec.replications);
        ScenarioConfig cfg = apply_sweep_value(spec.base, spec.param, values[vi]);
        if (spec.param != SweepParam::seed) {
            cfg.run.seed = spec.seed_base + rep;
        }
        SweepRow row;
        row.value = values[vi];
        row.seed = cfg.run.seed;
        RunResult r = run(cfg);
        row.report = std::move(r.report);
        row.conservation = r.conservation;
        result.rows[idx] = std::move(row);
    };

    const std::size_t total = result.rows.size();
    if (jobs <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        unsigned count = std::min<std::size_t>(jobs, total);
        for (unsigned w = 0; w < count; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
                    run_point(i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }
    return result;
}

SweepSpec parse_sweep_text(const std::string& text, const std::string& origin,
                           const std::string& base_dir) {
    // Same key/value syntax as scenarios; keep the parse local and tiny.
    SweepSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_scenario = false;
    auto fail = [&](int ln, const std::string& msg) -> void {
        throw ConfigError(origin + ":" + std::to_string(ln) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t;
        {
            std::size_t b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            std::size_t e = line.find_last_not_of(" \t\r");
            t = line.substr(b, e - b + 1);
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            std::size_t e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));

        if (key == "id") {
            spec.sweep_id = value;
        } else if (key == "scenario") {
            std::filesystem::path p(value);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            spec.base = load_scenario_file(p.string());
            have_scenario = true;
        } else if (key == "param") {
            if (value == "cw_min") spec.param = SweepParam::cw_min;
            else if (value == "load") spec.param = SweepParam::load;
            else if (value == "mpr_limit") spec.param = SweepParam::mpr_limit;
            else if (value == "n_stations") spec.param = SweepParam::n_stations;
            else if (value == "seed") spec.param = SweepParam::seed;
            else fail(lineno, "param: expected cw_min, load, mpr_limit, n_stations or seed");
        } else if (key == "values") {
            std::istringstream vs(value);
            std::string tok;
            spec.values.clear();
            while (vs >> tok) {
                try {
                    spec.values.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    fail(lineno, "values: '" + tok + "' is not a number");
                }
            }
            if (spec.values.empty()) fail(lineno, "values: expected at least one value");
        } else if (key == "replications") {
            try {
                spec.replications = static_cast<std::uint32_t>(std::stoul(value));
            } catch (const std::exception&) {
                fail(lineno, "replications: expected a positive integer");
            }
        } else if (key == "seed_base") {
            try {
                spec.seed_base = std::stoull(value);
            } catch (const std::exception&) {
                fail(lineno, "seed_base: expected a nonnegative integer");
            }
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }
    if (!have_scenario) throw ConfigError(origin + ": missing 'scenario' key");
    if (spec.values.empty()) throw ConfigError(origin + ": missing 'values' key");
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_text(buf.str(), path, std::filesystem::path(path).parent_path().string());
}

namespace {

const char kPointsHeader[] =
    "scenario_id,seed,param,value,ac_id,throughput,mean_delay_us,jitter_us2,delivered,dropped";

void append_point_row(std::string& csv, const std::string& scenario_id, std::uint64_t seed,
                      const char* param, double value, std::size_t ac, const AcMetrics& m) {
    csv += scenario_id;
    csv += ',';
    csv += format_u64(seed);
    csv += ',';
    csv += param;
    csv += ',';
    csv += format_double(value);
    csv += ',';
    csv += format_u64(ac);
    csv += ',';
    csv += format_double(m.normalized_throughput);
    csv += ',';
    csv += format_double(m.mean_delay_us);
    csv += ',';
    csv += format_double(m.jitter_us2);
    csv += ',';
    csv += format_u64(m.delivered);
    csv += ',';
    csv += format_u64(m.dropped);
    csv += '\n';
}

struct SeStats {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
};

// Mean and standard error over the defined (non-NaN) values.
SeStats mean_se(const std::vector<double>& xs) {
    std::vector<double> v;
    for (double x : xs) {
        if (!std::isnan(x)) v.push_back(x);
    }
    SeStats out;
    if (v.empty()) return out;
    double sum = 0;
    for (double x : v) sum += x;
    out.mean = sum / static_cast<double>(v.size());
    if (v.size() == 1) {
        out.se = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double ss = 0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    return out;
}

} // namespace

std::string sweep_points_csv(const SweepResult& result) {
    std::string csv = kPointsHeader;
    csv += '\n';
    const char* param = sweep_param_name(result.spec.param);

    // Rows sorted by (value, ac, seed).
    std::vector<std::size_t> order(result.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (result.rows[a].value != result.rows[b].value)
            return result.rows[a].value < result.rows[b].value;
        return result.rows[a].seed < result.rows[b].seed;
    });
    double last_value = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> value_group;
    auto flush_group = [&]() {
        for (std::size_t ac = 0; ac < kNumAccessCategories; ++ac) {
            for (std::size_t idx : value_group) {
                const auto& row = result.rows[idx];
                append_point_row(csv, result.spec.base.scenario_id, row.seed, param, row.value, ac,
                                 row.report.per_ac[ac]);
            }
        }
        value_group.clear();
    };
    for (std::size_t idx : order) {
        double v = result.rows[idx].value;
        if (!value_group.empty() && v != last_value) flush_group();
        last_value = v;
        value_group.push_back(idx);
    }
    flush_group();
    return csv;
}

std::string sweep_summary_csv(const SweepResult& result) {
    std::string csv =
        "scenario_id,param,value,ac_id,n,throughput_mean,throughput_se,mean_delay_us_mean,"
        "mean_delay_us_se,jitter_us2_mean,jitter_us2_se,delivered_mean,dropped_mean";
    csv += '\n';
    const char* param = sweep_param_name(result.spec.param);

    std::vector<double> values;
    for (const auto& row : result.rows) values.push_back(row.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    for (double value : values) {
        for (std::size_t ac = 0; ac < kNumAccessCategories; ++ac) {
            std::vector<double> thr, delay, jitter, delivered, dropped;
            for (const auto& row : result.rows) {
                if (row.value != value) continue;
                const auto& m = row.report.per_ac[ac];
                thr.push_back(m.normalized_throughput);
                delay.push_back(m.mean_delay_us);
                jitter.push_back(m.jitter_us2);
                delivered.push_back(static_cast<double>(m.delivered));
                dropped.push_back(static_cast<double>(m.dropped));
            }
            auto t = mean_se(thr);
            auto d = mean_se(delay);
            auto j = mean_se(jitter);
            auto del = mean_se(delivered);
            auto dro = mean_se(dropped);
            csv += result.spec.base.scenario_id;
            csv += ',';
            csv += param;
            csv += ',';
            csv += format_double(value);
            csv += ',';
            csv += format_u64(ac);
            csv += ',';
            csv += format_u64(thr.size());
            csv += ',';
            csv += format_double(t.mean);
            csv += ',';
            csv += format_double(t.se);
            csv += ',';
            csv += format_double(d.mean);
            csv += ',';
            csv += format_double(d.se);
            csv += ',';
            csv += format_double(j.mean);
            csv += ',';
            csv += format_double(j.se);
            csv += ',';
            csv += format_double(del.mean);
            csv += ',';
            csv += format_double(dro.mean);
            csv += '\n';
        }
    }
    return csv;
}

std::string run_metrics_csv(const std::string& scenario_id, std::uint64_t seed,
                            const MetricsReport& report) {
    std::string csv = kPointsHeader;
    csv += '\n';
    for (std::size_t ac = 0; ac < kNumAccessCategories; ++ac) {
        append_point_row(csv, scenario_id, seed, "none", 0, ac, report.per_ac[ac]);
    }
    return csv;
}

} // namespace mprsim
