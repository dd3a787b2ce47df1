#include "mprsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mprsim/text.hpp"

namespace mprsim {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

// key -> value with line numbers, so semantic errors can point at the file.
class KeyTable {
public:
    KeyTable(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos) {
                fail(lineno, "expected 'key = value'");
            }
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty()) fail(lineno, "empty key");
            if (entries_.count(key)) {
                fail(lineno, "duplicate key '" + key + "'");
            }
            entries_[key] = {value, lineno, false};
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

    [[noreturn]] void fail_key(const std::string& key, const std::string& msg) const {
        auto it = entries_.find(key);
        int line = it != entries_.end() ? it->second.line : 0;
        throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + key + ": " + msg);
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    const std::string* get(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.consumed = true;
        return &it->second.value;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it != entries_.end() ? it->second.line : 0;
    }

    void check_all_consumed() const {
        for (const auto& [key, entry] : entries_) {
            if (!entry.consumed) {
                fail(entry.line, "unknown key '" + key + "'");
            }
        }
    }

    double get_double(const std::string& key, double fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        double out = 0;
        auto res = std::from_chars(v->data(), v->data() + v->size(), out);
        if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
            fail_key(key, "expected a number, got '" + *v + "'");
        }
        return out;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        std::uint64_t out = 0;
        auto res = std::from_chars(v->data(), v->data() + v->size(), out);
        if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
            fail_key(key, "expected a nonnegative integer, got '" + *v + "'");
        }
        return out;
    }

    std::uint32_t get_u32(const std::string& key, std::uint32_t fallback) {
        std::uint64_t v = get_u64(key, fallback);
        if (v > 0xffffffffull) fail_key(key, "value out of range");
        return static_cast<std::uint32_t>(v);
    }

    bool get_bool(const std::string& key, bool fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        fail_key(key, "expected true or false, got '" + *v + "'");
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        const std::string* v = get(key);
        return v ? *v : fallback;
    }

    std::vector<std::uint64_t> get_u64_list(const std::string& key,
                                            std::vector<std::uint64_t> fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        std::vector<std::uint64_t> out;
        std::istringstream in(*v);
        std::string tok;
        while (in >> tok) {
            std::uint64_t x = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
                fail_key(key, "expected a list of nonnegative integers");
            }
            out.push_back(x);
        }
        if (out.empty()) fail_key(key, "expected at least one value");
        return out;
    }

private:
    std::string origin_;
    std::map<std::string, RawEntry> entries_;
};

const char* countdown_name(CountdownMode m) {
    return m == CountdownMode::adaptive ? "adaptive" : "fixed_one";
}

} // namespace

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
    KeyTable keys(text, origin);
    ScenarioConfig cfg = make_default_scenario();

    cfg.scenario_id = keys.get_string("id", cfg.scenario_id);
    cfg.channel.mpr_limit = keys.get_u32("channel.mpr_limit", cfg.channel.mpr_limit);

    // The default AC table is derived from the configured MPR limit; with
    // K = 1 no Table-II threshold is derivable, so all thresholds fall to 0.
    if (cfg.channel.mpr_limit >= 2) {
        cfg.ac_table = default_ac_table(cfg.channel.mpr_limit);
    } else {
        for (std::size_t i = 0; i < cfg.ac_table.size(); ++i) {
            cfg.ac_table[i].ac_id = static_cast<std::uint8_t>(i);
            cfg.ac_table[i].threshold = 0;
            cfg.ac_table[i].mode = i < 2 ? CountdownMode::adaptive : CountdownMode::fixed_one;
        }
    }

    auto spa = keys.get_u64_list("stations_per_ac",
                                 {cfg.stations_per_ac[0], cfg.stations_per_ac[1],
                                  cfg.stations_per_ac[2], cfg.stations_per_ac[3]});
    if (spa.size() != kNumAccessCategories) {
        keys.fail_key("stations_per_ac", "expected exactly 4 counts");
    }
    for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
        cfg.stations_per_ac[i] = static_cast<std::uint32_t>(spa[i]);
    }

    cfg.timing.slot_us = keys.get_double("timing.slot_us", cfg.timing.slot_us);
    cfg.timing.difs_us = keys.get_double("timing.difs_us", cfg.timing.difs_us);
    cfg.timing.bitrate_bps = keys.get_double("timing.bitrate_bps", cfg.timing.bitrate_bps);
    cfg.timing.ack_overhead_slots =
        keys.get_u32("timing.ack_overhead_slots", cfg.timing.ack_overhead_slots);

    for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
        std::string p = "ac" + std::to_string(i) + ".";
        auto& ac = cfg.ac_table[i];
        if (keys.has(p + "threshold")) {
            ac.threshold = keys.get_u32(p + "threshold", ac.threshold);
            cfg.ac_table_is_default = false;
        }
        if (const std::string* mode = keys.get(p + "countdown")) {
            if (*mode == "adaptive") ac.mode = CountdownMode::adaptive;
            else if (*mode == "fixed_one") ac.mode = CountdownMode::fixed_one;
            else keys.fail_key(p + "countdown", "expected adaptive or fixed_one");
            cfg.ac_table_is_default = false;
        }
        ac.backoff.cw_min = keys.get_u32(p + "cw_min", ac.backoff.cw_min);
        ac.backoff.max_backoff_stage =
            keys.get_u32(p + "max_backoff_stage", ac.backoff.max_backoff_stage);
        ac.backoff.retry_limit = keys.get_u32(p + "retry_limit", ac.backoff.retry_limit);
        ac.backoff.draw_inclusive = keys.get_bool(p + "draw_inclusive", ac.backoff.draw_inclusive);
        ac.aifs_us = keys.get_double(p + "aifs_us", cfg.timing.difs_us);
    }

    if (const std::string* mode = keys.get("traffic.mode")) {
        if (*mode == "saturation") cfg.traffic.mode = TrafficMode::saturation;
        else if (*mode == "poisson") cfg.traffic.mode = TrafficMode::poisson;
        else keys.fail_key("traffic.mode", "expected saturation or poisson");
    }
    cfg.traffic.payload_bits = keys.get_u32("traffic.payload_bits", cfg.traffic.payload_bits);
    cfg.traffic.mac_header_bits =
        keys.get_u32("traffic.mac_header_bits", cfg.traffic.mac_header_bits);
    cfg.traffic.phy_header_bits =
        keys.get_u32("traffic.phy_header_bits", cfg.traffic.phy_header_bits);
    cfg.traffic.queue_capacity = keys.get_u64("traffic.queue_capacity", cfg.traffic.queue_capacity);

    bool has_rate = keys.has("traffic.rate_pps");
    bool has_load = keys.has("traffic.load");
    if (has_rate && has_load) {
        keys.fail_key("traffic.load", "give traffic.rate_pps or traffic.load, not both");
    }
    if (has_rate) {
        cfg.traffic.rate_pps = keys.get_double("traffic.rate_pps", 0);
    } else if (has_load) {
        double load = keys.get_double("traffic.load", 0);
        if (cfg.traffic.mode != TrafficMode::poisson) {
            keys.fail_key("traffic.load", "normalized load needs traffic.mode = poisson");
        }
        cfg.traffic.rate_pps = rate_for_normalized_load(
            load, cfg.total_stations(), frame_duration_us(cfg.traffic, cfg.timing.bitrate_bps));
    }

    cfg.run.total_slots = keys.get_u64("run.total_slots", cfg.run.total_slots);
    if (keys.has("run.warmup_slots")) {
        cfg.run.warmup_slots = static_cast<std::int64_t>(keys.get_u64("run.warmup_slots", 0));
    }
    cfg.run.seed = keys.get_u64("run.seed", cfg.run.seed);
    cfg.run.record_trace = keys.get_bool("run.record_trace", cfg.run.record_trace);

    if (const std::string* anchor = keys.get("metrics.delay_anchor")) {
        if (*anchor == "arrival") cfg.metrics.delay_anchor = DelayAnchor::arrival;
        else if (*anchor == "hol") cfg.metrics.delay_anchor = DelayAnchor::hol;
        else keys.fail_key("metrics.delay_anchor", "expected arrival or hol");
    }
    cfg.metrics.include_headers_in_throughput =
        keys.get_bool("metrics.include_headers", cfg.metrics.include_headers_in_throughput);

    keys.check_all_consumed();

    // Semantic validation, anchored to the offending key's line when known.
    for (const auto& err : validate_scenario(cfg)) {
        std::string key = err.substr(0, err.find(':'));
        int line = keys.line_of(key);
        if (line > 0) {
            throw ConfigError(origin + ":" + std::to_string(line) + ": " + err);
        }
        throw ConfigError(origin + ": " + err);
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::string format_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "id = " << cfg.scenario_id << "\n";
    out << "channel.mpr_limit = " << cfg.channel.mpr_limit << "\n";
    out << "stations_per_ac =";
    for (auto c : cfg.stations_per_ac) out << ' ' << c;
    out << "\n";
    for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
        const auto& ac = cfg.ac_table[i];
        std::string p = "ac" + std::to_string(i) + ".";
        out << p << "threshold = " << ac.threshold << "\n";
        out << p << "countdown = " << countdown_name(ac.mode) << "\n";
        out << p << "cw_min = " << ac.backoff.cw_min << "\n";
        out << p << "max_backoff_stage = " << ac.backoff.max_backoff_stage << "\n";
        out << p << "retry_limit = " << ac.backoff.retry_limit << "\n";
        out << p << "draw_inclusive = " << (ac.backoff.draw_inclusive ? "true" : "false") << "\n";
        out << p << "aifs_us = " << format_double(ac.aifs_us) << "\n";
    }
    out << "traffic.mode = "
        << (cfg.traffic.mode == TrafficMode::saturation ? "saturation" : "poisson") << "\n";
    if (cfg.traffic.mode == TrafficMode::poisson) {
        out << "traffic.rate_pps = " << format_double(cfg.traffic.rate_pps) << "\n";
    }
    out << "traffic.payload_bits = " << cfg.traffic.payload_bits << "\n";
    out << "traffic.mac_header_bits = " << cfg.traffic.mac_header_bits << "\n";
    out << "traffic.phy_header_bits = " << cfg.traffic.phy_header_bits << "\n";
    out << "traffic.queue_capacity = " << cfg.traffic.queue_capacity << "\n";
    out << "timing.slot_us = " << format_double(cfg.timing.slot_us) << "\n";
    out << "timing.difs_us = " << format_double(cfg.timing.difs_us) << "\n";
    out << "timing.bitrate_bps = " << format_double(cfg.timing.bitrate_bps) << "\n";
    out << "timing.ack_overhead_slots = " << cfg.timing.ack_overhead_slots << "\n";
    out << "run.total_slots = " << cfg.run.total_slots << "\n";
    out << "run.warmup_slots = " << cfg.effective_warmup_slots() << "\n";
    out << "run.seed = " << cfg.run.seed << "\n";
    out << "run.record_trace = " << (cfg.run.record_trace ? "true" : "false") << "\n";
    out << "metrics.delay_anchor = "
        << (cfg.metrics.delay_anchor == DelayAnchor::arrival ? "arrival" : "hol") << "\n";
    out << "metrics.include_headers = "
        << (cfg.metrics.include_headers_in_throughput ? "true" : "false") << "\n";
    return out.str();
}

} // namespace mprsim
