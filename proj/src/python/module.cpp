#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "mprsim/engine.hpp"
#include "mprsim/experiments.hpp"
#include "mprsim/scenario.hpp"
#include "mprsim/sweep.hpp"

namespace py = pybind11;
using namespace mprsim;

namespace {

CountdownMode mode_from_string(const std::string& s) {
    if (s == "adaptive") return CountdownMode::adaptive;
    if (s == "fixed_one") return CountdownMode::fixed_one;
    throw py::value_error("countdown mode must be 'adaptive' or 'fixed_one'");
}

py::dict ac_metrics_dict(const AcMetrics& m) {
    py::dict d;
    d["throughput"] = m.normalized_throughput;
    d["mean_delay_us"] = m.has_delay_stats ? py::object(py::float_(m.mean_delay_us)) : py::none();
    d["jitter_us2"] = m.has_delay_stats ? py::object(py::float_(m.jitter_us2)) : py::none();
    d["delivered"] = m.delivered;
    d["dropped"] = m.dropped;
    d["arrivals"] = m.arrivals;
    return d;
}

py::dict report_dict(const RunResult& result) {
    py::dict d;
    py::list per_ac;
    for (const auto& m : result.report.per_ac) per_ac.append(ac_metrics_dict(m));
    d["per_ac"] = per_ac;
    d["aggregate"] = ac_metrics_dict(result.report.aggregate);
    d["observed_duration_us"] = result.report.observed_duration_us;
    py::dict cons;
    cons["arrivals"] = result.conservation.arrivals;
    cons["delivered"] = result.conservation.delivered;
    cons["dropped_retry"] = result.conservation.dropped_retry;
    cons["dropped_queue"] = result.conservation.dropped_queue;
    cons["queued_at_end"] = result.conservation.queued_at_end;
    cons["in_flight_at_end"] = result.conservation.in_flight_at_end;
    cons["frames_started"] = result.conservation.frames_started;
    cons["frames_succeeded"] = result.conservation.frames_succeeded;
    cons["frames_collided"] = result.conservation.frames_collided;
    cons["packets_reconcile"] = result.conservation.packets_reconcile();
    cons["frames_reconcile"] = result.conservation.frames_reconcile();
    d["conservation"] = cons;
    if (result.trace_hash) d["trace_hash"] = *result.trace_hash;
    return d;
}

ScenarioConfig scenario_with_overrides(const std::string& text, py::kwargs kwargs) {
    ScenarioConfig cfg = parse_scenario_text(text, "<python>");
    for (auto item : kwargs) {
        auto key = item.first.cast<std::string>();
        if (key == "seed") cfg.run.seed = item.second.cast<std::uint64_t>();
        else if (key == "total_slots") cfg.run.total_slots = item.second.cast<std::uint64_t>();
        else if (key == "warmup_slots") cfg.run.warmup_slots = item.second.cast<std::int64_t>();
        else if (key == "record_trace") cfg.run.record_trace = item.second.cast<bool>();
        else throw py::value_error("unknown override '" + key + "'");
    }
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Slotted CSMA/CA simulator for k-MPR channels with per-AC adaptive backoff";

    m.def(
        "decrement_amount",
        [](const std::string& mode, std::uint32_t k, std::uint32_t k_t, std::uint32_t sensed) {
            return decrement_amount(mode_from_string(mode), k, k_t, sensed);
        },
        py::arg("mode"), py::arg("mpr_limit"), py::arg("threshold"), py::arg("sensed_count"),
        "Backoff decrement for one idle slot: K - L (adaptive) or 1 (fixed_one), 0 above the threshold.");

    m.def("slot_is_idle", &slot_is_idle, py::arg("sensed_count"), py::arg("threshold"));

    m.def(
        "default_ac_table",
        [](std::uint32_t k) {
            py::list out;
            for (const auto& ac : default_ac_table(k)) {
                py::dict d;
                d["ac_id"] = ac.ac_id;
                d["threshold"] = ac.threshold;
                d["countdown"] = ac.mode == CountdownMode::adaptive ? "adaptive" : "fixed_one";
                out.append(d);
            }
            return out;
        },
        py::arg("mpr_limit"));

    m.def(
        "frame_duration_slots",
        [](std::uint32_t payload_bits, std::uint32_t mac_header_bits, std::uint32_t phy_header_bits,
           double bitrate_bps, double slot_us) {
            TrafficConfig cfg;
            cfg.payload_bits = payload_bits;
            cfg.mac_header_bits = mac_header_bits;
            cfg.phy_header_bits = phy_header_bits;
            return frame_duration_slots(cfg, bitrate_bps, slot_us);
        },
        py::arg("payload_bits"), py::arg("mac_header_bits") = 272, py::arg("phy_header_bits") = 128,
        py::arg("bitrate_bps") = 1e6, py::arg("slot_us") = 50.0);

    m.def("normalized_offered_load", &normalized_offered_load, py::arg("per_station_rate_pps"),
          py::arg("n_stations"), py::arg("frame_us"));
    m.def("rate_for_normalized_load", &rate_for_normalized_load, py::arg("load"),
          py::arg("n_stations"), py::arg("frame_us"));

    m.def("default_scenario_text", [] { return format_scenario(make_default_scenario()); });

    m.def(
        "check_scenario",
        [](const std::string& text) { return format_scenario(parse_scenario_text(text, "<python>")); },
        py::arg("text"), "Parse, validate and return the canonical resolved scenario dump.");

    m.def(
        "run_scenario",
        [](const std::string& text, py::kwargs kwargs) {
            return report_dict(run(scenario_with_overrides(text, kwargs)));
        },
        py::arg("text"),
        "Run a scenario given as config text. Overrides: seed, total_slots, warmup_slots, record_trace.");

    m.def(
        "run_scenario_file",
        [](const std::string& path, py::kwargs kwargs) {
            std::ifstream in(path);
            if (!in) throw py::value_error(path + ": cannot open file");
            std::ostringstream buf;
            buf << in.rdbuf();
            return report_dict(run(scenario_with_overrides(buf.str(), kwargs)));
        },
        py::arg("path"));

    py::register_exception<ConfigError>(m, "ConfigError");
}
