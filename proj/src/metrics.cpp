#include "mprsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mprsim {

void MetricsAccumulator::record_delivery(std::uint8_t ac_id, double enqueue_time_us,
                                         double completion_time_us, std::uint32_t payload_bits) {
    if (completion_time_us < enqueue_time_us) {
        throw std::logic_error("record_delivery: negative delay");
    }
    auto& acc = per_ac_.at(ac_id);
    double credited_bits = static_cast<double>(payload_bits) +
                           (options_.include_headers_in_throughput ? header_bits_ : 0u);
    acc.payload_us += credited_bits / bitrate_bps_ * 1e6;
    ++acc.delivered;

    double delay = completion_time_us - enqueue_time_us;
    acc.samples.push_back(delay);
    double d1 = delay - acc.mean;
    acc.mean += d1 / static_cast<double>(acc.delivered);
    acc.m2 += d1 * (delay - acc.mean);
}

void MetricsAccumulator::record_drop(std::uint8_t ac_id) { ++per_ac_.at(ac_id).dropped; }

void MetricsAccumulator::record_arrival(std::uint8_t ac_id) { ++per_ac_.at(ac_id).arrivals; }

MetricsReport MetricsAccumulator::finalize(double observed_duration_us) const {
    if (observed_duration_us <= 0) {
        throw std::invalid_argument("finalize: observed duration must be positive");
    }
    MetricsReport rep;
    rep.observed_duration_us = observed_duration_us;

    double agg_payload_us = 0;
    std::uint64_t agg_delivered = 0;
    double agg_mean = 0, agg_m2 = 0; // merged Welford moments across ACs

    for (std::size_t i = 0; i < kNumAccessCategories; ++i) {
        const auto& acc = per_ac_[i];
        auto& out = rep.per_ac[i];
        out.normalized_throughput = acc.payload_us / observed_duration_us;
        out.delivered = acc.delivered;
        out.dropped = acc.dropped;
        out.arrivals = acc.arrivals;
        if (acc.delivered > 0) {
            out.has_delay_stats = true;
            out.mean_delay_us = acc.mean;
            out.jitter_us2 = acc.m2 / static_cast<double>(acc.delivered); // population variance
        } else {
            out.mean_delay_us = std::numeric_limits<double>::quiet_NaN();
            out.jitter_us2 = std::numeric_limits<double>::quiet_NaN();
        }

        agg_payload_us += acc.payload_us;
        if (acc.delivered > 0) {
            double n_a = static_cast<double>(agg_delivered);
            double n_b = static_cast<double>(acc.delivered);
            double delta = acc.mean - agg_mean;
            agg_m2 += acc.m2 + delta * delta * n_a * n_b / (n_a + n_b);
            agg_mean += delta * n_b / (n_a + n_b);
            agg_delivered += acc.delivered;
        }
        rep.aggregate.dropped += acc.dropped;
        rep.aggregate.arrivals += acc.arrivals;
    }

    rep.aggregate.normalized_throughput = agg_payload_us / observed_duration_us;
    rep.aggregate.delivered = agg_delivered;
    if (agg_delivered > 0) {
        rep.aggregate.has_delay_stats = true;
        rep.aggregate.mean_delay_us = agg_mean;
        rep.aggregate.jitter_us2 = agg_m2 / static_cast<double>(agg_delivered);
    } else {
        rep.aggregate.mean_delay_us = std::numeric_limits<double>::quiet_NaN();
        rep.aggregate.jitter_us2 = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

} // namespace mprsim
