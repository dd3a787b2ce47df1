#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mprsim {

inline constexpr std::size_t kNumAccessCategories = 4;

enum class DelayAnchor : std::uint8_t {
    arrival, // MAC-queue entry to successful completion (includes queueing)
    hol,     // head-of-line promotion to successful completion
};

struct MetricsOptions {
    DelayAnchor delay_anchor = DelayAnchor::arrival;
    bool include_headers_in_throughput = false;
};

struct AcMetrics {
    double normalized_throughput = 0; // delivered payload airtime / observed time
    double mean_delay_us = 0;         // valid only when has_delay_stats
    double jitter_us2 = 0;            // population variance of delay; valid only when has_delay_stats
    bool has_delay_stats = false;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;  // retry-limit and queue-overflow drops
    std::uint64_t arrivals = 0; // post-warmup arrivals (offered traffic)
};

struct MetricsReport {
    std::array<AcMetrics, kNumAccessCategories> per_ac;
    AcMetrics aggregate;
    double observed_duration_us = 0;
};

// Per-run accumulator, engine-owned. Delay variance is kept with Welford
// updates; raw samples are retained so a two-pass recomputation can
// cross-check the streaming path.
class MetricsAccumulator {
public:
    MetricsAccumulator(double bitrate_bps, MetricsOptions options,
                       std::uint32_t header_bits /* mac + phy */)
        : bitrate_bps_(bitrate_bps), options_(options), header_bits_(header_bits) {}

    const MetricsOptions& options() const { return options_; }

    // Delay sample + throughput credit for one delivered packet. Throws
    // std::logic_error on a negative delay (engine bug).
    void record_delivery(std::uint8_t ac_id, double enqueue_time_us, double completion_time_us,
                         std::uint32_t payload_bits);

    void record_drop(std::uint8_t ac_id);
    void record_arrival(std::uint8_t ac_id);

    const std::vector<double>& delay_samples(std::uint8_t ac_id) const {
        return per_ac_[ac_id].samples;
    }

    MetricsReport finalize(double observed_duration_us) const;

private:
    struct AcAccumulator {
        double payload_us = 0;
        std::uint64_t delivered = 0;
        std::uint64_t dropped = 0;
        std::uint64_t arrivals = 0;
        // Welford running moments
        double mean = 0;
        double m2 = 0;
        std::vector<double> samples;
    };

    double bitrate_bps_;
    MetricsOptions options_;
    std::uint32_t header_bits_;
    std::array<AcAccumulator, kNumAccessCategories> per_ac_;
};

} // namespace mprsim
