#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "mprsim/metrics.hpp"
#include "mprsim/rng.hpp"

using namespace mprsim;

namespace {

MetricsAccumulator make_acc(MetricsOptions opts = {}) {
    return MetricsAccumulator(1e6, opts, 400); // 272 + 128 header bits
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("one delivery gives its delay and zero jitter") {
    auto acc = make_acc();
    acc.record_delivery(0, 100, 600, 8184);
    auto rep = acc.finalize(1e6);
    CHECK(rep.per_ac[0].mean_delay_us == doctest::Approx(500));
    CHECK(rep.per_ac[0].jitter_us2 == doctest::Approx(0));
    CHECK(rep.per_ac[0].delivered == 1);
}

TEST_CASE("equal delays give zero jitter") {
    auto acc = make_acc();
    acc.record_delivery(1, 0, 250, 8184);
    acc.record_delivery(1, 100, 350, 8184);
    auto rep = acc.finalize(1e6);
    CHECK(rep.per_ac[1].jitter_us2 == doctest::Approx(0));
}

TEST_CASE("jitter is the population variance") {
    auto acc = make_acc();
    acc.record_delivery(2, 0, 100, 8184);
    acc.record_delivery(2, 0, 300, 8184);
    auto rep = acc.finalize(1e6);
    CHECK(rep.per_ac[2].mean_delay_us == doctest::Approx(200));
    CHECK(rep.per_ac[2].jitter_us2 == doctest::Approx(10000));
}

TEST_CASE("zero deliveries report zero throughput and flagged-absent delay") {
    auto acc = make_acc();
    auto rep = acc.finalize(1e6);
    for (const auto& m : rep.per_ac) {
        CHECK(m.normalized_throughput == 0);
        CHECK(!m.has_delay_stats);
        CHECK(std::isnan(m.mean_delay_us));
        CHECK(std::isnan(m.jitter_us2));
    }
    CHECK(!rep.aggregate.has_delay_stats);
}

TEST_CASE("negative delay is rejected as an engine bug") {
    auto acc = make_acc();
    CHECK_THROWS_AS(acc.record_delivery(0, 100, 50, 8184), std::logic_error);
}

TEST_CASE("drops never contribute delay samples") {
    auto acc = make_acc();
    acc.record_drop(0);
    acc.record_drop(0);
    auto rep = acc.finalize(1e6);
    CHECK(rep.per_ac[0].dropped == 2);
    CHECK(!rep.per_ac[0].has_delay_stats);
    CHECK(acc.delay_samples(0).empty());
}

TEST_CASE("streaming jitter matches a two-pass recomputation") {
    auto acc = make_acc();
    Rng rng(77);
    for (int i = 0; i < 5000; ++i) {
        double delay = 500 + 1e6 * rng.uniform01();
        acc.record_delivery(3, 0, delay, 8184);
    }
    auto rep = acc.finalize(1e6);

    const auto& samples = acc.delay_samples(3);
    double mean = 0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size());

    CHECK(rep.per_ac[3].mean_delay_us == doctest::Approx(mean).epsilon(1e-9));
    CHECK(rep.per_ac[3].jitter_us2 == doctest::Approx(var).epsilon(1e-9));
}

TEST_CASE("eight packed streams approach eight times the payload fraction") {
    auto acc = make_acc();
    const double frame_us = 8584;
    const int cycles = 1000;
    for (int k = 1; k <= cycles; ++k) {
        for (int stream = 0; stream < 8; ++stream) {
            acc.record_delivery(static_cast<std::uint8_t>(stream % 4), (k - 1) * frame_us,
                                k * frame_us, 8184);
        }
    }
    auto rep = acc.finalize(cycles * frame_us);
    CHECK(rep.aggregate.normalized_throughput == doctest::Approx(8.0 * 8184.0 / 8584.0));
    CHECK(rep.aggregate.normalized_throughput <= 8.0);
}

TEST_CASE("header-inclusive accounting credits the full frame") {
    MetricsOptions opts;
    opts.include_headers_in_throughput = true;
    auto acc = make_acc(opts);
    acc.record_delivery(0, 0, 8584, 8184);
    auto rep = acc.finalize(8584);
    CHECK(rep.per_ac[0].normalized_throughput == doctest::Approx(1.0));
}

TEST_CASE("the aggregate merges per-AC moments exactly") {
    auto acc = make_acc();
    acc.record_delivery(0, 0, 100, 8184);
    acc.record_delivery(1, 0, 300, 8184);
    acc.record_delivery(2, 0, 500, 8184);
    auto rep = acc.finalize(1e6);
    CHECK(rep.aggregate.delivered == 3);
    CHECK(rep.aggregate.mean_delay_us == doctest::Approx(300));
    // population variance of {100, 300, 500}
    CHECK(rep.aggregate.jitter_us2 == doctest::Approx((40000.0 + 0.0 + 40000.0) / 3.0));
}

} // TEST_SUITE
