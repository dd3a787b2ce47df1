#include "doctest.h"

#include <stdexcept>

#include "mprsim/rng.hpp"
#include "mprsim/traffic.hpp"

using namespace mprsim;

TEST_SUITE("traffic") {

TEST_CASE("reference frame occupies 172 slots") {
    TrafficConfig cfg; // 8184 + 272 + 128 bits
    CHECK(frame_duration_us(cfg, 1e6) == doctest::Approx(8584.0));
    CHECK(frame_duration_slots(cfg, 1e6, 50.0) == 172);
}

TEST_CASE("a frame of exactly one slot of bits needs one slot") {
    TrafficConfig cfg;
    cfg.payload_bits = 30;
    cfg.mac_header_bits = 10;
    cfg.phy_header_bits = 10; // 50 bits at 1 Mb/s = 50 us = exactly 1 slot
    CHECK(frame_duration_slots(cfg, 1e6, 50.0) == 1);
    cfg.payload_bits = 31;
    CHECK(frame_duration_slots(cfg, 1e6, 50.0) == 2);
}

TEST_CASE("doubling the bitrate halves the on-air time") {
    TrafficConfig cfg;
    CHECK(frame_duration_us(cfg, 2e6) == doctest::Approx(frame_duration_us(cfg, 1e6) / 2));
}

TEST_CASE("frame duration is monotone in the payload") {
    TrafficConfig cfg;
    std::uint32_t prev = 0;
    for (std::uint32_t payload = 100; payload <= 20000; payload += 371) {
        cfg.payload_bits = payload;
        std::uint32_t slots = frame_duration_slots(cfg, 1e6, 50.0);
        CHECK(slots >= prev);
        prev = slots;
    }
}

TEST_CASE("normalized offered load definition and inverse") {
    CHECK(normalized_offered_load(0, 40, 8584) == 0);
    double rate = rate_for_normalized_load(2.0, 40, 8584);
    CHECK(normalized_offered_load(rate, 40, 8584) == doctest::Approx(2.0));
    // Halving N at doubled per-station rate leaves the load unchanged.
    CHECK(normalized_offered_load(2 * rate, 20, 8584) == doctest::Approx(2.0));
}

TEST_CASE("poisson arrivals honor the zero-rate limit") {
    TrafficConfig cfg;
    cfg.mode = TrafficMode::poisson;
    cfg.rate_pps = 0;
    Rng rng(5);
    for (int i = 0; i < 100; ++i) CHECK(arrivals_in_slot(rng, cfg, 50.0) == 0);
}

TEST_CASE("arrival sampling rejects non-poisson modes") {
    TrafficConfig cfg;
    cfg.mode = TrafficMode::saturation;
    Rng rng(5);
    CHECK_THROWS_AS(arrivals_in_slot(rng, cfg, 50.0), std::logic_error);
}

} // TEST_SUITE
