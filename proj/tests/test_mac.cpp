#include "doctest.h"

#include <stdexcept>

#include <cstdint>

#include "mprsim/mac.hpp"

using namespace mprsim;

namespace {

AccessCategoryConfig make_ac(std::uint32_t threshold, CountdownMode mode, std::uint32_t cw_min = 16,
                             std::uint32_t m = 5, std::uint32_t retry = 4) {
    AccessCategoryConfig ac;
    ac.ac_id = 0;
    ac.threshold = threshold;
    ac.mode = mode;
    ac.backoff = {cw_min, m, retry, true};
    ac.aifs_us = 128;
    return ac;
}

// A station whose first draw equals `want`, found by scanning seeds. The
// search is deterministic.
struct DrawnStation {
    Station station;
    Rng rng;
};

DrawnStation station_with_first_draw(const AccessCategoryConfig& ac, std::uint32_t mpr_limit,
                                     std::uint32_t want) {
    for (std::uint64_t seed = 1; seed < 5000; ++seed) {
        Rng probe(seed);
        if (draw_backoff(probe, contention_window(ac.backoff, 0), ac.backoff.draw_inclusive) ==
            want) {
            return {Station(0, ac, mpr_limit, 3), Rng(seed)};
        }
    }
    REQUIRE(false);
    return {Station(0, ac, mpr_limit, 3), Rng(0)};
}

} // namespace

TEST_SUITE("mac") {

TEST_CASE("adaptive decrement follows the piecewise rule") {
    CHECK(decrement_amount(CountdownMode::adaptive, 8, 7, 3) == 5);
    CHECK(decrement_amount(CountdownMode::adaptive, 8, 7, 8) == 0);
    CHECK(decrement_amount(CountdownMode::adaptive, 8, 7, 0) == 8);
    CHECK(decrement_amount(CountdownMode::fixed_one, 8, 1, 2) == 0);
    CHECK(decrement_amount(CountdownMode::fixed_one, 8, 1, 1) == 1);
}

TEST_CASE("decrement truth table is exhaustive over small limits") {
    for (std::uint32_t k : {2u, 4u, 8u}) {
        for (std::uint32_t kt = 0; kt < k; ++kt) {
            for (std::uint32_t l = 0; l <= k + 2; ++l) {
                std::uint32_t adaptive = l <= kt ? k - l : 0;
                std::uint32_t fixed = l <= kt ? 1u : 0u;
                CHECK(decrement_amount(CountdownMode::adaptive, k, kt, l) == adaptive);
                CHECK(decrement_amount(CountdownMode::fixed_one, k, kt, l) == fixed);
            }
        }
    }
}

TEST_CASE("threshold at or above the MPR limit is rejected") {
    CHECK_THROWS_AS(decrement_amount(CountdownMode::adaptive, 8, 8, 0), std::invalid_argument);
}

TEST_CASE("adaptive decrement dominates fixed below the threshold") {
    for (std::uint32_t k = 2; k <= 9; ++k) {
        for (std::uint32_t kt = 0; kt < k; ++kt) {
            for (std::uint32_t l = 0; l <= kt; ++l) {
                CHECK(decrement_amount(CountdownMode::adaptive, k, kt, l) >=
                      decrement_amount(CountdownMode::fixed_one, k, kt, l));
            }
        }
    }
}

TEST_CASE("at K=1 the adaptive rule collapses to classical DCF counting") {
    for (std::uint32_t l = 0; l <= 3; ++l) {
        CHECK(decrement_amount(CountdownMode::adaptive, 1, 0, l) ==
              decrement_amount(CountdownMode::fixed_one, 1, 0, l));
    }
}

TEST_CASE("slot idleness is threshold-relative") {
    CHECK(slot_is_idle(2, 2));
    CHECK(!slot_is_idle(3, 2));
    CHECK(slot_is_idle(0, 0));
    CHECK(slot_is_idle(0, 7));
}

TEST_CASE("contention window ladder doubles and caps") {
    BackoffConfig cfg{16, 5, 4, true};
    CHECK(contention_window(cfg, 0) == 16);
    CHECK(contention_window(cfg, 1) == 32);
    CHECK(contention_window(cfg, 2) == 64);
    CHECK(contention_window(cfg, 3) == 128);
    CHECK(contention_window(cfg, 4) == 256);
    CHECK(contention_window(cfg, 5) == 512);
    CHECK(contention_window(cfg, 6) == 512);
    CHECK(contention_window(cfg, 9) == 512);
}

TEST_CASE("default AC table derives the reference thresholds") {
    auto t8 = default_ac_table(8);
    CHECK(t8[0].threshold == 7);
    CHECK(t8[1].threshold == 4);
    CHECK(t8[2].threshold == 2);
    CHECK(t8[3].threshold == 1);
    CHECK(t8[0].mode == CountdownMode::adaptive);
    CHECK(t8[1].mode == CountdownMode::adaptive);
    CHECK(t8[2].mode == CountdownMode::fixed_one);
    CHECK(t8[3].mode == CountdownMode::fixed_one);

    auto t4 = default_ac_table(4);
    CHECK(t4[0].threshold == 3);
    CHECK(t4[1].threshold == 2);
    CHECK(t4[2].threshold == 1);
    CHECK(t4[3].threshold == 1);

    // Degenerate: differentiation only via the countdown mode.
    auto t2 = default_ac_table(2);
    for (const auto& ac : t2) CHECK(ac.threshold == 1);

    CHECK_THROWS_AS(default_ac_table(1), std::invalid_argument);
}

TEST_CASE("a crossing holds the counter and fires after the AIFS re-check") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    auto [st, rng] = station_with_first_draw(ac, 8, 5);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    auto draw_step = st.step(0, 0, rng); // draws 5
    CHECK(!draw_step.wants_to_transmit);
    REQUIRE(st.counter() == 5);

    auto crossing = st.step(0, 50, rng); // idle, decrement 8: 5 -> -3
    CHECK(st.counter() == -3);
    CHECK(crossing.counter_delta == -8);
    CHECK(!crossing.wants_to_transmit); // the re-check window starts here

    CHECK(!st.step(0, 100, rng).wants_to_transmit);
    CHECK(!st.step(0, 150, rng).wants_to_transmit);
    auto fire = st.step(0, 200, rng); // third idle slot after the crossing
    CHECK(fire.wants_to_transmit);
    CHECK(st.counter() == -3); // held, never decremented past the crossing
}

TEST_CASE("a busy slot freezes a positive counter") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    auto [st, rng] = station_with_first_draw(ac, 8, 5);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    st.step(0, 0, rng);
    auto out = st.step(8, 50, rng); // 8 > threshold 7
    CHECK(st.counter() == 5);
    CHECK(out.counter_delta == 0);
    CHECK(!out.wants_to_transmit);
}

TEST_CASE("a zero draw is nonpositive and fires after the re-check") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    auto [st, rng] = station_with_first_draw(ac, 8, 0);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    st.step(0, 0, rng); // draws 0: attempt armed
    CHECK(st.counter() == 0);
    CHECK(!st.step(0, 50, rng).wants_to_transmit);
    CHECK(!st.step(0, 100, rng).wants_to_transmit);
    CHECK(st.step(0, 150, rng).wants_to_transmit);
    CHECK(st.counter() == 0);
}

TEST_CASE("a busy slot restarts the pending re-check") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    auto [st, rng] = station_with_first_draw(ac, 8, 0);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    st.step(0, 0, rng);                            // draw 0, pending
    CHECK(!st.step(0, 50, rng).wants_to_transmit); // 1 idle
    CHECK(!st.step(8, 100, rng).wants_to_transmit); // busy: restart
    CHECK(!st.step(0, 150, rng).wants_to_transmit);
    CHECK(!st.step(0, 200, rng).wants_to_transmit);
    CHECK(st.step(0, 250, rng).wants_to_transmit); // 3 fresh idle slots
}

TEST_CASE("a fresh packet on a long-idle channel transmits immediately without a draw") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    Station st(0, ac, 8, 3);
    Rng rng(11), shadow(11);
    for (int i = 0; i < 3; ++i) st.step(0, i * 50.0, rng); // builds the idle run
    bool ok = true;
    st.enqueue({150, 150}, 0, ok);
    auto out = st.step(0, 150, rng);
    CHECK(out.wants_to_transmit);
    CHECK(rng.next() == shadow.next()); // no draw consumed
}

TEST_CASE("a fresh packet without the idle run draws a backoff") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    Station st(0, ac, 8, 3);
    Rng rng(11), shadow(11);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    auto out = st.step(0, 0, rng);
    CHECK(!out.wants_to_transmit);
    CHECK(st.counter() == static_cast<std::int64_t>(draw_backoff(shadow, 16, true)));
}

TEST_CASE("success resets the ladder and failure escalates it") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    Station st(0, ac, 8, 3);
    Rng rng(4242);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    st.enqueue({0, 0}, 0, ok); // a second packet so success keeps the station busy
    st.step(0, 0, rng);
    st.begin_transmission(172);

    // Four failures stay within the retry budget and double the window.
    for (std::uint32_t attempt = 1; attempt <= 4; ++attempt) {
        auto res = st.on_transmission_result(false, 0, rng);
        CHECK(!res.delivered);
        CHECK(!res.dropped);
        CHECK(st.retries() == attempt);
        CHECK(st.stage() == (attempt < 5 ? attempt : 5));
        CHECK(st.counter() <= contention_window(ac.backoff, st.stage()));
        st.begin_transmission(172);
    }

    // The fifth consecutive failure exceeds retry_limit=4: packet dropped.
    auto dropped = st.on_transmission_result(false, 0, rng);
    CHECK(dropped.dropped);
    CHECK(st.retries() == 0);
    CHECK(st.stage() == 0);

    // Success on the first attempt of the next packet keeps stage 0.
    st.begin_transmission(344);
    auto delivered = st.on_transmission_result(true, 17200, rng);
    CHECK(delivered.delivered);
    CHECK(st.stage() == 0);
    CHECK(st.retries() == 0);
}

TEST_CASE("the post-result draw does not count down at the result boundary") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    Station st(0, ac, 8, 3);
    Rng rng(97);
    bool ok = true;
    st.enqueue({0, 0}, 0, ok);
    st.enqueue({0, 0}, 0, ok);
    st.step(0, 0, rng);
    st.begin_transmission(172);
    st.on_transmission_result(true, 8600, rng); // draws post-backoff for the next packet
    std::int64_t drawn = st.counter();
    if (drawn > 0) {
        st.step(0, 8600, rng); // same boundary as the result: no decrement yet
        CHECK(st.counter() == drawn);
        st.step(0, 8650, rng);
        CHECK(st.counter() == drawn - 8);
    }
}

TEST_CASE("result processing requires a transmission") {
    auto ac = make_ac(7, CountdownMode::adaptive);
    Station st(0, ac, 8, 3);
    Rng rng(1);
    CHECK_THROWS_AS(st.on_transmission_result(true, 0, rng), std::logic_error);
}

} // TEST_SUITE
