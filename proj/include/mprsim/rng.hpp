#pragma once

#include <cstdint>

namespace mprsim {

// Deterministic PRNG used everywhere in the simulator. SplitMix64 stepping:
// 2^64 period, trivially seedable, identical output on every platform.
// std::* engines/distributions are avoided on purpose; their output is not
// pinned across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-shift: consumes exactly one draw, bias < 2^-32.
    std::uint32_t uniform_below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform in [lo, hi] inclusive, one draw.
    std::uint32_t uniform_in(std::uint32_t lo, std::uint32_t hi) {
        return lo + uniform_below(hi - lo + 1);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Poisson-distributed count (Knuth product method, split for large means).
    // Consumes a variable number of draws; mean <= 0 consumes none.
    std::uint32_t poisson(double mean);

private:
    std::uint64_t state_;
};

// What a per-station substream is used for. Separate purposes get separate
// streams so e.g. arrival sampling never perturbs backoff draws.
enum class StreamPurpose : std::uint64_t {
    backoff = 1,
    arrivals = 2,
};

// Splitting rule (documented contract, frozen): the substream for station s
// and purpose p is seeded with
//   mix(mix(master ^ 0xA02B_DBF7_BB3C_0A7Aull * (s + 1)) ^ p * 0x9E3779B97F4A7C15ull)
// where mix is the SplitMix64 finalizer. Adding stations never changes the
// streams of existing station ids.
Rng make_station_stream(std::uint64_t master_seed, std::uint32_t station_id, StreamPurpose purpose);

} // namespace mprsim
