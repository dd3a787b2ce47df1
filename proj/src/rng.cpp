#include "mprsim/rng.hpp"

#include <cmath>

namespace mprsim {
namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint32_t Rng::poisson(double mean) {
    if (mean <= 0) return 0;
    std::uint32_t count = 0;
    // Split large means so exp(-mean) stays representable.
    while (mean > 500) {
        double chunk = 500;
        double threshold = std::exp(-chunk);
        std::uint32_t k = 0;
        double p = 1;
        do {
            ++k;
            p *= uniform01();
        } while (p > threshold);
        count += k - 1;
        mean -= chunk;
    }
    double threshold = std::exp(-mean);
    std::uint32_t k = 0;
    double p = 1;
    do {
        ++k;
        p *= uniform01();
    } while (p > threshold);
    return count + k - 1;
}

Rng make_station_stream(std::uint64_t master_seed, std::uint32_t station_id, StreamPurpose purpose) {
    std::uint64_t s = splitmix_finalize(master_seed ^ 0xA02BDBF7BB3C0A7Aull * (station_id + 1ull));
    s = splitmix_finalize(s ^ static_cast<std::uint64_t>(purpose) * 0x9E3779B97F4A7C15ull);
    return Rng(s);
}

} // namespace mprsim
