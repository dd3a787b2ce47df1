#pragma once

#include <cstdint>
#include <string>

namespace mprsim {

// Locale-independent, shortest-round-trip number formatting (std::to_chars)
// so emitted files are byte-stable. NaN prints as "nan".
std::string format_double(double v);
std::string format_u64(std::uint64_t v);

} // namespace mprsim
