#include "mprsim/trace.hpp"

#include <ostream>

namespace mprsim {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void hash_u64(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xff;
        h *= kFnvPrime;
    }
}

const char* phase_token(StationPhase p) {
    switch (p) {
        case StationPhase::idle_no_packet: return "idle";
        case StationPhase::deferring: return "defer";
        case StationPhase::counting_down: return "count";
        case StationPhase::transmitting: return "tx";
    }
    return "?";
}

} // namespace

std::uint64_t trace_hash(const Trace& trace) {
    std::uint64_t h = kFnvOffset;
    for (const auto& r : trace.slots) {
        hash_u64(h, r.slot);
        hash_u64(h, r.sensed);
        for (const auto& d : r.decrements) {
            hash_u64(h, d.station);
            hash_u64(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(d.delta)));
        }
        for (const auto& p : r.phase_changes) {
            hash_u64(h, p.station);
            hash_u64(h, static_cast<std::uint64_t>(p.phase));
        }
        for (const auto& s : r.starts) {
            hash_u64(h, s.station);
            hash_u64(h, s.ac_id);
            hash_u64(h, s.end_slot);
        }
        for (const auto& e : r.ends) {
            hash_u64(h, e.station);
            hash_u64(h, e.ac_id);
            hash_u64(h, e.success ? 1 : 0);
        }
        for (const auto& d : r.drops) {
            hash_u64(h, d.station);
            hash_u64(h, d.ac_id);
        }
    }
    return h;
}

std::string format_slot_record(const SlotRecord& rec) {
    std::string line = std::to_string(rec.slot);
    line += " L=";
    line += std::to_string(rec.sensed);
    if (!rec.ends.empty()) {
        line += " end=";
        for (std::size_t i = 0; i < rec.ends.size(); ++i) {
            if (i) line += ',';
            line += std::to_string(rec.ends[i].station);
            line += ':';
            line += std::to_string(rec.ends[i].ac_id);
            line += ':';
            line += rec.ends[i].success ? '1' : '0';
        }
    }
    if (!rec.drops.empty()) {
        line += " drop=";
        for (std::size_t i = 0; i < rec.drops.size(); ++i) {
            if (i) line += ',';
            line += std::to_string(rec.drops[i].station);
            line += ':';
            line += std::to_string(rec.drops[i].ac_id);
        }
    }
    if (!rec.decrements.empty()) {
        line += " dec=";
        for (std::size_t i = 0; i < rec.decrements.size(); ++i) {
            if (i) line += ',';
            line += std::to_string(rec.decrements[i].station);
            line += ':';
            line += std::to_string(rec.decrements[i].delta);
        }
    }
    if (!rec.phase_changes.empty()) {
        line += " ph=";
        for (std::size_t i = 0; i < rec.phase_changes.size(); ++i) {
            if (i) line += ',';
            line += std::to_string(rec.phase_changes[i].station);
            line += ':';
            line += phase_token(rec.phase_changes[i].phase);
        }
    }
    if (!rec.starts.empty()) {
        line += " tx=";
        for (std::size_t i = 0; i < rec.starts.size(); ++i) {
            if (i) line += ',';
            line += std::to_string(rec.starts[i].station);
            line += ':';
            line += std::to_string(rec.starts[i].ac_id);
            line += ':';
            line += std::to_string(rec.starts[i].end_slot);
        }
    }
    return line;
}

void write_trace(std::ostream& os, const Trace& trace) {
    os << "# mprsim-trace v1\n";
    for (const auto& r : trace.slots) {
        os << format_slot_record(r) << '\n';
    }
}

} // namespace mprsim
