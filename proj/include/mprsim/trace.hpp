#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mprsim/mac.hpp"

namespace mprsim {

// Everything that happened in one slot, in canonical order. One record per
// slot; records are strictly ordered by slot index. The text schema (see
// docs/formats.md) is stable so traces can be diffed byte-for-byte.
struct SlotRecord {
    std::uint64_t slot = 0;
    std::uint32_t sensed = 0; // L at slot start

    struct Decrement {
        std::uint32_t station;
        std::int32_t delta;
        bool operator==(const Decrement&) const = default;
    };
    struct PhaseChange {
        std::uint32_t station;
        StationPhase phase;
        bool operator==(const PhaseChange&) const = default;
    };
    struct Start {
        std::uint32_t station;
        std::uint8_t ac_id;
        std::uint64_t end_slot;
        bool operator==(const Start&) const = default;
    };
    struct End {
        std::uint32_t station;
        std::uint8_t ac_id;
        bool success;
        bool operator==(const End&) const = default;
    };
    struct Drop {
        std::uint32_t station;
        std::uint8_t ac_id;
        bool operator==(const Drop&) const = default;
    };

    std::vector<Decrement> decrements;
    std::vector<PhaseChange> phase_changes;
    std::vector<Start> starts;
    std::vector<End> ends;
    std::vector<Drop> drops;

    bool operator==(const SlotRecord&) const = default;
};

struct Trace {
    std::vector<SlotRecord> slots;
    bool operator==(const Trace&) const = default;
};

// FNV-1a over the canonical binary encoding of every record field.
std::uint64_t trace_hash(const Trace& trace);

// Newline-delimited export, one line per slot, stable field order.
std::string format_slot_record(const SlotRecord& rec);
void write_trace(std::ostream& os, const Trace& trace);

} // namespace mprsim
