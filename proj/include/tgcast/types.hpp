#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace tgcast {

using NodeId = std::uint64_t;
using Timestamp = std::uint64_t;

// One timestamped interaction (source, destination, timestamp).
// Multi-edges and exact duplicates are legal and preserved.
struct Interaction {
    NodeId source = 0;
    NodeId destination = 0;
    Timestamp timestamp = 0;

    friend bool operator==(const Interaction&, const Interaction&) = default;
};

// A node observed at a specific time; the unit the walk moves between.
struct TemporalNode {
    NodeId node = 0;
    Timestamp time = 0;

    friend auto operator<=>(const TemporalNode&, const TemporalNode&) = default;
};

}  // namespace tgcast

template <>
struct std::hash<tgcast::TemporalNode> {
    std::size_t operator()(const tgcast::TemporalNode& tn) const noexcept {
        std::uint64_t h = tn.node * 0x9e3779b97f4a7c15ULL;
        h ^= tn.time + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};
