#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgcast/types.hpp"

namespace tgcast {

// Header names of the three required columns in a delimited edge list.
struct ColumnMap {
    std::string source = "u";
    std::string destination = "i";
    std::string timestamp = "ts";
};

// Immutable, chronologically indexed interaction stream. Safe for shared
// concurrent reads once constructed.
class TemporalGraph {
public:
    // Per-node incidence entry; link_index points into interactions() and is
    // ascending in time because interactions are kept chronologically sorted.
    struct Incidence {
        Timestamp time = 0;
        NodeId other = 0;
        std::size_t link_index = 0;
    };

    TemporalGraph() = default;

    // Takes any interaction order; stable-sorts by timestamp so ties keep
    // input order. extra_universe widens the ranking candidate set beyond
    // the endpoints present in the stream.
    explicit TemporalGraph(std::vector<Interaction> interactions,
                           std::string name = {},
                           std::span<const NodeId> extra_universe = {});

    const std::vector<Interaction>& interactions() const { return interactions_; }
    const std::string& name() const { return name_; }

    // Sorted, duplicate-free. Always a superset of all endpoints.
    const std::vector<NodeId>& node_universe() const { return universe_; }

    bool empty() const { return interactions_.empty(); }
    std::size_t size() const { return interactions_.size(); }
    Timestamp min_timestamp() const;
    Timestamp max_timestamp() const;

    // All interactions with timestamp strictly below t, in stored order.
    std::span<const Interaction> history_before(Timestamp t) const;

    // Undirected temporal neighborhood of (e, t): one entry per distinct
    // (other, time) pair with time < t, sorted by time descending then
    // node id ascending.
    std::vector<TemporalNode> temporal_neighborhood(NodeId e, Timestamp t) const;

    // Incidence prefix of node e strictly before t, ascending in time.
    // Empty span for unknown nodes.
    std::span<const Incidence> incident_before(NodeId e, Timestamp t) const;

private:
    std::vector<Interaction> interactions_;
    std::vector<NodeId> universe_;
    std::string name_;
    std::unordered_map<NodeId, std::vector<Incidence>> adjacency_;
};

// Parses a delimited edge list with a header row. delimiter '\0' auto-detects
// tab vs comma from the header. Malformed rows (missing mapped column,
// non-integral field) raise std::runtime_error naming the 1-based line.
// A header-only input yields an empty graph.
TemporalGraph load_edge_list(std::istream& input,
                             const ColumnMap& columns = {},
                             std::string name = {},
                             char delimiter = '\0',
                             std::span<const NodeId> extra_universe = {});

// One node id per line; blank lines ignored.
std::vector<NodeId> load_node_universe(std::istream& input);

// Canonical re-serialization used by the idempotence check and `ingest`.
void write_edge_list(std::ostream& out, const TemporalGraph& graph,
                     const ColumnMap& columns = {}, char delimiter = ',');

}  // namespace tgcast
