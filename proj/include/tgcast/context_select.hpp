#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tgcast/graph.hpp"
#include "tgcast/types.hpp"

namespace tgcast {

// What the top-N cut counts. Temporal counting keeps the N highest-mass
// (node, time) pairs before collapsing to base nodes; on recurrence-heavy
// streams repeat visits fill many of the N slots, so contexts stay compact
// the way published context sizes require. Base counting keeps N distinct
// nodes regardless of recurrence.
enum class TopUnit { TemporalNodes, BaseNodes };

// Walk and selection configuration for per-query context graphs.
struct ContextParams {
    double alpha = 0.2;         // per-step termination probability, in (0,1)
    double beta = 0.8;          // recency decay factor, in (0,1)
    std::size_t top_n = 100;    // ranked nodes kept, counted per top_unit
    std::size_t max_steps = 2;  // walk depth cap
    std::size_t max_links = 600;
    TopUnit top_unit = TopUnit::TemporalNodes;

    // Throws std::invalid_argument when out of range.
    void validate() const;
};

struct TransitionProb {
    TemporalNode node;
    double prob = 0.0;
};

// Recency-biased transition law over one temporal neighborhood: the exponent
// of each neighbor is its recency rank (1 = most recent), timestamp ties get
// distinct consecutive ranks (smaller node id ranks first), and the
// denominator sums beta^1..beta^n, so probabilities always sum to 1.
// Throws std::invalid_argument on an empty neighborhood; such nodes are
// terminal and must not be expanded.
std::vector<TransitionProb> transition_probs(std::span<const TemporalNode> neighborhood,
                                             double beta);

// Exact termination law of the terminate-or-move walk started at origin,
// computed by dynamic programming over the walk tree (no sampling).
struct TerminationDistribution {
    TemporalNode origin;
    // Sorted by (node, time); masses reached via multiple paths are summed.
    std::vector<std::pair<TemporalNode, double>> mass;

    double total() const;
};

TerminationDistribution termination_distribution(const TemporalGraph& graph,
                                                 TemporalNode origin,
                                                 const ContextParams& params);

// Ranks temporal nodes by termination mass (ties: later time, then smaller
// node id), truncates to top_n of the given unit, collapses to base node ids
// keeping first occurrence, and forces the origin's base node to the front.
std::vector<NodeId> select_context_nodes(const TerminationDistribution& dist,
                                         std::size_t top_n,
                                         TopUnit unit = TopUnit::TemporalNodes);

// The per-query subgraph that is verbalized into the prompt.
struct ContextGraph {
    std::vector<Interaction> links;      // chronological, all strictly before query_time
    std::vector<NodeId> selected_nodes;  // ordered, query source first
    NodeId query_source = 0;
    Timestamp query_time = 0;

    // True when id appears as an endpoint of any link.
    bool contains_endpoint(NodeId id) const;
};

// All interactions strictly before t_q with at least one endpoint in nodes.
// nodes must be non-empty and ordered with the query source first.
ContextGraph build_context_graph(const TemporalGraph& graph,
                                 std::span<const NodeId> nodes,
                                 Timestamp t_q);

}  // namespace tgcast
