#include "tgcast/context_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace tgcast {

void ContextParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("beta must be in (0,1)");
    }
    if (top_n < 1) throw std::invalid_argument("top-n must be at least 1");
    if (max_steps < 1) throw std::invalid_argument("max-steps must be at least 1");
    if (max_links < 1) throw std::invalid_argument("max-links must be at least 1");
}

std::vector<TransitionProb> transition_probs(std::span<const TemporalNode> neighborhood,
                                             double beta) {
    if (neighborhood.empty()) {
        throw std::invalid_argument("transition_probs: empty neighborhood, node is terminal");
    }

    std::vector<TemporalNode> ranked(neighborhood.begin(), neighborhood.end());
    std::sort(ranked.begin(), ranked.end(), [](const TemporalNode& a, const TemporalNode& b) {
        if (a.time != b.time) return a.time > b.time;
        return a.node < b.node;
    });

    // Exponents are a permutation of 1..n, so the ratios sum to exactly 1.
    double denominator = 0.0;
    double power = 1.0;
    std::vector<double> weights(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        power *= beta;
        weights[i] = power;
        denominator += power;
    }

    std::vector<TransitionProb> probs(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        probs[i] = {ranked[i], weights[i] / denominator};
    }
    return probs;
}

double TerminationDistribution::total() const {
    double sum = 0.0;
    for (const auto& [node, m] : mass) sum += m;
    return sum;
}

TerminationDistribution termination_distribution(const TemporalGraph& graph, TemporalNode origin,
                                                 const ContextParams& params) {
    params.validate();

    std::unordered_map<TemporalNode, double> terminated;
    std::unordered_map<TemporalNode, double> frontier{{origin, 1.0}};

    for (std::size_t depth = 0; depth < params.max_steps && !frontier.empty(); ++depth) {
        std::unordered_map<TemporalNode, double> next;
        for (const auto& [current, incoming] : frontier) {
            std::vector<TemporalNode> neighbors =
                graph.temporal_neighborhood(current.node, current.time);
            if (neighbors.empty()) {
                terminated[current] += incoming;
                continue;
            }
            terminated[current] += params.alpha * incoming;
            const double moving = (1.0 - params.alpha) * incoming;
            for (const TransitionProb& transition : transition_probs(neighbors, params.beta)) {
                next[transition.node] += moving * transition.prob;
            }
        }
        frontier = std::move(next);
    }

    // Whatever reaches the step cap terminates in place.
    for (const auto& [node, m] : frontier) terminated[node] += m;

    TerminationDistribution dist;
    dist.origin = origin;
    dist.mass.assign(terminated.begin(), terminated.end());
    std::sort(dist.mass.begin(), dist.mass.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return dist;
}

std::vector<NodeId> select_context_nodes(const TerminationDistribution& dist,
                                         std::size_t top_n, TopUnit unit) {
    std::vector<std::pair<TemporalNode, double>> ranked = dist.mass;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (a.first.time != b.first.time) return a.first.time > b.first.time;
        return a.first.node < b.first.node;
    });

    // The query source always leads: a context that omits it cannot support
    // the question.
    std::vector<NodeId> selected{dist.origin.node};
    std::unordered_set<NodeId> seen{dist.origin.node};

    if (unit == TopUnit::TemporalNodes) {
        const std::size_t keep = std::min(top_n, ranked.size());
        for (std::size_t i = 0; i < keep; ++i) {
            if (seen.insert(ranked[i].first.node).second) {
                selected.push_back(ranked[i].first.node);
            }
        }
        return selected;
    }

    for (const auto& [temporal, mass] : ranked) {
        if (selected.size() >= top_n) break;
        if (seen.insert(temporal.node).second) {
            selected.push_back(temporal.node);
        }
    }
    if (selected.size() > top_n) selected.resize(top_n);
    return selected;
}

bool ContextGraph::contains_endpoint(NodeId id) const {
    for (const Interaction& link : links) {
        if (link.source == id || link.destination == id) return true;
    }
    return false;
}

ContextGraph build_context_graph(const TemporalGraph& graph, std::span<const NodeId> nodes,
                                 Timestamp t_q) {
    if (nodes.empty()) {
        throw std::invalid_argument("build_context_graph: node list must be non-empty");
    }

    std::vector<std::size_t> link_indices;
    for (NodeId node : nodes) {
        for (const TemporalGraph::Incidence& entry : graph.incident_before(node, t_q)) {
            link_indices.push_back(entry.link_index);
        }
    }
    std::sort(link_indices.begin(), link_indices.end());
    link_indices.erase(std::unique(link_indices.begin(), link_indices.end()),
                       link_indices.end());

    ContextGraph context;
    context.selected_nodes.assign(nodes.begin(), nodes.end());
    context.query_source = nodes.front();
    context.query_time = t_q;
    context.links.reserve(link_indices.size());
    for (std::size_t index : link_indices) {
        context.links.push_back(graph.interactions()[index]);
    }
    return context;
}

}  // namespace tgcast
