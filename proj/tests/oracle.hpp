#pragma once

// Test-only oracles, kept independent of the library's arithmetic paths.

#include <cstddef>
#include <span>
#include <vector>

#include "tgcast/metrics.hpp"
#include "tgcast/types.hpp"

namespace tgcast::testing {

// Brute-force filtered rank: materializes the full score vector over the
// universe {0..universe_size-1}, applies the filtering rule, and counts ranks
// directly. Deliberately mirrors the metric definition rather than the
// counting shortcut used by rank_of.
inline RankOutcome oracle_rank_of(NodeId target, std::span<const NodeId> gt,
                                  std::span<const NodeId> pred, std::size_t universe_size,
                                  RankMode mode) {
    auto contains = [](std::span<const NodeId> set, NodeId id) {
        for (NodeId n : set) {
            if (n == id) return true;
        }
        return false;
    };

    std::vector<double> scores(universe_size, 0.0);
    for (NodeId node : pred) {
        scores[node] = contains(gt, node) ? 1.0 : (mode == RankMode::Pmrr ? 1.1 : 1.0);
    }
    // Other correctly predicted nodes are scored out before ranking the target.
    for (NodeId node : pred) {
        if (node != target && contains(gt, node)) scores[node] = 0.0;
    }

    const double target_score = scores[target];
    std::size_t above = 0;
    std::size_t at_least = 0;
    for (std::size_t node = 0; node < universe_size; ++node) {
        if (scores[node] > target_score) ++above;
        if (scores[node] >= target_score) ++at_least;
    }

    RankOutcome outcome;
    outcome.target = target;
    outcome.optimistic = static_cast<double>(1 + above);
    outcome.pessimistic = static_cast<double>(at_least);
    outcome.mean_rank = (outcome.optimistic + outcome.pessimistic) / 2.0;
    outcome.reciprocal = 1.0 / outcome.mean_rank;
    return outcome;
}

// Pooled metric over all ground-truth nodes, straight from the definition.
inline double oracle_metric(std::span<const QueryPrediction> queries,
                            std::size_t universe_size, RankMode mode) {
    double sum = 0.0;
    std::size_t gt_total = 0;
    for (const QueryPrediction& query : queries) {
        for (NodeId target : query.ground_truth) {
            sum += oracle_rank_of(target, query.ground_truth, query.predicted, universe_size,
                                  mode)
                       .reciprocal;
            ++gt_total;
        }
    }
    return gt_total == 0 ? 0.0 : sum / static_cast<double>(gt_total);
}

}  // namespace tgcast::testing
