#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgcast/types.hpp"

namespace tgcast {

enum class RankMode {
    Mrr,   // wrong predictions score 1, tying with correct ones
    Pmrr   // wrong predictions score 1.1, ranking strictly above
};

struct RankOutcome {
    std::string query_id;  // filled by evaluate()
    NodeId target = 0;
    double optimistic = 0.0;
    double pessimistic = 0.0;
    double mean_rank = 0.0;
    double reciprocal = 0.0;
};

// Filtered rank of one ground-truth node over a universe of universe_size
// candidates, computed from set cardinalities without materializing scores.
// Conceptually: every node scores 0, predictions score 1 (or 1.1 when wrong
// in Pmrr mode), other correctly predicted nodes are reset to 0, and the
// target's rank is the mean of its optimistic and pessimistic rank among
// ties. gt and pred must be sorted ascending; target must be in gt;
// universe_size must cover gt and pred.
RankOutcome rank_of(NodeId target, std::span<const NodeId> gt,
                    std::span<const NodeId> pred, std::size_t universe_size,
                    RankMode mode);

// One evaluated query: ground truth and the parsed prediction set.
struct QueryPrediction {
    std::string id;
    std::vector<NodeId> ground_truth;  // sorted, non-empty
    std::vector<NodeId> predicted;     // sorted, possibly empty
};

// Mean reciprocal of filtered mean ranks over ALL ground-truth nodes of all
// queries, normalized by the total ground-truth count.
double mrr(std::span<const QueryPrediction> queries, std::size_t universe_size,
           std::vector<RankOutcome>* outcomes = nullptr);

double pmrr(std::span<const QueryPrediction> queries, std::size_t universe_size,
            std::vector<RankOutcome>* outcomes = nullptr);

struct DatasetBreakdown {
    std::string dataset;
    double mrr = 0.0;
    double pmrr = 0.0;
    std::size_t query_count = 0;
    std::size_t gt_link_count = 0;
    std::size_t missing_responses = 0;
    std::size_t universe_size = 0;  // 0 on the pooled row (universes differ)
};

struct EvalOutcome {
    RankOutcome mrr;
    RankOutcome pmrr;
};

struct EvalReport {
    std::vector<DatasetBreakdown> per_dataset;  // sorted by dataset tag
    DatasetBreakdown overall;                   // pooled over all queries
    std::vector<EvalOutcome> outcomes;          // per ground-truth node, audit trail
    std::vector<std::string> missing_ids;       // records evaluated as empty predictions
};

struct EvalRecord {
    std::string id;
    std::string dataset;
    std::vector<NodeId> ground_truth;
};

// Parses each response through the reward module and scores both metrics per
// dataset plus a pooled overall row. Records without a response count as
// empty predictions and are flagged, never dropped. Throws when a dataset has
// no universe size.
EvalReport evaluate(std::span<const EvalRecord> records,
                    const std::unordered_map<std::string, std::string>& response_text_by_id,
                    const std::map<std::string, std::size_t>& universe_by_dataset);

// Aligned text table: one row per dataset plus Overall, columns MRR / pMRR.
std::string format_table(const EvalReport& report);

}  // namespace tgcast
