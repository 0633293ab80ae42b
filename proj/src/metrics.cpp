#include "tgcast/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "tgcast/reward.hpp"

namespace tgcast {

RankOutcome rank_of(NodeId target, std::span<const NodeId> gt, std::span<const NodeId> pred,
                    std::size_t universe_size, RankMode mode) {
    if (!std::binary_search(gt.begin(), gt.end(), target)) {
        throw std::invalid_argument("rank_of: target is not a ground-truth node");
    }

    std::size_t correct = 0;
    for (NodeId node : pred) {
        if (std::binary_search(gt.begin(), gt.end(), node)) ++correct;
    }
    const std::size_t wrong = pred.size() - correct;
    const bool predicted = std::binary_search(pred.begin(), pred.end(), target);

    // After filtering, the only non-zero scores left are the target (1 when
    // predicted) and the wrong predictions (1, or 1.1 in Pmrr mode), so both
    // rank bounds follow from the wrong-prediction count alone.
    RankOutcome outcome;
    outcome.target = target;
    if (predicted) {
        outcome.optimistic =
            mode == RankMode::Pmrr ? static_cast<double>(1 + wrong) : 1.0;
        outcome.pessimistic = static_cast<double>(1 + wrong);
    } else {
        outcome.optimistic = static_cast<double>(1 + wrong);
        outcome.pessimistic = static_cast<double>(universe_size);
    }
    outcome.mean_rank = (outcome.optimistic + outcome.pessimistic) / 2.0;
    outcome.reciprocal = 1.0 / outcome.mean_rank;
    return outcome;
}

namespace {

double reciprocal_rank_sum(std::span<const QueryPrediction> queries, std::size_t universe_size,
                           RankMode mode, std::size_t& gt_total,
                           std::vector<RankOutcome>* outcomes) {
    double sum = 0.0;
    for (const QueryPrediction& query : queries) {
        for (NodeId target : query.ground_truth) {
            RankOutcome outcome =
                rank_of(target, query.ground_truth, query.predicted, universe_size, mode);
            outcome.query_id = query.id;
            sum += outcome.reciprocal;
            ++gt_total;
            if (outcomes != nullptr) outcomes->push_back(std::move(outcome));
        }
    }
    return sum;
}

}  // namespace

double mrr(std::span<const QueryPrediction> queries, std::size_t universe_size,
           std::vector<RankOutcome>* outcomes) {
    std::size_t gt_total = 0;
    double sum = reciprocal_rank_sum(queries, universe_size, RankMode::Mrr, gt_total, outcomes);
    return gt_total == 0 ? 0.0 : sum / static_cast<double>(gt_total);
}

double pmrr(std::span<const QueryPrediction> queries, std::size_t universe_size,
            std::vector<RankOutcome>* outcomes) {
    std::size_t gt_total = 0;
    double sum = reciprocal_rank_sum(queries, universe_size, RankMode::Pmrr, gt_total, outcomes);
    return gt_total == 0 ? 0.0 : sum / static_cast<double>(gt_total);
}

EvalReport evaluate(std::span<const EvalRecord> records,
                    const std::unordered_map<std::string, std::string>& response_text_by_id,
                    const std::map<std::string, std::size_t>& universe_by_dataset) {
    struct DatasetPool {
        std::vector<QueryPrediction> queries;
        std::size_t missing = 0;
    };
    std::map<std::string, DatasetPool> pools;

    EvalReport report;
    for (const EvalRecord& record : records) {
        QueryPrediction scored;
        scored.id = record.id;
        scored.ground_truth = record.ground_truth;
        std::sort(scored.ground_truth.begin(), scored.ground_truth.end());

        DatasetPool& pool = pools[record.dataset];
        auto response = response_text_by_id.find(record.id);
        if (response == response_text_by_id.end()) {
            // Unavailable responses count as empty predictions so model
            // availability cannot inflate scores.
            ++pool.missing;
            report.missing_ids.push_back(record.id);
        } else {
            scored.predicted = parse_response(response->second).nodes;
        }
        pool.queries.push_back(std::move(scored));
    }

    double overall_mrr_sum = 0.0;
    double overall_pmrr_sum = 0.0;
    std::size_t overall_gt = 0;

    for (auto& [dataset, pool] : pools) {
        auto universe = universe_by_dataset.find(dataset);
        if (universe == universe_by_dataset.end()) {
            throw std::runtime_error("evaluate: no universe size for dataset '" + dataset + "'");
        }
        const std::size_t universe_size = universe->second;

        DatasetBreakdown row;
        row.dataset = dataset;
        row.query_count = pool.queries.size();
        row.missing_responses = pool.missing;
        row.universe_size = universe_size;

        std::size_t gt_count = 0;
        std::vector<RankOutcome> mrr_outcomes;
        std::vector<RankOutcome> pmrr_outcomes;
        double mrr_sum = reciprocal_rank_sum(pool.queries, universe_size, RankMode::Mrr,
                                             gt_count, &mrr_outcomes);
        std::size_t gt_count_again = 0;
        double pmrr_sum = reciprocal_rank_sum(pool.queries, universe_size, RankMode::Pmrr,
                                              gt_count_again, &pmrr_outcomes);

        row.gt_link_count = gt_count;
        row.mrr = gt_count == 0 ? 0.0 : mrr_sum / static_cast<double>(gt_count);
        row.pmrr = gt_count == 0 ? 0.0 : pmrr_sum / static_cast<double>(gt_count);
        report.per_dataset.push_back(row);

        for (std::size_t i = 0; i < mrr_outcomes.size(); ++i) {
            report.outcomes.push_back({std::move(mrr_outcomes[i]), std::move(pmrr_outcomes[i])});
        }

        overall_mrr_sum += mrr_sum;
        overall_pmrr_sum += pmrr_sum;
        overall_gt += gt_count;

        report.overall.query_count += row.query_count;
        report.overall.missing_responses += row.missing_responses;
    }

    report.overall.dataset = "overall";
    report.overall.gt_link_count = overall_gt;
    report.overall.mrr = overall_gt == 0 ? 0.0 : overall_mrr_sum / static_cast<double>(overall_gt);
    report.overall.pmrr =
        overall_gt == 0 ? 0.0 : overall_pmrr_sum / static_cast<double>(overall_gt);
    return report;
}

std::string format_table(const EvalReport& report) {
    std::size_t name_width = 7;  // "Overall"
    for (const DatasetBreakdown& row : report.per_dataset) {
        name_width = std::max(name_width, row.dataset.size());
    }

    auto format_row = [&](const std::string& name, const DatasetBreakdown& row) {
        char buffer[160];
        std::snprintf(buffer, sizeof(buffer), "%-*s  %8.4f  %8.4f  %8zu  %8zu\n",
                      static_cast<int>(name_width), name.c_str(), row.mrr, row.pmrr,
                      row.query_count, row.gt_link_count);
        return std::string(buffer);
    };

    char header[160];
    std::snprintf(header, sizeof(header), "%-*s  %8s  %8s  %8s  %8s\n",
                  static_cast<int>(name_width), "Dataset", "MRR", "pMRR", "Queries", "GT");
    std::string table(header);
    for (const DatasetBreakdown& row : report.per_dataset) {
        table += format_row(row.dataset, row);
    }
    table += format_row("Overall", report.overall);
    return table;
}

}  // namespace tgcast
