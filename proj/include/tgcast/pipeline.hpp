#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgcast/context_select.hpp"
#include "tgcast/graph.hpp"
#include "tgcast/types.hpp"

namespace tgcast {

struct Query {
    NodeId source = 0;
    Timestamp time = 0;

    friend bool operator==(const Query&, const Query&) = default;
};

// A forecasting query with every destination observed at that instant.
struct GroupedQuery {
    Query query;
    std::vector<NodeId> ground_truth;  // sorted, duplicate-free, non-empty
};

// Groups interactions sharing (source, timestamp); output sorted by
// timestamp then source.
std::vector<GroupedQuery> group_queries(std::span<const Interaction> interactions);

struct QueryRecord {
    std::string id;  // "{dataset}:{time}:{source}"
    Query query;
    std::vector<NodeId> ground_truth;  // sorted
    ContextGraph context;
    std::string prompt;
    std::string dataset;
    std::string split;  // "train" or "eval"
};

struct SampleOptions {
    // Stop after this many accepted records / consider at most this many
    // candidate queries. Unset means unbounded; an explicit 0 means none.
    std::optional<std::size_t> target_accepted;
    std::optional<std::size_t> max_candidates;
};

struct SampleStats {
    std::size_t candidates = 0;
    std::size_t accepted = 0;
    std::size_t skipped_missing_answer = 0;
    std::size_t skipped_too_large = 0;
};

// Walks grouped queries from the latest timestamp backward, builds each
// query's context graph, and skips queries whose context misses a
// ground-truth endpoint or exceeds params.max_links links. Records keep
// accepted order (non-increasing query timestamps).
std::vector<QueryRecord> sample_reverse_chrono(std::span<const GroupedQuery> queries,
                                               const TemporalGraph& graph,
                                               const ContextParams& params,
                                               const SampleOptions& options,
                                               std::string_view dataset,
                                               std::string_view split,
                                               SampleStats* stats = nullptr);

// Chronological "(u, v, t)" tuples joined by ", ".
std::string verbalize_context(const ContextGraph& context);

// Renders the canonical forecast template with the context listing and query.
std::string build_prompt(std::string_view context_text, const Query& query);

// One JSON object per line, stable field order
// {id, dataset, split, source, time, ground_truth, prompt, num_context_links}.
// Re-validates both skip rules before writing; byte-identical across re-runs
// on identical input. Returns records written; throws on sink failure.
std::size_t export_records(std::span<const QueryRecord> records, std::ostream& out,
                           std::size_t max_links = 600);

// Record as read back from an exported JSONL file (context is not persisted;
// it is rebuilt deterministically from the graph when needed).
struct StoredRecord {
    std::string id;
    std::string dataset;
    std::string split;
    Query query;
    std::vector<NodeId> ground_truth;
    std::string prompt;
    std::size_t num_context_links = 0;
};

std::vector<StoredRecord> read_records(std::istream& in);

}  // namespace tgcast
