#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgcast/types.hpp"

namespace tgcast {

struct JudgeClaim {
    std::string text;
    bool faithful = false;
};

// Scores one reasoning trace: faithfulness of atomic claims, logical
// consistency, and answer-explanation alignment.
struct JudgeVerdict {
    std::string id;
    std::vector<JudgeClaim> claims;
    int consistency_raw = 0;          // in {0, 1, 2}
    std::vector<NodeId> justified;    // subset of the predicted set, sorted
    double delta_f = 0.0;             // faithful claims / all claims, 0 when no claims
    double delta_lc = 0.0;            // consistency_raw / 2
    double delta_a = 0.0;             // |justified| / |predicted|, 0 when nothing predicted
    bool parse_failed = false;
    std::size_t discarded_justified = 0;  // judge named nodes outside the prediction
};

// Renders the canonical judge template: split the trace into atomic claims
// labeled faithful/unfaithful against the context links, score consistency
// 0/1/2 ignoring faithfulness, list justified predicted nodes, respond as a
// single JSON object.
std::string build_judge_prompt(std::string_view context_text,
                               std::string_view reasoning_trace,
                               std::span<const NodeId> predicted);

// Parses the judge's JSON (tolerating surrounding text / code fences) and
// computes the three deltas. Justified nodes outside the predicted set are
// discarded and counted. nullopt when the JSON is unusable; the caller may
// reprompt once before recording a failure.
std::optional<JudgeVerdict> parse_verdict(std::string_view judge_response,
                                          std::span<const NodeId> predicted);

JudgeVerdict make_failed_verdict(std::string id);

struct AggregateJudgeReport {
    double mean_delta_f = 0.0;
    double mean_delta_lc = 0.0;
    double mean_delta_a = 0.0;
    std::size_t example_count = 0;   // verdicts included in the means
    std::size_t parse_failures = 0;  // excluded and reported
};

// Arithmetic means over non-failed verdicts; order-independent. Throws
// std::runtime_error when every verdict failed.
AggregateJudgeReport aggregate(std::span<const JudgeVerdict> verdicts);

// Verdict JSONL line {id, claims, consistency, justified, delta_f, delta_lc,
// delta_a, parse_failed}.
std::string to_jsonl(const JudgeVerdict& verdict);
JudgeVerdict verdict_from_jsonl(std::string_view line);

}  // namespace tgcast
