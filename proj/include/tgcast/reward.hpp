#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgcast/types.hpp"

namespace tgcast {

enum class ParseStatus {
    Clean,       // bracketed id list, e.g. "[8734, 8852, 9149]"
    Salvaged,    // integers recovered from free text
    Empty,       // no integers in the answer
    MissingTags  // no well-formed answer tags in the output
};

std::string_view to_string(ParseStatus status);

struct PredictionSet {
    std::vector<NodeId> nodes;  // sorted, duplicate-free
    ParseStatus status = ParseStatus::Empty;

    bool contains(NodeId id) const;
};

// Content of the LAST well-formed <tag>...</tag> pair; nullopt when no such
// pair exists. Traces often rehearse answers; the final block is the
// commitment.
std::optional<std::string> extract_tagged(std::string_view text, std::string_view tag);

// Collects all maximal unsigned-integer tokens, deduplicated. Status reports
// whether the text was a clean bracketed list, salvaged free text, or empty.
PredictionSet parse_prediction_set(std::string_view answer_text);

// extract_tagged(text, "answer") + parse; missing tags give an empty set
// with status MissingTags.
PredictionSet parse_response(std::string_view response_text);

// F1 between prediction and ground truth. Empty or tag-less predictions
// score 0. gt must be non-empty (throws std::invalid_argument).
double f1_reward(const PredictionSet& pred, std::span<const NodeId> gt);

// Group-relative z-scores: (r - mean) / population stddev, all zeros when
// the group is constant. Requires at least one reward.
std::vector<double> group_advantages(std::span<const double> rewards);

struct RewardedRollout {
    std::string id;
    std::size_t rollout = 0;
    double reward = 0.0;
    double advantage = 0.0;
};

// JSONL lines {id, rollout, reward, advantage} for downstream trainers.
std::string to_jsonl(const RewardedRollout& rollout);

}  // namespace tgcast
