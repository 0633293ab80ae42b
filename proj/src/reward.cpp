#include "tgcast/reward.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace tgcast {

std::string_view to_string(ParseStatus status) {
    switch (status) {
        case ParseStatus::Clean: return "clean";
        case ParseStatus::Salvaged: return "salvaged";
        case ParseStatus::Empty: return "empty";
        case ParseStatus::MissingTags: return "missing-tags";
    }
    return "unknown";
}

bool PredictionSet::contains(NodeId id) const {
    return std::binary_search(nodes.begin(), nodes.end(), id);
}

std::optional<std::string> extract_tagged(std::string_view text, std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";

    // Last opening tag that still has a closing tag after it wins.
    std::optional<std::string> content;
    std::size_t search = 0;
    while (true) {
        std::size_t open_pos = text.find(open, search);
        if (open_pos == std::string_view::npos) break;
        std::size_t body = open_pos + open.size();
        std::size_t close_pos = text.find(close, body);
        if (close_pos == std::string_view::npos) break;
        content = std::string(text.substr(body, close_pos - body));
        search = open_pos + open.size();
    }
    return content;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<NodeId> collect_integers(std::string_view text) {
    std::vector<NodeId> ids;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_digit(text[i])) ++i;
        NodeId value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, value);
        if (ec == std::errc{} && ptr == text.data() + i) {
            ids.push_back(value);
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// "[8734, 8852, 9149]" with arbitrary whitespace.
bool is_bracketed_id_list(std::string_view text) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                                   text[i] == '\r')) {
            ++i;
        }
    };
    skip_ws();
    if (i >= text.size() || text[i] != '[') return false;
    ++i;
    bool expecting_value = true;
    bool saw_value = false;
    while (true) {
        skip_ws();
        if (i >= text.size()) return false;
        if (text[i] == ']') {
            if (expecting_value && saw_value) return false;  // trailing comma
            ++i;
            break;
        }
        if (expecting_value) {
            if (!is_digit(text[i])) return false;
            while (i < text.size() && is_digit(text[i])) ++i;
            expecting_value = false;
            saw_value = true;
        } else {
            if (text[i] != ',') return false;
            ++i;
            expecting_value = true;
        }
    }
    skip_ws();
    return i == text.size() && saw_value;
}

}  // namespace

PredictionSet parse_prediction_set(std::string_view answer_text) {
    PredictionSet result;
    result.nodes = collect_integers(answer_text);
    if (result.nodes.empty()) {
        result.status = ParseStatus::Empty;
    } else if (is_bracketed_id_list(answer_text)) {
        result.status = ParseStatus::Clean;
    } else {
        result.status = ParseStatus::Salvaged;
    }
    return result;
}

PredictionSet parse_response(std::string_view response_text) {
    std::optional<std::string> answer = extract_tagged(response_text, "answer");
    if (!answer.has_value()) {
        return {{}, ParseStatus::MissingTags};
    }
    return parse_prediction_set(*answer);
}

double f1_reward(const PredictionSet& pred, std::span<const NodeId> gt) {
    if (gt.empty()) {
        throw std::invalid_argument("f1_reward: ground truth must be non-empty");
    }
    if (pred.nodes.empty()) return 0.0;

    std::size_t hits = 0;
    for (NodeId node : gt) {
        if (pred.contains(node)) ++hits;
    }
    if (hits == 0) return 0.0;

    const double precision = static_cast<double>(hits) / static_cast<double>(pred.nodes.size());
    const double recall = static_cast<double>(hits) / static_cast<double>(gt.size());
    return 2.0 * precision * recall / (precision + recall);
}

std::vector<double> group_advantages(std::span<const double> rewards) {
    if (rewards.empty()) {
        throw std::invalid_argument("group_advantages: need at least one rollout");
    }
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(rewards.size());

    double variance = 0.0;
    for (double r : rewards) variance += (r - mean) * (r - mean);
    variance /= static_cast<double>(rewards.size());
    const double stddev = std::sqrt(variance);

    std::vector<double> advantages(rewards.size(), 0.0);
    if (stddev > 0.0) {
        for (std::size_t i = 0; i < rewards.size(); ++i) {
            advantages[i] = (rewards[i] - mean) / stddev;
        }
    }
    return advantages;
}

std::string to_jsonl(const RewardedRollout& rollout) {
    nlohmann::ordered_json line;
    line["id"] = rollout.id;
    line["rollout"] = rollout.rollout;
    line["reward"] = rollout.reward;
    line["advantage"] = rollout.advantage;
    return line.dump();
}

}  // namespace tgcast
