#include "tgcast/judge.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "tgcast/templates.hpp"

namespace tgcast {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string build_judge_prompt(std::string_view context_text, std::string_view reasoning_trace,
                               std::span<const NodeId> predicted) {
    std::string predicted_text = "[";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (i > 0) predicted_text += ", ";
        predicted_text += std::to_string(predicted[i]);
    }
    predicted_text += "]";

    return templates::render(templates::kJudgeTemplate,
                             {{"context", std::string(context_text)},
                              {"predicted", predicted_text},
                              {"reasoning", std::string(reasoning_trace)}});
}

namespace {

// Judges occasionally wrap the object in prose or a code fence; fall back to
// the outermost brace span before giving up.
std::optional<json> parse_json_object(std::string_view text) {
    auto try_parse = [](std::string_view candidate) -> std::optional<json> {
        json parsed = json::parse(candidate, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
        return parsed;
    };
    if (auto direct = try_parse(text)) return direct;
    std::size_t open = text.find('{');
    std::size_t close = text.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close <= open) {
        return std::nullopt;
    }
    return try_parse(text.substr(open, close - open + 1));
}

}  // namespace

std::optional<JudgeVerdict> parse_verdict(std::string_view judge_response,
                                          std::span<const NodeId> predicted) {
    std::optional<json> parsed = parse_json_object(judge_response);
    if (!parsed.has_value()) return std::nullopt;
    const json& body = *parsed;

    if (!body.contains("claims") || !body["claims"].is_array()) return std::nullopt;
    if (!body.contains("consistency") || !body["consistency"].is_number_integer()) {
        return std::nullopt;
    }
    if (!body.contains("justified") || !body["justified"].is_array()) return std::nullopt;

    JudgeVerdict verdict;
    for (const json& claim : body["claims"]) {
        if (!claim.is_object() || !claim.contains("text") || !claim["text"].is_string() ||
            !claim.contains("faithful") || !claim["faithful"].is_boolean()) {
            return std::nullopt;
        }
        verdict.claims.push_back({claim["text"].get<std::string>(),
                                  claim["faithful"].get<bool>()});
    }

    const int consistency = body["consistency"].get<int>();
    if (consistency < 0 || consistency > 2) return std::nullopt;
    verdict.consistency_raw = consistency;

    for (const json& node : body["justified"]) {
        if (!node.is_number_unsigned() && !node.is_number_integer()) return std::nullopt;
        if (node.is_number_integer() && node.get<std::int64_t>() < 0) return std::nullopt;
        NodeId id = node.get<NodeId>();
        if (std::find(predicted.begin(), predicted.end(), id) != predicted.end()) {
            verdict.justified.push_back(id);
        } else {
            ++verdict.discarded_justified;
        }
    }
    std::sort(verdict.justified.begin(), verdict.justified.end());
    verdict.justified.erase(std::unique(verdict.justified.begin(), verdict.justified.end()),
                            verdict.justified.end());

    std::size_t faithful = 0;
    for (const JudgeClaim& claim : verdict.claims) {
        if (claim.faithful) ++faithful;
    }
    verdict.delta_f = verdict.claims.empty()
                          ? 0.0
                          : static_cast<double>(faithful) /
                                static_cast<double>(verdict.claims.size());
    verdict.delta_lc = static_cast<double>(verdict.consistency_raw) / 2.0;
    verdict.delta_a = predicted.empty()
                          ? 0.0
                          : static_cast<double>(verdict.justified.size()) /
                                static_cast<double>(predicted.size());
    return verdict;
}

JudgeVerdict make_failed_verdict(std::string id) {
    JudgeVerdict verdict;
    verdict.id = std::move(id);
    verdict.parse_failed = true;
    return verdict;
}

AggregateJudgeReport aggregate(std::span<const JudgeVerdict> verdicts) {
    AggregateJudgeReport report;
    for (const JudgeVerdict& verdict : verdicts) {
        if (verdict.parse_failed) {
            ++report.parse_failures;
            continue;
        }
        report.mean_delta_f += verdict.delta_f;
        report.mean_delta_lc += verdict.delta_lc;
        report.mean_delta_a += verdict.delta_a;
        ++report.example_count;
    }
    if (report.example_count == 0) {
        throw std::runtime_error("aggregate: no parseable verdicts to average");
    }
    const double count = static_cast<double>(report.example_count);
    report.mean_delta_f /= count;
    report.mean_delta_lc /= count;
    report.mean_delta_a /= count;
    return report;
}

std::string to_jsonl(const JudgeVerdict& verdict) {
    ordered_json line;
    line["id"] = verdict.id;
    ordered_json claims = ordered_json::array();
    for (const JudgeClaim& claim : verdict.claims) {
        ordered_json entry;
        entry["text"] = claim.text;
        entry["faithful"] = claim.faithful;
        claims.push_back(std::move(entry));
    }
    line["claims"] = std::move(claims);
    line["consistency"] = verdict.consistency_raw;
    line["justified"] = verdict.justified;
    line["delta_f"] = verdict.delta_f;
    line["delta_lc"] = verdict.delta_lc;
    line["delta_a"] = verdict.delta_a;
    line["parse_failed"] = verdict.parse_failed;
    return line.dump();
}

JudgeVerdict verdict_from_jsonl(std::string_view line) {
    json parsed = json::parse(line);
    JudgeVerdict verdict;
    verdict.id = parsed.at("id").get<std::string>();
    for (const json& claim : parsed.at("claims")) {
        verdict.claims.push_back({claim.at("text").get<std::string>(),
                                  claim.at("faithful").get<bool>()});
    }
    verdict.consistency_raw = parsed.at("consistency").get<int>();
    verdict.justified = parsed.at("justified").get<std::vector<NodeId>>();
    verdict.delta_f = parsed.at("delta_f").get<double>();
    verdict.delta_lc = parsed.at("delta_lc").get<double>();
    verdict.delta_a = parsed.at("delta_a").get<double>();
    verdict.parse_failed = parsed.at("parse_failed").get<bool>();
    return verdict;
}

}  // namespace tgcast
