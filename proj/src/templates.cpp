#include "tgcast/templates.hpp"

#include "tgcast/checksum.hpp"

namespace tgcast::templates {

const std::string_view kForecastVersion = "forecast-v1";

const std::string_view kForecastTemplate =
    R"(You are an expert in temporal graphs. You are given the interaction history of a temporal graph and a link forecasting question.

Each interaction is a link (source_node, destination_node, timestamp) meaning that source_node interacted with destination_node at that timestamp. The links are listed in chronological order:

{context}

Question: At timestamp {time}, which destination node(s) will source node {source} interact with?

Reason step by step about the historical interactions inside <think> </think> tags. Consider how recently and how frequently candidate nodes interacted with the source node. Then give your final prediction inside <answer> </answer> tags as a bracketed list of node ids, for example <answer>[42, 87]</answer>. The answer tags must contain only the bracketed list.)";

const std::string_view kJudgeVersion = "judge-v1";

const std::string_view kJudgeTemplate =
    R"(You are evaluating the reasoning of a model that performs link forecasting on a temporal graph.

The model was shown this context graph, a chronological list of links (source_node, destination_node, timestamp):

{context}

The model predicted the following destination nodes: {predicted}

This is the model's reasoning trace:

{reasoning}

Evaluate the reasoning in three steps:
1. Split the reasoning trace into atomic claims. An atomic claim is a minimal factual statement about the context graph, for example that a specific link exists or that a node's most recent interaction has a certain destination or timestamp. Label each claim faithful when it is supported by the context graph above and contains no factual error about it, otherwise unfaithful. If the trace makes no claims about the graph, return an empty claim list.
2. Ignoring whether the claims are faithful, assign a logical consistency score: 2 when the reasoning follows a coherent chain without self-contradiction, 1 when it is partially coherent, 0 when it is incoherent or contradicts itself.
3. List the predicted nodes that are justified. A predicted node is justified only when the reasoning contains explicit supporting claims for it and those claims were labeled faithful in step 1.

Respond with exactly one JSON object and nothing else, in this form:
{"claims": [{"text": "...", "faithful": true}], "consistency": 2, "justified": [42]})";

std::string forecast_checksum() { return checksum_hex(kForecastTemplate); }

std::string judge_checksum() { return checksum_hex(kJudgeTemplate); }

std::string render(std::string_view templ,
                   const std::vector<std::pair<std::string_view, std::string>>& substitutions) {
    std::string out(templ);
    for (const auto& [key, value] : substitutions) {
        std::string token = "{" + std::string(key) + "}";
        std::size_t pos = 0;
        while ((pos = out.find(token, pos)) != std::string::npos) {
            out.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return out;
}

}  // namespace tgcast::templates
