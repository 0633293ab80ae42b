#include "tgcast/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace tgcast {

std::string_view to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::EdgeBankUnlimited: return "edgebank-unlimited";
        case BaselineKind::EdgeBankWindow: return "edgebank-window";
        case BaselineKind::Recency: return "recency";
    }
    return "unknown";
}

std::optional<BaselineKind> baseline_kind_from(std::string_view name) {
    if (name == "edgebank-unlimited") return BaselineKind::EdgeBankUnlimited;
    if (name == "edgebank-window") return BaselineKind::EdgeBankWindow;
    if (name == "recency") return BaselineKind::Recency;
    return std::nullopt;
}

void BaselineConfig::validate() const {
    if (kind == BaselineKind::EdgeBankWindow && window == 0) {
        throw std::invalid_argument("edgebank-window requires a positive --window");
    }
}

PredictionSet edgebank_predict(const TemporalGraph& graph, NodeId source, Timestamp t_q,
                               const BaselineConfig& config) {
    config.validate();
    Timestamp earliest = 0;
    if (config.kind == BaselineKind::EdgeBankWindow) {
        earliest = t_q >= config.window ? t_q - config.window : 0;
    }

    PredictionSet prediction;
    prediction.status = ParseStatus::Clean;
    for (const TemporalGraph::Incidence& entry : graph.incident_before(source, t_q)) {
        if (entry.time < earliest) continue;
        // Queries fix the source slot, so only source->destination matches count.
        const Interaction& link = graph.interactions()[entry.link_index];
        if (link.source != source) continue;
        prediction.nodes.push_back(link.destination);
    }
    std::sort(prediction.nodes.begin(), prediction.nodes.end());
    prediction.nodes.erase(std::unique(prediction.nodes.begin(), prediction.nodes.end()),
                           prediction.nodes.end());
    return prediction;
}

PredictionSet recency_predict(const TemporalGraph& graph, NodeId source, Timestamp t_q) {
    std::span<const TemporalGraph::Incidence> prefix = graph.incident_before(source, t_q);

    PredictionSet prediction;
    prediction.status = ParseStatus::Clean;
    bool found = false;
    Timestamp latest = 0;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
        const Interaction& link = graph.interactions()[it->link_index];
        if (link.source != source) continue;
        if (!found) {
            latest = link.timestamp;
            found = true;
        }
        if (link.timestamp < latest) break;  // prefix is time-ascending
        prediction.nodes.push_back(link.destination);
    }
    std::sort(prediction.nodes.begin(), prediction.nodes.end());
    prediction.nodes.erase(std::unique(prediction.nodes.begin(), prediction.nodes.end()),
                           prediction.nodes.end());
    return prediction;
}

PredictionSet baseline_predict(const TemporalGraph& graph, NodeId source, Timestamp t_q,
                               const BaselineConfig& config) {
    if (config.kind == BaselineKind::Recency) {
        return recency_predict(graph, source, t_q);
    }
    return edgebank_predict(graph, source, t_q, config);
}

}  // namespace tgcast
