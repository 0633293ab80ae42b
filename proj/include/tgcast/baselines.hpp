#pragma once

#include "tgcast/graph.hpp"
#include "tgcast/reward.hpp"
#include "tgcast/types.hpp"

namespace tgcast {

enum class BaselineKind {
    EdgeBankUnlimited,  // every destination previously reached from the source
    EdgeBankWindow,     // restricted to [t_q - window, t_q)
    Recency             // destinations of the source's latest prior interaction
};

std::string_view to_string(BaselineKind kind);
std::optional<BaselineKind> baseline_kind_from(std::string_view name);

struct BaselineConfig {
    BaselineKind kind = BaselineKind::EdgeBankUnlimited;
    Timestamp window = 0;  // required > 0 for EdgeBankWindow

    void validate() const;  // throws std::invalid_argument
};

// Directed recurrence heuristic: all v with (source, v, t') in the history,
// t' < t_q (window variant restricts t' to [t_q - window, t_q)).
PredictionSet edgebank_predict(const TemporalGraph& graph, NodeId source,
                               Timestamp t_q, const BaselineConfig& config);

// Destinations of the source's most recent interaction strictly before t_q;
// timestamp ties all included; empty history gives an empty set.
PredictionSet recency_predict(const TemporalGraph& graph, NodeId source,
                              Timestamp t_q);

PredictionSet baseline_predict(const TemporalGraph& graph, NodeId source,
                               Timestamp t_q, const BaselineConfig& config);

}  // namespace tgcast
