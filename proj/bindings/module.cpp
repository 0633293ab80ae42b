#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "tgcast/baselines.hpp"
#include "tgcast/context_select.hpp"
#include "tgcast/graph.hpp"
#include "tgcast/judge.hpp"
#include "tgcast/metrics.hpp"
#include "tgcast/pipeline.hpp"
#include "tgcast/reward.hpp"
#include "tgcast/templates.hpp"

namespace py = pybind11;
using namespace tgcast;

namespace {

std::vector<Interaction> to_interactions(
    const std::vector<std::tuple<NodeId, NodeId, Timestamp>>& rows) {
    std::vector<Interaction> links;
    links.reserve(rows.size());
    for (const auto& [u, v, t] : rows) links.push_back({u, v, t});
    return links;
}

std::vector<std::tuple<NodeId, NodeId, Timestamp>> from_interactions(
    std::span<const Interaction> links) {
    std::vector<std::tuple<NodeId, NodeId, Timestamp>> rows;
    rows.reserve(links.size());
    for (const Interaction& link : links) {
        rows.emplace_back(link.source, link.destination, link.timestamp);
    }
    return rows;
}

std::vector<TemporalNode> to_temporal_nodes(
    const std::vector<std::pair<NodeId, Timestamp>>& pairs) {
    std::vector<TemporalNode> nodes;
    nodes.reserve(pairs.size());
    for (const auto& [node, time] : pairs) nodes.push_back({node, time});
    return nodes;
}

ContextParams make_params(double alpha, double beta, std::size_t top_n, std::size_t max_steps,
                          std::size_t max_links, const std::string& top_unit = "temporal") {
    ContextParams params;
    params.alpha = alpha;
    params.beta = beta;
    params.top_n = top_n;
    params.max_steps = max_steps;
    params.max_links = max_links;
    if (top_unit == "base") {
        params.top_unit = TopUnit::BaseNodes;
    } else if (top_unit == "temporal") {
        params.top_unit = TopUnit::TemporalNodes;
    } else {
        throw std::invalid_argument("top_unit must be 'temporal' or 'base'");
    }
    params.validate();
    return params;
}

}  // namespace

PYBIND11_MODULE(tgcast, m) {
    m.doc() = "link-forecasting harness for temporal graphs";

    py::class_<TemporalGraph>(m, "TemporalGraph")
        .def(py::init([](const std::vector<std::tuple<NodeId, NodeId, Timestamp>>& rows,
                         const std::string& name, const std::vector<NodeId>& extra_universe) {
                 return TemporalGraph(to_interactions(rows), name, extra_universe);
             }),
             py::arg("interactions"), py::arg("name") = "", py::arg("extra_universe") = std::vector<NodeId>{})
        .def_property_readonly("name", &TemporalGraph::name)
        .def("__len__", &TemporalGraph::size)
        .def("interactions",
             [](const TemporalGraph& g) { return from_interactions(g.interactions()); })
        .def("node_universe", &TemporalGraph::node_universe)
        .def("history_before",
             [](const TemporalGraph& g, Timestamp t) {
                 return from_interactions(g.history_before(t));
             },
             py::arg("t"))
        .def("temporal_neighborhood",
             [](const TemporalGraph& g, NodeId e, Timestamp t) {
                 std::vector<std::pair<NodeId, Timestamp>> out;
                 for (const TemporalNode& nb : g.temporal_neighborhood(e, t)) {
                     out.emplace_back(nb.node, nb.time);
                 }
                 return out;
             },
             py::arg("node"), py::arg("t"));

    m.def("load_edge_list",
          [](const std::string& path, const std::string& source_col,
             const std::string& dest_col, const std::string& time_col,
             const std::string& name) {
              std::ifstream input(path, std::ios::binary);
              if (!input) throw std::runtime_error("cannot open " + path);
              return load_edge_list(input, {source_col, dest_col, time_col},
                                    name.empty() ? path : name);
          },
          py::arg("path"), py::arg("source_col") = "u", py::arg("dest_col") = "i",
          py::arg("time_col") = "ts", py::arg("name") = "");

    m.def("transition_probs",
          [](const std::vector<std::pair<NodeId, Timestamp>>& neighborhood, double beta) {
              std::vector<std::tuple<NodeId, Timestamp, double>> out;
              for (const TransitionProb& p :
                   transition_probs(to_temporal_nodes(neighborhood), beta)) {
                  out.emplace_back(p.node.node, p.node.time, p.prob);
              }
              return out;
          },
          py::arg("neighborhood"), py::arg("beta"));

    m.def("termination_distribution",
          [](const TemporalGraph& graph, NodeId source, Timestamp time, double alpha,
             double beta, std::size_t top_n, std::size_t max_steps, std::size_t max_links) {
              TerminationDistribution dist = termination_distribution(
                  graph, {source, time},
                  make_params(alpha, beta, top_n, max_steps, max_links));
              py::dict out;
              for (const auto& [node, mass] : dist.mass) {
                  out[py::make_tuple(node.node, node.time)] = mass;
              }
              return out;
          },
          py::arg("graph"), py::arg("source"), py::arg("time"), py::arg("alpha") = 0.2,
          py::arg("beta") = 0.8, py::arg("top_n") = 100, py::arg("max_steps") = 2,
          py::arg("max_links") = 600);

    m.def("select_context",
          [](const TemporalGraph& graph, NodeId source, Timestamp time, double alpha,
             double beta, std::size_t top_n, std::size_t max_steps, std::size_t max_links,
             const std::string& top_unit) {
              ContextParams params =
                  make_params(alpha, beta, top_n, max_steps, max_links, top_unit);
              TerminationDistribution dist =
                  termination_distribution(graph, {source, time}, params);
              auto nodes = select_context_nodes(dist, params.top_n, params.top_unit);
              ContextGraph context = build_context_graph(graph, nodes, time);
              return py::make_tuple(nodes, from_interactions(context.links));
          },
          py::arg("graph"), py::arg("source"), py::arg("time"), py::arg("alpha") = 0.2,
          py::arg("beta") = 0.8, py::arg("top_n") = 100, py::arg("max_steps") = 2,
          py::arg("max_links") = 600, py::arg("top_unit") = "temporal",
          "Returns (selected_nodes, context_links) for a query.");

    m.def("group_queries",
          [](const std::vector<std::tuple<NodeId, NodeId, Timestamp>>& rows) {
              std::vector<std::tuple<NodeId, Timestamp, std::vector<NodeId>>> out;
              for (const GroupedQuery& q : group_queries(to_interactions(rows))) {
                  out.emplace_back(q.query.source, q.query.time, q.ground_truth);
              }
              return out;
          },
          py::arg("interactions"));

    m.def("verbalize_context",
          [](const std::vector<std::tuple<NodeId, NodeId, Timestamp>>& rows) {
              ContextGraph context;
              context.links = to_interactions(rows);
              return verbalize_context(context);
          },
          py::arg("links"));

    m.def("build_prompt",
          [](const std::string& context_text, NodeId source, Timestamp time) {
              return build_prompt(context_text, {source, time});
          },
          py::arg("context_text"), py::arg("source"), py::arg("time"));

    m.def("extract_tagged",
          [](const std::string& text, const std::string& tag) -> py::object {
              auto inner = extract_tagged(text, tag);
              if (!inner.has_value()) return py::none();
              return py::cast(*inner);
          },
          py::arg("text"), py::arg("tag"));

    m.def("parse_prediction_set",
          [](const std::string& answer_text) {
              PredictionSet set = parse_prediction_set(answer_text);
              return py::make_tuple(set.nodes, std::string(to_string(set.status)));
          },
          py::arg("answer_text"), "Returns (nodes, status).");

    m.def("parse_response",
          [](const std::string& response_text) {
              PredictionSet set = parse_response(response_text);
              return py::make_tuple(set.nodes, std::string(to_string(set.status)));
          },
          py::arg("response_text"));

    m.def("f1_reward",
          [](const std::vector<NodeId>& pred, const std::vector<NodeId>& gt) {
              PredictionSet set;
              set.nodes = pred;
              std::sort(set.nodes.begin(), set.nodes.end());
              set.nodes.erase(std::unique(set.nodes.begin(), set.nodes.end()),
                              set.nodes.end());
              set.status = set.nodes.empty() ? ParseStatus::Empty : ParseStatus::Clean;
              return f1_reward(set, gt);
          },
          py::arg("pred"), py::arg("gt"));

    m.def("group_advantages",
          [](const std::vector<double>& rewards) { return group_advantages(rewards); },
          py::arg("rewards"));

    m.def("rank_of",
          [](NodeId target, std::vector<NodeId> gt, std::vector<NodeId> pred,
             std::size_t universe_size, const std::string& mode) {
              std::sort(gt.begin(), gt.end());
              std::sort(pred.begin(), pred.end());
              RankOutcome out = rank_of(target, gt, pred, universe_size,
                                        mode == "pmrr" ? RankMode::Pmrr : RankMode::Mrr);
              py::dict d;
              d["optimistic"] = out.optimistic;
              d["pessimistic"] = out.pessimistic;
              d["mean"] = out.mean_rank;
              d["reciprocal"] = out.reciprocal;
              return d;
          },
          py::arg("target"), py::arg("gt"), py::arg("pred"), py::arg("universe_size"),
          py::arg("mode") = "mrr");

    auto metric = [](const std::vector<std::tuple<std::vector<NodeId>, std::vector<NodeId>>>&
                         instances,
                     std::size_t universe_size, RankMode mode) {
        std::vector<QueryPrediction> queries;
        std::size_t index = 0;
        for (const auto& [gt, pred] : instances) {
            QueryPrediction q;
            q.id = std::to_string(index++);
            q.ground_truth = gt;
            q.predicted = pred;
            std::sort(q.ground_truth.begin(), q.ground_truth.end());
            std::sort(q.predicted.begin(), q.predicted.end());
            queries.push_back(std::move(q));
        }
        return mode == RankMode::Mrr ? mrr(queries, universe_size)
                                     : pmrr(queries, universe_size);
    };
    m.def("mrr",
          [metric](const std::vector<std::tuple<std::vector<NodeId>, std::vector<NodeId>>>&
                       instances,
                   std::size_t universe_size) {
              return metric(instances, universe_size, RankMode::Mrr);
          },
          py::arg("instances"), py::arg("universe_size"),
          "instances: list of (ground_truth, predicted) node-id lists.");
    m.def("pmrr",
          [metric](const std::vector<std::tuple<std::vector<NodeId>, std::vector<NodeId>>>&
                       instances,
                   std::size_t universe_size) {
              return metric(instances, universe_size, RankMode::Pmrr);
          },
          py::arg("instances"), py::arg("universe_size"));

    m.def("build_judge_prompt",
          [](const std::string& context_text, const std::string& reasoning,
             const std::vector<NodeId>& predicted) {
              return build_judge_prompt(context_text, reasoning, predicted);
          },
          py::arg("context_text"), py::arg("reasoning"), py::arg("predicted"));

    m.def("parse_verdict",
          [](const std::string& judge_response, const std::vector<NodeId>& predicted)
              -> py::object {
              auto verdict = parse_verdict(judge_response, predicted);
              if (!verdict.has_value()) return py::none();
              py::dict d;
              py::list claims;
              for (const JudgeClaim& claim : verdict->claims) {
                  claims.append(py::make_tuple(claim.text, claim.faithful));
              }
              d["claims"] = claims;
              d["consistency"] = verdict->consistency_raw;
              d["justified"] = verdict->justified;
              d["delta_f"] = verdict->delta_f;
              d["delta_lc"] = verdict->delta_lc;
              d["delta_a"] = verdict->delta_a;
              return d;
          },
          py::arg("judge_response"), py::arg("predicted"));

    m.def("edgebank_predict",
          [](const TemporalGraph& graph, NodeId source, Timestamp t_q, const std::string& kind,
             Timestamp window) {
              auto parsed = baseline_kind_from(kind);
              if (!parsed.has_value()) throw std::invalid_argument("unknown kind: " + kind);
              BaselineConfig config{*parsed, window};
              return baseline_predict(graph, source, t_q, config).nodes;
          },
          py::arg("graph"), py::arg("source"), py::arg("t_q"),
          py::arg("kind") = "edgebank-unlimited", py::arg("window") = 0);

    m.def("recency_predict",
          [](const TemporalGraph& graph, NodeId source, Timestamp t_q) {
              return recency_predict(graph, source, t_q).nodes;
          },
          py::arg("graph"), py::arg("source"), py::arg("t_q"));

    m.attr("FORECAST_TEMPLATE") = std::string(templates::kForecastTemplate);
    m.attr("FORECAST_TEMPLATE_CHECKSUM") = templates::forecast_checksum();
    m.attr("JUDGE_TEMPLATE") = std::string(templates::kJudgeTemplate);
    m.attr("JUDGE_TEMPLATE_CHECKSUM") = templates::judge_checksum();
    m.attr("__version__") = "0.1.0";
}
