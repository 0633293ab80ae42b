#include "tgcast/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "tgcast/templates.hpp"

namespace tgcast {

using ordered_json = nlohmann::ordered_json;

std::vector<GroupedQuery> group_queries(std::span<const Interaction> interactions) {
    std::vector<Interaction> sorted(interactions.begin(), interactions.end());
    std::sort(sorted.begin(), sorted.end(), [](const Interaction& a, const Interaction& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        if (a.source != b.source) return a.source < b.source;
        return a.destination < b.destination;
    });

    std::vector<GroupedQuery> grouped;
    for (const Interaction& link : sorted) {
        if (grouped.empty() || grouped.back().query.source != link.source ||
            grouped.back().query.time != link.timestamp) {
            grouped.push_back({{link.source, link.timestamp}, {}});
        }
        std::vector<NodeId>& truth = grouped.back().ground_truth;
        if (truth.empty() || truth.back() != link.destination) {
            truth.push_back(link.destination);
        }
    }
    return grouped;
}

namespace {

bool context_covers_ground_truth(const ContextGraph& context,
                                 std::span<const NodeId> ground_truth) {
    return std::all_of(ground_truth.begin(), ground_truth.end(),
                       [&](NodeId node) { return context.contains_endpoint(node); });
}

std::string record_id(std::string_view dataset, const Query& query) {
    return std::string(dataset) + ":" + std::to_string(query.time) + ":" +
           std::to_string(query.source);
}

}  // namespace

std::vector<QueryRecord> sample_reverse_chrono(std::span<const GroupedQuery> queries,
                                               const TemporalGraph& graph,
                                               const ContextParams& params,
                                               const SampleOptions& options,
                                               std::string_view dataset,
                                               std::string_view split, SampleStats* stats) {
    params.validate();
    SampleStats local;
    std::vector<QueryRecord> accepted;

    for (auto it = queries.rbegin(); it != queries.rend(); ++it) {
        if (options.target_accepted && accepted.size() >= *options.target_accepted) break;
        if (options.max_candidates && local.candidates >= *options.max_candidates) break;
        ++local.candidates;

        const GroupedQuery& candidate = *it;
        TerminationDistribution dist = termination_distribution(
            graph, {candidate.query.source, candidate.query.time}, params);
        std::vector<NodeId> nodes =
            select_context_nodes(dist, params.top_n, params.top_unit);
        ContextGraph context = build_context_graph(graph, nodes, candidate.query.time);

        if (!context_covers_ground_truth(context, candidate.ground_truth)) {
            ++local.skipped_missing_answer;
            continue;
        }
        if (context.links.size() > params.max_links) {
            ++local.skipped_too_large;
            continue;
        }

        QueryRecord record;
        record.id = record_id(dataset, candidate.query);
        record.query = candidate.query;
        record.ground_truth = candidate.ground_truth;
        record.prompt = build_prompt(verbalize_context(context), candidate.query);
        record.context = std::move(context);
        record.dataset = dataset;
        record.split = split;
        accepted.push_back(std::move(record));
        ++local.accepted;
    }

    if (stats != nullptr) *stats = local;
    return accepted;
}

std::string verbalize_context(const ContextGraph& context) {
    std::string out;
    for (std::size_t i = 0; i < context.links.size(); ++i) {
        const Interaction& link = context.links[i];
        if (i > 0) out += ", ";
        out += "(" + std::to_string(link.source) + ", " + std::to_string(link.destination) +
               ", " + std::to_string(link.timestamp) + ")";
    }
    return out;
}

std::string build_prompt(std::string_view context_text, const Query& query) {
    return templates::render(templates::kForecastTemplate,
                             {{"context", std::string(context_text)},
                              {"source", std::to_string(query.source)},
                              {"time", std::to_string(query.time)}});
}

std::size_t export_records(std::span<const QueryRecord> records, std::ostream& out,
                           std::size_t max_links) {
    std::size_t written = 0;
    for (const QueryRecord& record : records) {
        // Both skip rules are re-validated at export time; a violating record
        // means the sampler was bypassed.
        if (!context_covers_ground_truth(record.context, record.ground_truth)) {
            throw std::logic_error("export_records: record " + record.id +
                                   " is missing a ground-truth node in its context");
        }
        if (record.context.links.size() > max_links) {
            throw std::logic_error("export_records: record " + record.id + " has " +
                                   std::to_string(record.context.links.size()) +
                                   " context links, cap is " + std::to_string(max_links));
        }

        ordered_json line;
        line["id"] = record.id;
        line["dataset"] = record.dataset;
        line["split"] = record.split;
        line["source"] = record.query.source;
        line["time"] = record.query.time;
        line["ground_truth"] = record.ground_truth;  // already sorted
        line["prompt"] = record.prompt;
        line["num_context_links"] = record.context.links.size();
        out << line.dump() << '\n';
        if (!out) {
            throw std::runtime_error("export_records: write failed after " +
                                     std::to_string(written) + " records (partial output)");
        }
        ++written;
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("export_records: flush failed (partial output)");
    }
    return written;
}

std::vector<StoredRecord> read_records(std::istream& in) {
    std::vector<StoredRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json parsed;
        try {
            parsed = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("records line " + std::to_string(line_no) +
                                     ": invalid JSON: " + e.what());
        }
        StoredRecord record;
        try {
            record.id = parsed.at("id").get<std::string>();
            record.dataset = parsed.at("dataset").get<std::string>();
            record.split = parsed.at("split").get<std::string>();
            record.query.source = parsed.at("source").get<NodeId>();
            record.query.time = parsed.at("time").get<Timestamp>();
            record.ground_truth = parsed.at("ground_truth").get<std::vector<NodeId>>();
            record.prompt = parsed.at("prompt").get<std::string>();
            record.num_context_links = parsed.at("num_context_links").get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("records line " + std::to_string(line_no) +
                                     ": missing or mistyped field: " + e.what());
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace tgcast
