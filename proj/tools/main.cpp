// tgcast: link-forecasting harness for temporal graphs.
//
// Stage-wise pipeline over JSONL artifacts:
//   ingest -> build-data -> infer | baseline -> eval / judge -> report
// Every artifact gets a .meta.json sidecar carrying the template checksums
// and a config snapshot, so downstream stages can refuse mismatched inputs
// and any run can be reproduced offline.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgcast/baselines.hpp"
#include "tgcast/checksum.hpp"
#include "tgcast/context_select.hpp"
#include "tgcast/gateway.hpp"
#include "tgcast/graph.hpp"
#include "tgcast/judge.hpp"
#include "tgcast/metrics.hpp"
#include "tgcast/pipeline.hpp"
#include "tgcast/reward.hpp"
#include "tgcast/templates.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// shared flag bundles

struct EdgeFlags {
    std::string edges;
    std::string source_col = "u";
    std::string dest_col = "i";
    std::string time_col = "ts";
    std::string delimiter;  // empty = auto
    std::string universe_file;
    std::string name;
};

void add_edge_flags(CLI::App& cmd, EdgeFlags& flags, bool required = true) {
    auto* opt = cmd.add_option("--edges", flags.edges, "edge-list CSV/TSV with header");
    if (required) opt->required();
    cmd.add_option("--source-col", flags.source_col, "source column name");
    cmd.add_option("--dest-col", flags.dest_col, "destination column name");
    cmd.add_option("--time-col", flags.time_col, "timestamp column name");
    cmd.add_option("--delimiter", flags.delimiter, "field delimiter (default: auto)");
    cmd.add_option("--universe", flags.universe_file,
                   "extra node-universe file, one id per line");
}

struct WalkFlags {
    tgcast::ContextParams params;
    std::string top_unit = "temporal";
};

void add_walk_flags(CLI::App& cmd, WalkFlags& flags) {
    cmd.add_option("--alpha", flags.params.alpha, "walk termination probability (0,1)");
    cmd.add_option("--beta", flags.params.beta, "recency decay factor (0,1)");
    cmd.add_option("--top-n", flags.params.top_n, "context nodes kept after ranking");
    cmd.add_option("--top-unit", flags.top_unit,
                   "what --top-n counts: temporal | base")
        ->check(CLI::IsMember({"temporal", "base"}));
    cmd.add_option("--max-steps", flags.params.max_steps, "walk depth cap");
    cmd.add_option("--max-links", flags.params.max_links, "context link cap");
}

tgcast::ContextParams resolve_walk(const WalkFlags& flags) {
    tgcast::ContextParams params = flags.params;
    params.top_unit = flags.top_unit == "base" ? tgcast::TopUnit::BaseNodes
                                               : tgcast::TopUnit::TemporalNodes;
    params.validate();
    return params;
}

struct GatewayFlags {
    tgcast::ModelConfig config;
    std::size_t parallelism = 4;
    double timeout_s = 120.0;
    bool no_temperature = false;
};

void add_gateway_flags(CLI::App& cmd, GatewayFlags& flags) {
    cmd.add_option("--endpoint", flags.config.endpoint, "chat-completions URL")->required();
    cmd.add_option("--model", flags.config.model, "model name")->required();
    cmd.add_option("--temperature", flags.config.temperature, "sampling temperature");
    cmd.add_flag("--no-temperature", flags.no_temperature,
                 "omit temperature (provider default decoding)");
    cmd.add_option("--max-tokens", flags.config.max_tokens, "max output tokens (0 = default)");
    cmd.add_option("--api-key-env", flags.config.api_key_env,
                   "environment variable holding the API key");
    cmd.add_option("--retries", flags.config.max_retries, "max retries on 429/5xx/timeouts");
    cmd.add_option("--timeout-s", flags.timeout_s, "per-request timeout in seconds");
    cmd.add_option("--parallelism", flags.parallelism, "max in-flight requests")
        ->check(CLI::PositiveNumber);
}

tgcast::ModelConfig resolve_gateway(const GatewayFlags& flags) {
    tgcast::ModelConfig config = flags.config;
    config.send_temperature = !flags.no_temperature;
    config.timeout = std::chrono::milliseconds(
        static_cast<std::int64_t>(flags.timeout_s * 1000.0));
    return config;
}

// ---------------------------------------------------------------------------
// artifact helpers

void require_file(const std::string& path, const std::string& producer) {
    if (!fs::exists(path)) {
        throw std::runtime_error("missing artifact '" + path + "'; run `tgcast " + producer +
                                 "` first");
    }
}

std::string meta_path(const std::string& artifact) { return artifact + ".meta.json"; }

std::string config_checksum(const ordered_json& snapshot) {
    return tgcast::checksum_hex(snapshot.dump());
}

void write_meta(const std::string& artifact, const std::string& stage,
                ordered_json snapshot, ordered_json extra = ordered_json::object()) {
    ordered_json meta;
    meta["stage"] = stage;
    meta["prompt_template"] = {{"version", tgcast::templates::kForecastVersion},
                               {"checksum", tgcast::templates::forecast_checksum()}};
    meta["judge_template"] = {{"version", tgcast::templates::kJudgeVersion},
                              {"checksum", tgcast::templates::judge_checksum()}};
    meta["config"] = snapshot;
    meta["config_checksum"] = config_checksum(snapshot);
    for (auto& [key, value] : extra.items()) meta[key] = value;

    std::ofstream out(meta_path(artifact), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + meta_path(artifact));
    out << meta.dump(2) << '\n';
}

ordered_json read_meta(const std::string& artifact, const std::string& producer) {
    require_file(meta_path(artifact), producer);
    std::ifstream in(meta_path(artifact), std::ios::binary);
    ordered_json meta;
    in >> meta;
    return meta;
}

void check_prompt_checksum(const ordered_json& meta, const std::string& artifact) {
    const std::string recorded = meta.at("prompt_template").at("checksum");
    if (recorded != tgcast::templates::forecast_checksum()) {
        throw std::runtime_error("prompt template checksum mismatch for '" + artifact +
                                 "': artifact has " + recorded + ", this build has " +
                                 tgcast::templates::forecast_checksum());
    }
}

tgcast::TemporalGraph load_graph(const EdgeFlags& flags) {
    if (!fs::exists(flags.edges)) {
        throw std::runtime_error("edge list not found: " + flags.edges);
    }
    std::ifstream input(flags.edges, std::ios::binary);
    if (!input) throw std::runtime_error("cannot open " + flags.edges);

    std::vector<tgcast::NodeId> extra;
    if (!flags.universe_file.empty()) {
        if (!fs::exists(flags.universe_file)) {
            throw std::runtime_error("universe file not found: " + flags.universe_file);
        }
        std::ifstream universe(flags.universe_file, std::ios::binary);
        extra = tgcast::load_node_universe(universe);
    }

    tgcast::ColumnMap columns{flags.source_col, flags.dest_col, flags.time_col};
    const char delim = flags.delimiter.empty() ? '\0' : flags.delimiter[0];
    std::string name = flags.name.empty() ? fs::path(flags.edges).stem().string() : flags.name;
    return tgcast::load_edge_list(input, columns, std::move(name), delim, extra);
}

std::vector<tgcast::StoredRecord> load_records(const std::string& path) {
    require_file(path, "build-data");
    std::ifstream in(path, std::ios::binary);
    return tgcast::read_records(in);
}

std::map<std::string, tgcast::CachedResponse> load_responses(const std::string& path,
                                                             const std::string& producer) {
    require_file(path, producer);
    std::ifstream in(path, std::ios::binary);
    std::map<std::string, tgcast::CachedResponse> responses;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        tgcast::CachedResponse cached = tgcast::response_from_jsonl(line);
        responses[cached.response.id] = std::move(cached);
    }
    return responses;
}

// TGB-style chronological split boundary: linear-interpolated quantile of the
// sorted timestamps; the tail split is everything strictly above it.
double timestamp_quantile(const std::vector<tgcast::Interaction>& interactions, double q) {
    if (interactions.empty()) return 0.0;
    const double pos = q * static_cast<double>(interactions.size() - 1);
    const std::size_t lower = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lower);
    const double a = static_cast<double>(interactions[lower].timestamp);
    const double b = static_cast<double>(
        interactions[std::min(lower + 1, interactions.size() - 1)].timestamp);
    return a * (1.0 - frac) + b * frac;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int run_ingest(const EdgeFlags& edge_flags) {
    tgcast::TemporalGraph graph = load_graph(edge_flags);
    ordered_json stats;
    stats["dataset"] = graph.name();
    stats["interactions"] = graph.size();
    stats["nodes"] = graph.node_universe().size();
    stats["t_min"] = graph.min_timestamp();
    stats["t_max"] = graph.max_timestamp();
    stats["queries"] = tgcast::group_queries(graph.interactions()).size();
    std::cout << stats.dump(2) << '\n';
    return 0;
}

std::optional<std::size_t> default_train_count(const std::string& dataset) {
    if (dataset.find("wiki") != std::string::npos) return 225;
    if (dataset.find("subreddit") != std::string::npos) return 225;
    if (dataset.find("coin") != std::string::npos) return 275;
    if (dataset.find("flight") != std::string::npos) return 275;
    return std::nullopt;  // unbounded
}

struct BuildDataFlags {
    EdgeFlags edges;
    WalkFlags walk;
    std::string dataset;
    std::string split = "eval";
    std::string out;
    std::int64_t count = -1;       // accepted target; -1 = split default
    std::int64_t candidates = -1;  // candidate cap; -1 = split default
    double tail_frac = -1.0;
    std::int64_t time_from = -1;
    std::int64_t time_to = -1;
};

int run_build_data(const BuildDataFlags& flags) {
    const tgcast::ContextParams params = resolve_walk(flags.walk);
    if (flags.split != "train" && flags.split != "eval") {
        throw std::runtime_error("--split must be 'train' or 'eval'");
    }

    EdgeFlags edge_flags = flags.edges;
    edge_flags.name = flags.dataset;
    tgcast::TemporalGraph graph = load_graph(edge_flags);

    auto grouped = tgcast::group_queries(graph.interactions());

    // Restrict candidate queries to a time window (or the chronological tail).
    double from = flags.time_from >= 0 ? static_cast<double>(flags.time_from) - 0.5 : -1.0;
    if (flags.tail_frac > 0.0) {
        from = timestamp_quantile(graph.interactions(), 1.0 - flags.tail_frac);
    }
    if (from >= 0.0 || flags.time_to >= 0) {
        std::vector<tgcast::GroupedQuery> windowed;
        for (const tgcast::GroupedQuery& query : grouped) {
            const double t = static_cast<double>(query.query.time);
            if (from >= 0.0 && t <= from) continue;
            if (flags.time_to >= 0 && query.query.time >= static_cast<std::uint64_t>(flags.time_to)) {
                continue;
            }
            windowed.push_back(query);
        }
        grouped = std::move(windowed);
    }

    tgcast::SampleOptions options;
    if (flags.count >= 0) {
        options.target_accepted = static_cast<std::size_t>(flags.count);
    } else if (flags.split == "train") {
        options.target_accepted = default_train_count(flags.dataset);
    }
    if (flags.candidates >= 0) {
        options.max_candidates = static_cast<std::size_t>(flags.candidates);
    } else if (flags.split == "eval") {
        options.max_candidates = 1000;
    }

    tgcast::SampleStats stats;
    auto records = tgcast::sample_reverse_chrono(grouped, graph, params, options,
                                                 flags.dataset, flags.split, &stats);

    // Write to a temp path first so a failed export never masquerades as a
    // complete artifact.
    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        tgcast::export_records(records, out, params.max_links);
    }
    fs::rename(tmp, flags.out);

    ordered_json snapshot;
    snapshot["dataset"] = flags.dataset;
    snapshot["split"] = flags.split;
    snapshot["alpha"] = params.alpha;
    snapshot["beta"] = params.beta;
    snapshot["top_n"] = params.top_n;
    snapshot["top_unit"] = params.top_unit == tgcast::TopUnit::BaseNodes ? "base" : "temporal";
    snapshot["max_steps"] = params.max_steps;
    snapshot["max_links"] = params.max_links;
    snapshot["target_accepted"] =
        options.target_accepted ? json(*options.target_accepted) : json();
    snapshot["max_candidates"] =
        options.max_candidates ? json(*options.max_candidates) : json();
    snapshot["tail_frac"] = flags.tail_frac;
    snapshot["time_from"] = flags.time_from;
    snapshot["time_to"] = flags.time_to;

    ordered_json extra;
    extra["universe_size"] = graph.node_universe().size();
    extra["candidates"] = stats.candidates;
    extra["accepted"] = stats.accepted;
    extra["skipped_missing_answer"] = stats.skipped_missing_answer;
    extra["skipped_too_large"] = stats.skipped_too_large;
    write_meta(flags.out, "build-data", snapshot, extra);

    std::cerr << "accepted " << stats.accepted << " of " << stats.candidates
              << " candidate queries (missing-answer " << stats.skipped_missing_answer
              << ", over-cap " << stats.skipped_too_large << ") -> " << flags.out << '\n';
    return 0;
}

struct InferFlags {
    std::string records;
    std::string out;
    GatewayFlags gateway;
};

int run_infer(const InferFlags& flags) {
    auto records = load_records(flags.records);
    check_prompt_checksum(read_meta(flags.records, "build-data"), flags.records);
    const tgcast::ModelConfig config = resolve_gateway(flags.gateway);
    const std::string prompt_checksum = tgcast::templates::forecast_checksum();

    // Reuse cached responses keyed by (id, model, prompt checksum).
    std::map<std::string, tgcast::CachedResponse> cache;
    if (fs::exists(flags.out)) {
        cache = load_responses(flags.out, "infer");
    }

    std::vector<tgcast::BatchItem> pending;
    for (const tgcast::StoredRecord& record : records) {
        auto hit = cache.find(record.id);
        const bool reusable = hit != cache.end() && hit->second.model == config.model &&
                              hit->second.prompt_checksum == prompt_checksum &&
                              hit->second.response.ok();
        if (!reusable) pending.push_back({record.id, record.prompt});
    }

    auto fresh = tgcast::batch_complete(pending, config, flags.gateway.parallelism);

    const std::string tmp = flags.out + ".partial";
    std::size_t failures = 0;
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        for (const tgcast::StoredRecord& record : records) {
            auto made = fresh.find(record.id);
            if (made != fresh.end()) {
                if (!made->second.ok()) ++failures;
                out << tgcast::to_jsonl(made->second, config.model, prompt_checksum) << '\n';
            } else {
                out << tgcast::to_jsonl(cache.at(record.id).response, config.model,
                                        prompt_checksum)
                    << '\n';
            }
        }
    }
    fs::rename(tmp, flags.out);

    ordered_json snapshot;
    snapshot["model"] = config.model;
    snapshot["endpoint"] = config.endpoint;
    snapshot["temperature"] = config.send_temperature ? json(config.temperature) : json();
    snapshot["max_tokens"] = config.max_tokens;
    snapshot["retries"] = config.max_retries;
    ordered_json extra;
    extra["records"] = flags.records;
    extra["records_total"] = records.size();
    extra["requested"] = pending.size();
    extra["reused"] = records.size() - pending.size();
    extra["failures"] = failures;
    write_meta(flags.out, "infer", snapshot, extra);

    std::cerr << "responses: " << records.size() << " total, " << pending.size()
              << " requested, " << failures << " failed -> " << flags.out << '\n';
    return failures == 0 ? 0 : 2;
}

struct BaselineFlags {
    std::string records;
    EdgeFlags edges;
    std::string kind = "edgebank-unlimited";
    std::uint64_t window = 0;
    std::string out;
};

int run_baseline(const BaselineFlags& flags) {
    auto records = load_records(flags.records);
    tgcast::TemporalGraph graph = load_graph(flags.edges);

    auto kind = tgcast::baseline_kind_from(flags.kind);
    if (!kind.has_value()) {
        throw std::runtime_error("unknown baseline kind '" + flags.kind +
                                 "' (edgebank-unlimited | edgebank-window | recency)");
    }
    tgcast::BaselineConfig config{*kind, flags.window};
    config.validate();

    // Baselines emit the same response schema as the gateway, so `eval` and
    // `judge` are agnostic to the predictor.
    const std::string model = std::string(tgcast::to_string(config.kind));
    const std::string prompt_checksum = tgcast::templates::forecast_checksum();
    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        for (const tgcast::StoredRecord& record : records) {
            tgcast::PredictionSet prediction = tgcast::baseline_predict(
                graph, record.query.source, record.query.time, config);
            std::string rendered = "[";
            for (std::size_t i = 0; i < prediction.nodes.size(); ++i) {
                if (i > 0) rendered += ", ";
                rendered += std::to_string(prediction.nodes[i]);
            }
            rendered += "]";

            tgcast::ModelResponse response;
            response.id = record.id;
            response.text = "<answer>" + rendered + "</answer>";
            response.finish = tgcast::FinishReason::Success;
            response.detail = "baseline";
            response.attempts = 1;
            out << tgcast::to_jsonl(response, model, prompt_checksum) << '\n';
        }
    }
    fs::rename(tmp, flags.out);

    ordered_json snapshot;
    snapshot["kind"] = flags.kind;
    snapshot["window"] = flags.window;
    ordered_json extra;
    extra["records"] = flags.records;
    extra["records_total"] = records.size();
    write_meta(flags.out, "baseline", snapshot, extra);

    std::cerr << "baseline '" << flags.kind << "' answered " << records.size()
              << " records -> " << flags.out << '\n';
    return 0;
}

struct EvalFlags {
    std::vector<std::string> records;
    std::vector<std::string> responses;
    std::vector<std::string> universe_overrides;  // tag=N
    std::string out;
};

int run_eval(const EvalFlags& flags) {
    ordered_json snapshot;
    snapshot["universe_overrides"] = flags.universe_overrides;

    std::vector<tgcast::EvalRecord> eval_records;
    std::map<std::string, std::size_t> universes;

    for (const std::string& path : flags.records) {
        auto stored = load_records(path);
        ordered_json meta = read_meta(path, "build-data");
        check_prompt_checksum(meta, path);
        for (const tgcast::StoredRecord& record : stored) {
            eval_records.push_back({record.id, record.dataset, record.ground_truth});
        }
        if (meta.contains("universe_size") && meta.contains("config")) {
            universes[meta["config"]["dataset"].get<std::string>()] =
                meta["universe_size"].get<std::size_t>();
        }
    }

    for (const std::string& override_text : flags.universe_overrides) {
        const std::size_t eq = override_text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("--universe-size expects TAG=N, got '" + override_text +
                                     "'");
        }
        universes[override_text.substr(0, eq)] =
            std::stoull(override_text.substr(eq + 1));
    }

    std::unordered_map<std::string, std::string> texts;
    std::string response_prompt_checksum;
    for (const std::string& path : flags.responses) {
        ordered_json meta = read_meta(path, "infer (or baseline)");
        check_prompt_checksum(meta, path);
        for (auto& [id, cached] : load_responses(path, "infer (or baseline)")) {
            if (cached.response.ok()) texts[id] = cached.response.text;
        }
    }

    tgcast::EvalReport report = tgcast::evaluate(eval_records, texts, universes);

    ordered_json doc;
    doc["prompt_checksum"] = tgcast::templates::forecast_checksum();
    doc["config_checksum"] = config_checksum(snapshot);
    auto row_json = [](const tgcast::DatasetBreakdown& row) {
        ordered_json entry;
        entry["dataset"] = row.dataset;
        entry["mrr"] = row.mrr;
        entry["pmrr"] = row.pmrr;
        entry["queries"] = row.query_count;
        entry["gt_links"] = row.gt_link_count;
        entry["missing_responses"] = row.missing_responses;
        entry["universe_size"] = row.universe_size;
        return entry;
    };
    doc["datasets"] = ordered_json::array();
    for (const tgcast::DatasetBreakdown& row : report.per_dataset) {
        doc["datasets"].push_back(row_json(row));
    }
    doc["overall"] = row_json(report.overall);
    doc["missing_ids"] = report.missing_ids;
    doc["outcomes"] = ordered_json::array();
    for (const tgcast::EvalOutcome& outcome : report.outcomes) {
        ordered_json entry;
        entry["id"] = outcome.mrr.query_id;
        entry["target"] = outcome.mrr.target;
        entry["mrr"] = {{"optimistic", outcome.mrr.optimistic},
                        {"pessimistic", outcome.mrr.pessimistic},
                        {"mean", outcome.mrr.mean_rank},
                        {"reciprocal", outcome.mrr.reciprocal}};
        entry["pmrr"] = {{"optimistic", outcome.pmrr.optimistic},
                         {"pessimistic", outcome.pmrr.pessimistic},
                         {"mean", outcome.pmrr.mean_rank},
                         {"reciprocal", outcome.pmrr.reciprocal}};
        doc["outcomes"].push_back(std::move(entry));
    }

    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << doc.dump(2) << '\n';
    }
    fs::rename(tmp, flags.out);
    ordered_json extra;
    extra["records"] = flags.records;
    extra["responses"] = flags.responses;
    write_meta(flags.out, "eval", snapshot, extra);

    std::cout << tgcast::format_table(report);
    return 0;
}

struct JudgeFlags {
    std::string records;
    std::string responses;
    EdgeFlags edges;
    GatewayFlags gateway;
    std::string out;
    std::string report_path;
};

int run_judge(const JudgeFlags& flags) {
    auto records = load_records(flags.records);
    ordered_json records_meta = read_meta(flags.records, "build-data");
    check_prompt_checksum(records_meta, flags.records);
    auto responses = load_responses(flags.responses, "infer (or baseline)");
    tgcast::TemporalGraph graph = load_graph(flags.edges);

    // The records artifact stores prompts, not raw contexts; rebuild each
    // context with the exact sampling params recorded at build time.
    tgcast::ContextParams params;
    const ordered_json& config = records_meta.at("config");
    params.alpha = config.at("alpha").get<double>();
    params.beta = config.at("beta").get<double>();
    params.top_n = config.at("top_n").get<std::size_t>();
    params.top_unit = config.value("top_unit", "temporal") == "base"
                          ? tgcast::TopUnit::BaseNodes
                          : tgcast::TopUnit::TemporalNodes;
    params.max_steps = config.at("max_steps").get<std::size_t>();
    params.max_links = config.at("max_links").get<std::size_t>();

    struct Pending {
        std::string id;
        std::vector<tgcast::NodeId> predicted;
        std::string prompt;
    };
    std::vector<Pending> pending;
    std::size_t skipped_no_response = 0;

    for (const tgcast::StoredRecord& record : records) {
        auto hit = responses.find(record.id);
        if (hit == responses.end() || !hit->second.response.ok()) {
            ++skipped_no_response;
            continue;
        }
        const std::string& text = hit->second.response.text;
        std::string trace = tgcast::extract_tagged(text, "think").value_or("");
        std::vector<tgcast::NodeId> predicted = tgcast::parse_response(text).nodes;

        tgcast::TerminationDistribution dist = tgcast::termination_distribution(
            graph, {record.query.source, record.query.time}, params);
        auto nodes = tgcast::select_context_nodes(dist, params.top_n, params.top_unit);
        tgcast::ContextGraph context =
            tgcast::build_context_graph(graph, nodes, record.query.time);

        // Selection is deterministic, so the rebuilt context must reproduce
        // the stored prompt exactly; anything else means the wrong edge list
        // or drifted sampling params.
        const std::string context_text = tgcast::verbalize_context(context);
        if (tgcast::build_prompt(context_text, record.query) != record.prompt) {
            throw std::runtime_error(
                "record " + record.id +
                ": rebuilt context does not reproduce the stored prompt; check that "
                "--edges matches the build-data input");
        }

        std::string judge_prompt = tgcast::build_judge_prompt(context_text, trace, predicted);
        pending.push_back({record.id, std::move(predicted), std::move(judge_prompt)});
    }

    ordered_json snapshot;
    snapshot["judge_model"] = flags.gateway.config.model;
    snapshot["endpoint"] = flags.gateway.config.endpoint;

    const tgcast::ModelConfig config_judge = resolve_gateway(flags.gateway);
    std::vector<tgcast::BatchItem> batch;
    batch.reserve(pending.size());
    for (const Pending& item : pending) batch.push_back({item.id, item.prompt});
    auto judged = tgcast::batch_complete(batch, config_judge, flags.gateway.parallelism);

    // One reprompt for unusable verdicts, then a recorded failure.
    std::vector<tgcast::BatchItem> retry;
    std::map<std::string, std::optional<tgcast::JudgeVerdict>> verdicts;
    for (const Pending& item : pending) {
        const tgcast::ModelResponse& response = judged.at(item.id);
        std::optional<tgcast::JudgeVerdict> verdict;
        if (response.ok()) {
            verdict = tgcast::parse_verdict(response.text, item.predicted);
        }
        if (!verdict.has_value()) {
            retry.push_back({item.id,
                             item.prompt +
                                 "\n\nYour previous reply was not a valid JSON object. "
                                 "Respond with exactly one JSON object and nothing else."});
        }
        verdicts[item.id] = std::move(verdict);
    }
    if (!retry.empty()) {
        auto second = tgcast::batch_complete(retry, config_judge, flags.gateway.parallelism);
        for (const Pending& item : pending) {
            if (verdicts.at(item.id).has_value()) continue;
            const tgcast::ModelResponse& response = second.at(item.id);
            if (response.ok()) {
                verdicts[item.id] = tgcast::parse_verdict(response.text, item.predicted);
            }
        }
    }

    std::vector<tgcast::JudgeVerdict> final_verdicts;
    for (const Pending& item : pending) {
        std::optional<tgcast::JudgeVerdict>& verdict = verdicts.at(item.id);
        if (verdict.has_value()) {
            verdict->id = item.id;
            final_verdicts.push_back(std::move(*verdict));
        } else {
            final_verdicts.push_back(tgcast::make_failed_verdict(item.id));
        }
    }

    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        for (const tgcast::JudgeVerdict& verdict : final_verdicts) {
            out << tgcast::to_jsonl(verdict) << '\n';
        }
    }
    fs::rename(tmp, flags.out);

    tgcast::AggregateJudgeReport aggregate_report = tgcast::aggregate(final_verdicts);

    ordered_json doc;
    doc["prompt_checksum"] = tgcast::templates::forecast_checksum();
    doc["judge_template_checksum"] = tgcast::templates::judge_checksum();
    doc["config_checksum"] = config_checksum(snapshot);
    doc["judge_model"] = config_judge.model;
    doc["delta_f"] = aggregate_report.mean_delta_f;
    doc["delta_lc"] = aggregate_report.mean_delta_lc;
    doc["delta_a"] = aggregate_report.mean_delta_a;
    doc["examples"] = aggregate_report.example_count;
    doc["parse_failures"] = aggregate_report.parse_failures;
    doc["skipped_no_response"] = skipped_no_response;

    const std::string report_path =
        flags.report_path.empty() ? flags.out + ".report.json" : flags.report_path;
    {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << doc.dump(2) << '\n';
    }

    ordered_json extra;
    extra["records"] = flags.records;
    extra["responses"] = flags.responses;
    extra["examples"] = aggregate_report.example_count;
    extra["parse_failures"] = aggregate_report.parse_failures;
    extra["skipped_no_response"] = skipped_no_response;
    write_meta(flags.out, "judge", snapshot, extra);

    std::cerr << "judged " << aggregate_report.example_count << " traces ("
              << aggregate_report.parse_failures << " parse failures, " << skipped_no_response
              << " skipped) -> " << flags.out << '\n';
    std::cout << "delta_f=" << aggregate_report.mean_delta_f
              << " delta_lc=" << aggregate_report.mean_delta_lc
              << " delta_a=" << aggregate_report.mean_delta_a << '\n';
    return 0;
}

struct RewardFlags {
    std::string records;
    std::vector<std::string> responses;  // one file per rollout
    std::string out;
};

// Scores each rollout's parsed answer with the F1 reward and normalizes the
// per-record rollout group into advantages.
int run_reward(const RewardFlags& flags) {
    auto records = load_records(flags.records);
    std::vector<std::map<std::string, tgcast::CachedResponse>> rollouts;
    rollouts.reserve(flags.responses.size());
    for (const std::string& path : flags.responses) {
        rollouts.push_back(load_responses(path, "infer (or baseline)"));
    }

    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        for (const tgcast::StoredRecord& record : records) {
            std::vector<double> rewards(rollouts.size(), 0.0);
            for (std::size_t r = 0; r < rollouts.size(); ++r) {
                auto hit = rollouts[r].find(record.id);
                if (hit == rollouts[r].end() || !hit->second.response.ok()) continue;
                tgcast::PredictionSet pred =
                    tgcast::parse_response(hit->second.response.text);
                rewards[r] = tgcast::f1_reward(pred, record.ground_truth);
            }
            std::vector<double> advantages = tgcast::group_advantages(rewards);
            for (std::size_t r = 0; r < rewards.size(); ++r) {
                out << tgcast::to_jsonl(
                           tgcast::RewardedRollout{record.id, r, rewards[r], advantages[r]})
                    << '\n';
            }
        }
    }
    fs::rename(tmp, flags.out);

    ordered_json snapshot;
    snapshot["rollouts"] = flags.responses.size();
    ordered_json extra;
    extra["records"] = flags.records;
    extra["responses"] = flags.responses;
    extra["records_total"] = records.size();
    write_meta(flags.out, "reward", snapshot, extra);

    std::cerr << "rewarded " << records.size() << " records x " << flags.responses.size()
              << " rollouts -> " << flags.out << '\n';
    return 0;
}

struct ReportFlags {
    std::string eval_path;
    std::string judge_path;
    std::string out;
};

int run_report(const ReportFlags& flags) {
    require_file(flags.eval_path, "eval");
    require_file(flags.judge_path, "judge");

    ordered_json eval_doc;
    ordered_json judge_doc;
    {
        std::ifstream in(flags.eval_path, std::ios::binary);
        in >> eval_doc;
    }
    {
        std::ifstream in(flags.judge_path, std::ios::binary);
        in >> judge_doc;
    }

    const std::string eval_checksum = eval_doc.at("prompt_checksum");
    const std::string judge_checksum = judge_doc.at("prompt_checksum");
    if (eval_checksum != judge_checksum) {
        throw std::runtime_error("refusing to merge: eval artifact used prompt template " +
                                 eval_checksum + " but judge artifact used " + judge_checksum);
    }

    ordered_json combined;
    combined["prompt_checksum"] = eval_checksum;
    combined["metrics"] = eval_doc;
    combined["judge"] = judge_doc;
    combined["metrics"].erase("outcomes");  // audit detail stays in the eval artifact

    const std::string tmp = flags.out + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << combined.dump(2) << '\n';
    }
    fs::rename(tmp, flags.out);

    // Human-readable summary table.
    std::size_t width = 7;
    for (const auto& row : eval_doc.at("datasets")) {
        width = std::max(width, row.at("dataset").get<std::string>().size());
    }
    auto print_row = [&](const std::string& name, const ordered_json& row) {
        std::printf("%-*s  %8.4f  %8.4f\n", static_cast<int>(width), name.c_str(),
                    row.at("mrr").get<double>(), row.at("pmrr").get<double>());
    };
    std::printf("%-*s  %8s  %8s\n", static_cast<int>(width), "Dataset", "MRR", "pMRR");
    for (const auto& row : eval_doc.at("datasets")) {
        print_row(row.at("dataset").get<std::string>(), row);
    }
    print_row("Overall", eval_doc.at("overall"));
    std::printf("Judge: delta_f=%.4f delta_lc=%.4f delta_a=%.4f (examples=%zu, failures=%zu)\n",
                judge_doc.at("delta_f").get<double>(), judge_doc.at("delta_lc").get<double>(),
                judge_doc.at("delta_a").get<double>(),
                judge_doc.at("examples").get<std::size_t>(),
                judge_doc.at("parse_failures").get<std::size_t>());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-forecasting harness for temporal graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file");

    std::uint64_t seed = 0;
    app.add_option("--seed", seed,
                   "reserved for future stochastic features; the core is deterministic");

    // ingest
    EdgeFlags ingest_flags;
    auto* ingest = app.add_subcommand("ingest", "validate an edge list and print stats");
    add_edge_flags(*ingest, ingest_flags);
    ingest->add_option("--name", ingest_flags.name, "dataset tag");

    // build-data
    BuildDataFlags build_flags;
    auto* build = app.add_subcommand("build-data", "select contexts and export query records");
    add_edge_flags(*build, build_flags.edges);
    add_walk_flags(*build, build_flags.walk);
    build->add_option("--dataset", build_flags.dataset, "dataset tag")->required();
    build->add_option("--split", build_flags.split, "train | eval")->required();
    build->add_option("--out", build_flags.out, "records JSONL path")->required();
    build->add_option("--count", build_flags.count,
                      "accepted-record target (default: per-dataset for train, unbounded "
                      "for eval)");
    build->add_option("--candidates", build_flags.candidates,
                      "candidate queries considered (default: unbounded for train, 1000 "
                      "for eval)");
    build->add_option("--tail-frac", build_flags.tail_frac,
                      "draw candidates from the chronological tail (e.g. 0.15)");
    build->add_option("--time-from", build_flags.time_from, "minimum query timestamp");
    build->add_option("--time-to", build_flags.time_to, "exclusive maximum query timestamp");

    // infer
    InferFlags infer_flags;
    auto* infer = app.add_subcommand("infer", "query a forecaster endpoint over records");
    infer->add_option("--records", infer_flags.records, "records JSONL")->required();
    infer->add_option("--out", infer_flags.out, "responses JSONL path")->required();
    add_gateway_flags(*infer, infer_flags.gateway);

    // baseline
    BaselineFlags baseline_flags;
    auto* baseline = app.add_subcommand("baseline", "answer records with a heuristic predictor");
    baseline->add_option("--records", baseline_flags.records, "records JSONL")->required();
    add_edge_flags(*baseline, baseline_flags.edges);
    baseline->add_option("--kind", baseline_flags.kind,
                         "edgebank-unlimited | edgebank-window | recency");
    baseline->add_option("--window", baseline_flags.window, "window size for edgebank-window");
    baseline->add_option("--out", baseline_flags.out, "responses JSONL path")->required();

    // eval
    EvalFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "score responses with MRR and pMRR");
    eval->add_option("--records", eval_flags.records, "records JSONL (repeatable)")->required();
    eval->add_option("--responses", eval_flags.responses, "responses JSONL (repeatable)")
        ->required();
    eval->add_option("--universe-size", eval_flags.universe_overrides,
                     "override universe size as TAG=N (repeatable)");
    eval->add_option("--out", eval_flags.out, "report JSON path")->required();

    // judge
    JudgeFlags judge_flags;
    auto* judge = app.add_subcommand("judge", "score reasoning traces with an LLM judge");
    judge->add_option("--records", judge_flags.records, "records JSONL")->required();
    judge->add_option("--responses", judge_flags.responses, "responses JSONL")->required();
    add_edge_flags(*judge, judge_flags.edges);
    judge->add_option("--out", judge_flags.out, "verdicts JSONL path")->required();
    judge->add_option("--report", judge_flags.report_path,
                      "aggregate report JSON path (default: <out>.report.json)");
    add_gateway_flags(*judge, judge_flags.gateway);

    // reward
    RewardFlags reward_flags;
    auto* reward = app.add_subcommand("reward",
                                      "score rollouts with the F1 reward and group advantages");
    reward->add_option("--records", reward_flags.records, "records JSONL")->required();
    reward->add_option("--responses", reward_flags.responses,
                       "responses JSONL, one per rollout (repeatable)")
        ->required();
    reward->add_option("--out", reward_flags.out, "rewarded-rollout JSONL path")->required();

    // report
    ReportFlags report_flags;
    auto* report = app.add_subcommand("report", "merge metric and judge reports");
    report->add_option("--eval", report_flags.eval_path, "eval report JSON")->required();
    report->add_option("--judge", report_flags.judge_path, "judge report JSON")->required();
    report->add_option("--out", report_flags.out, "combined report JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ingest)) return run_ingest(ingest_flags);
        if (app.got_subcommand(build)) return run_build_data(build_flags);
        if (app.got_subcommand(infer)) return run_infer(infer_flags);
        if (app.got_subcommand(baseline)) return run_baseline(baseline_flags);
        if (app.got_subcommand(eval)) return run_eval(eval_flags);
        if (app.got_subcommand(judge)) return run_judge(judge_flags);
        if (app.got_subcommand(reward)) return run_reward(reward_flags);
        if (app.got_subcommand(report)) return run_report(report_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
