// Exercises the CLI binary paths that the acceptance flow does not hit:
// judge reprompting on malformed verdicts, the report stage's template
// checksum refusal, and infer's response-cache reuse.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mock_server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using tgcast::testing::MockServer;
using tgcast::testing::completion_body;
using tgcast::testing::user_content;

namespace {

std::string cli_bin() {
    const char* env = std::getenv("TGCAST_CLI_BIN");
    return env != nullptr ? env : "";
}

int run(const std::string& args, const fs::path& log) {
    const std::string command = cli_bin() + " " + args + " >" + log.string() + " 2>&1";
    return std::system(command.c_str());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tgcast-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// Two sources with enough history that two queries survive the skip rules.
void write_edges(const fs::path& path) {
    std::ofstream out(path);
    out << "u,i,ts\n1,2,10\n1,2,20\n1,2,30\n2,1,40\n";
}

void build_records(const TempDir& dir) {
    REQUIRE(run("build-data --edges " + (dir.path / "edges.csv").string() +
                    " --dataset toy --split eval --out " +
                    (dir.path / "records.jsonl").string(),
                dir.path / "build.log") == 0);
}

}  // namespace

TEST_CASE("judge reprompts once on malformed verdicts") {
    REQUIRE(!cli_bin().empty());
    TempDir dir;
    write_edges(dir.path / "edges.csv");
    build_records(dir);

    MockServer forecaster(tgcast::testing::recency_forecaster());
    REQUIRE(run("infer --records " + (dir.path / "records.jsonl").string() + " --out " +
                    (dir.path / "responses.jsonl").string() + " --endpoint " +
                    forecaster.endpoint() + " --model mock",
                dir.path / "infer.log") == 0);

    // Garbage on the first attempt; valid JSON only once the reprompt marker
    // shows up in the prompt. Stateless, so parallelism cannot reorder it.
    MockServer flaky_judge([](const httplib::Request& req, httplib::Response& res) {
        const std::string prompt = user_content(req);
        if (prompt.find("previous reply was not a valid JSON") == std::string::npos) {
            res.set_content(completion_body("sorry, here are my thoughts instead"),
                            "application/json");
        } else {
            res.set_content(
                completion_body(R"({"claims":[{"text":"x","faithful":true}],)"
                                R"("consistency":1,"justified":[]})"),
                "application/json");
        }
    });

    REQUIRE(run("judge --records " + (dir.path / "records.jsonl").string() + " --responses " +
                    (dir.path / "responses.jsonl").string() + " --edges " +
                    (dir.path / "edges.csv").string() + " --out " +
                    (dir.path / "verdicts.jsonl").string() + " --report " +
                    (dir.path / "judge.json").string() + " --endpoint " +
                    flaky_judge.endpoint() + " --model mock-judge",
                dir.path / "judge.log") == 0);

    json report = json::parse(slurp(dir.path / "judge.json"));
    CHECK(report["parse_failures"].get<int>() == 0);  // every retry parsed
    CHECK(report["examples"].get<int>() >= 1);
    CHECK(report["delta_lc"].get<double>() == 0.5);

    SUBCASE("a judge that never yields JSON produces counted failures") {
        MockServer broken_judge([](const httplib::Request&, httplib::Response& res) {
            res.set_content(completion_body("still not json"), "application/json");
        });
        // Aggregation over zero parseable verdicts is a hard error.
        CHECK(run("judge --records " + (dir.path / "records.jsonl").string() +
                      " --responses " + (dir.path / "responses.jsonl").string() + " --edges " +
                      (dir.path / "edges.csv").string() + " --out " +
                      (dir.path / "verdicts2.jsonl").string() + " --report " +
                      (dir.path / "judge2.json").string() + " --endpoint " +
                      broken_judge.endpoint() + " --model mock-judge",
                  dir.path / "judge2.log") != 0);
        std::string log = slurp(dir.path / "judge2.log");
        CHECK(log.find("no parseable verdicts") != std::string::npos);
    }
}

TEST_CASE("report refuses artifacts from different prompt templates") {
    REQUIRE(!cli_bin().empty());
    TempDir dir;
    write_edges(dir.path / "edges.csv");
    build_records(dir);

    MockServer forecaster(tgcast::testing::recency_forecaster());
    MockServer judge(tgcast::testing::fixed_judge());

    REQUIRE(run("infer --records " + (dir.path / "records.jsonl").string() + " --out " +
                    (dir.path / "responses.jsonl").string() + " --endpoint " +
                    forecaster.endpoint() + " --model mock",
                dir.path / "infer.log") == 0);
    REQUIRE(run("eval --records " + (dir.path / "records.jsonl").string() + " --responses " +
                    (dir.path / "responses.jsonl").string() + " --out " +
                    (dir.path / "eval.json").string(),
                dir.path / "eval.log") == 0);
    REQUIRE(run("judge --records " + (dir.path / "records.jsonl").string() + " --responses " +
                    (dir.path / "responses.jsonl").string() + " --edges " +
                    (dir.path / "edges.csv").string() + " --out " +
                    (dir.path / "verdicts.jsonl").string() + " --report " +
                    (dir.path / "judge.json").string() + " --endpoint " + judge.endpoint() +
                    " --model mock-judge",
                dir.path / "judge.log") == 0);

    REQUIRE(run("report --eval " + (dir.path / "eval.json").string() + " --judge " +
                    (dir.path / "judge.json").string() + " --out " +
                    (dir.path / "combined.json").string(),
                dir.path / "report.log") == 0);

    // Same artifacts, tampered checksum: the merge must be refused.
    json tampered = json::parse(slurp(dir.path / "judge.json"));
    tampered["prompt_checksum"] = "0000000000000000";
    std::ofstream(dir.path / "judge_tampered.json") << tampered.dump(2) << '\n';

    CHECK(run("report --eval " + (dir.path / "eval.json").string() + " --judge " +
                  (dir.path / "judge_tampered.json").string() + " --out " +
                  (dir.path / "combined2.json").string(),
              dir.path / "report2.log") != 0);
    std::string log = slurp(dir.path / "report2.log");
    CHECK(log.find("refusing to merge") != std::string::npos);
}

TEST_CASE("judge refuses an edge list that cannot reproduce the stored prompts") {
    REQUIRE(!cli_bin().empty());
    TempDir dir;
    write_edges(dir.path / "edges.csv");
    build_records(dir);

    MockServer forecaster(tgcast::testing::recency_forecaster());
    REQUIRE(run("infer --records " + (dir.path / "records.jsonl").string() + " --out " +
                    (dir.path / "responses.jsonl").string() + " --endpoint " +
                    forecaster.endpoint() + " --model mock",
                dir.path / "infer.log") == 0);

    // Same node ids, different history: the rebuilt contexts cannot match.
    std::ofstream(dir.path / "other.csv") << "u,i,ts\n1,2,10\n1,2,15\n1,2,30\n2,1,40\n";

    MockServer judge(tgcast::testing::fixed_judge());
    CHECK(run("judge --records " + (dir.path / "records.jsonl").string() + " --responses " +
                  (dir.path / "responses.jsonl").string() + " --edges " +
                  (dir.path / "other.csv").string() + " --out " +
                  (dir.path / "verdicts.jsonl").string() + " --report " +
                  (dir.path / "judge.json").string() + " --endpoint " + judge.endpoint() +
                  " --model mock-judge",
              dir.path / "judge.log") != 0);
    std::string log = slurp(dir.path / "judge.log");
    CHECK(log.find("does not reproduce the stored prompt") != std::string::npos);
}

TEST_CASE("universe override file widens the ranking denominator") {
    REQUIRE(!cli_bin().empty());
    TempDir dir;
    write_edges(dir.path / "edges.csv");
    std::ofstream(dir.path / "universe.txt") << "900\n901\n902\n";

    REQUIRE(run("build-data --edges " + (dir.path / "edges.csv").string() + " --universe " +
                    (dir.path / "universe.txt").string() +
                    " --dataset toy --split eval --out " +
                    (dir.path / "records.jsonl").string(),
                dir.path / "build.log") == 0);

    json meta = json::parse(slurp(dir.path / "records.jsonl.meta.json"));
    // edges mention nodes {1, 2}; the override adds three more
    CHECK(meta["universe_size"].get<int>() == 5);
}

TEST_CASE("infer reuses cached responses instead of re-querying") {
    REQUIRE(!cli_bin().empty());
    TempDir dir;
    write_edges(dir.path / "edges.csv");
    build_records(dir);

    std::atomic<int> calls{0};
    MockServer forecaster([&](const httplib::Request& req, httplib::Response& res) {
        calls.fetch_add(1);
        tgcast::testing::recency_forecaster()(req, res);
    });

    const std::string infer_cmd = "infer --records " + (dir.path / "records.jsonl").string() +
                                  " --out " + (dir.path / "responses.jsonl").string() +
                                  " --endpoint " + forecaster.endpoint() + " --model mock";
    REQUIRE(run(infer_cmd, dir.path / "infer1.log") == 0);
    const int after_first = calls.load();
    CHECK(after_first > 0);
    const std::string first = slurp(dir.path / "responses.jsonl");

    REQUIRE(run(infer_cmd, dir.path / "infer2.log") == 0);
    CHECK(calls.load() == after_first);  // cache hit, no new requests
    CHECK(slurp(dir.path / "responses.jsonl") == first);

    json meta = json::parse(slurp(dir.path / "responses.jsonl.meta.json"));
    CHECK(meta["requested"].get<int>() == 0);
    CHECK(meta["reused"].get<int>() == meta["records_total"].get<int>());
}
