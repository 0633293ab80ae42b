#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tgcast/context_select.hpp"

using namespace tgcast;

namespace {

double mass_of(const TerminationDistribution& dist, TemporalNode node) {
    for (const auto& [key, mass] : dist.mass) {
        if (key == node) return mass;
    }
    return 0.0;
}

TemporalGraph random_toy_graph(std::mt19937& rng, std::size_t max_nodes) {
    std::uniform_int_distribution<std::size_t> node_count(2, max_nodes);
    const std::size_t n = node_count(rng);
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    std::uniform_int_distribution<Timestamp> time(0, 40);
    std::uniform_int_distribution<std::size_t> link_count(1, 3 * n);
    std::vector<Interaction> links;
    for (std::size_t i = 0, m = link_count(rng); i < m; ++i) {
        links.push_back({node(rng), node(rng), time(rng)});
    }
    return TemporalGraph(std::move(links));
}

}  // namespace

TEST_CASE("transition probabilities follow recency ranks") {
    SUBCASE("two neighbors, beta 0.5") {
        std::vector<TemporalNode> nei{{3, 9}, {2, 5}};
        auto probs = transition_probs(nei, 0.5);
        REQUIRE(probs.size() == 2);
        CHECK(probs[0].node == TemporalNode{3, 9});
        CHECK(probs[0].prob == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(probs[1].prob == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("three neighbors with distinct times, beta 0.5") {
        std::vector<TemporalNode> nei{{1, 10}, {2, 8}, {3, 6}};
        auto probs = transition_probs(nei, 0.5);
        CHECK(probs[0].prob == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
        CHECK(probs[1].prob == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
        CHECK(probs[2].prob == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    }
    SUBCASE("single neighbor gets everything") {
        std::vector<TemporalNode> nei{{7, 3}};
        auto probs = transition_probs(nei, 0.25);
        CHECK(probs[0].prob == 1.0);
    }
    SUBCASE("empty neighborhood is a caller error") {
        CHECK_THROWS_AS(transition_probs({}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("transition probabilities: ties get distinct consecutive ranks") {
    // Unsorted on purpose; the function must canonicalize the order itself.
    std::vector<TemporalNode> nei{{9, 5}, {2, 5}, {4, 7}};
    auto probs = transition_probs(nei, 0.5);
    // Rank order: (4,7) most recent, then tie at t=5 by node id: 2 before 9.
    CHECK(probs[0].node == TemporalNode{4, 7});
    CHECK(probs[1].node == TemporalNode{2, 5});
    CHECK(probs[2].node == TemporalNode{9, 5});
    CHECK(probs[0].prob == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(probs[1].prob == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(probs[2].prob == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

    double sum = 0.0;
    for (const auto& p : probs) sum += p.prob;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transition probabilities sum to one on random neighborhoods") {
    std::mt19937 rng(314);
    std::uniform_int_distribution<std::size_t> size(1, 40);
    std::uniform_int_distribution<NodeId> node(0, 15);
    std::uniform_int_distribution<Timestamp> time(0, 10);  // many ties
    std::uniform_real_distribution<double> beta(0.05, 0.95);
    for (int i = 0; i < 500; ++i) {
        std::vector<TemporalNode> nei;
        for (std::size_t k = 0, n = size(rng); k < n; ++k) {
            nei.push_back({node(rng), time(rng)});
        }
        auto probs = transition_probs(nei, beta(rng));
        double sum = 0.0;
        for (const auto& p : probs) sum += p.prob;
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("monotone recency: more recent neighbors never rank below older ones") {
    std::mt19937 rng(217);
    std::uniform_int_distribution<std::size_t> size(2, 20);
    std::uniform_int_distribution<NodeId> node(0, 30);
    std::uniform_int_distribution<Timestamp> time(0, 25);
    for (int i = 0; i < 200; ++i) {
        std::vector<TemporalNode> nei;
        for (std::size_t k = 0, n = size(rng); k < n; ++k) {
            nei.push_back({node(rng), time(rng)});
        }
        auto probs = transition_probs(nei, 0.6);
        for (const auto& a : probs) {
            for (const auto& b : probs) {
                if (a.node.time > b.node.time) REQUIRE(a.prob >= b.prob);
            }
        }
    }
}

TEST_CASE("termination: origin with no neighbors terminates immediately") {
    TemporalGraph graph({{1, 2, 5}});
    ContextParams params;
    TerminationDistribution dist = termination_distribution(graph, {9, 10}, params);
    REQUIRE(dist.mass.size() == 1);
    CHECK(dist.mass[0].first == TemporalNode{9, 10});
    CHECK(dist.mass[0].second == 1.0);
}

TEST_CASE("termination on the chain u-a-b") {
    // u interacts with a at t=8, a with b at t=4: from (u,10) the only move is
    // to (a,8), then to (b,4), which hits the step cap and absorbs the rest.
    TemporalGraph graph({{20, 10, 8}, {10, 30, 4}});
    ContextParams params;
    params.alpha = 0.5;
    params.max_steps = 2;
    TerminationDistribution dist = termination_distribution(graph, {20, 10}, params);

    CHECK(mass_of(dist, {20, 10}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass_of(dist, {10, 8}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(mass_of(dist, {30, 4}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("termination on the two-neighbor star") {
    TemporalGraph graph({{1, 2, 9}, {1, 3, 5}});
    ContextParams params;
    params.alpha = 0.5;
    params.beta = 0.5;
    params.max_steps = 1;
    TerminationDistribution dist = termination_distribution(graph, {1, 10}, params);

    CHECK(mass_of(dist, {1, 10}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass_of(dist, {2, 9}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(mass_of(dist, {3, 5}) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("termination mass always sums to one on random toy graphs") {
    std::mt19937 rng(1234);
    const double grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::uniform_int_distribution<std::size_t> pick(0, 4);
    std::uniform_int_distribution<std::size_t> steps(1, 3);
    for (int i = 0; i < 250; ++i) {
        TemporalGraph graph = random_toy_graph(rng, 30);
        std::uniform_int_distribution<NodeId> node(0, 29);
        ContextParams params;
        params.alpha = grid[pick(rng)];
        params.beta = grid[pick(rng)];
        params.max_steps = steps(rng);
        TerminationDistribution dist =
            termination_distribution(graph, {node(rng), graph.max_timestamp() + 1}, params);
        REQUIRE(dist.total() == doctest::Approx(1.0).epsilon(1e-9));
        for (const auto& [key, mass] : dist.mass) {
            REQUIRE(mass >= 0.0);
            REQUIRE(mass <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("termination distributions are deterministic") {
    std::mt19937 rng(5);
    TemporalGraph graph = random_toy_graph(rng, 20);
    ContextParams params;
    TerminationDistribution a =
        termination_distribution(graph, {3, graph.max_timestamp()}, params);
    TerminationDistribution b =
        termination_distribution(graph, {3, graph.max_timestamp()}, params);
    REQUIRE(a.mass.size() == b.mass.size());
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        CHECK(a.mass[i].first == b.mass[i].first);
        CHECK(a.mass[i].second == b.mass[i].second);  // bitwise equal
    }
}

TEST_CASE("select_context_nodes ranks by mass, then recency, then id") {
    SUBCASE("chain: tie at 0.25 broken by later time") {
        TemporalGraph graph({{20, 10, 8}, {10, 30, 4}});
        ContextParams params;
        params.alpha = 0.5;
        TerminationDistribution dist = termination_distribution(graph, {20, 10}, params);
        CHECK(select_context_nodes(dist, 2) == std::vector<NodeId>{20, 10});
        CHECK(select_context_nodes(dist, 3) == std::vector<NodeId>{20, 10, 30});
    }
    SUBCASE("star: mass order origin > recent > old") {
        TemporalGraph graph({{1, 2, 9}, {1, 3, 5}});
        ContextParams params;
        params.alpha = 0.5;
        params.beta = 0.5;
        params.max_steps = 1;
        TerminationDistribution dist = termination_distribution(graph, {1, 10}, params);
        CHECK(select_context_nodes(dist, 3) == std::vector<NodeId>{1, 2, 3});
    }
    SUBCASE("top_n = 1 keeps only the origin under base counting") {
        TemporalGraph graph({{1, 2, 9}});
        TerminationDistribution dist = termination_distribution(graph, {1, 10}, {});
        CHECK(select_context_nodes(dist, 1, TopUnit::BaseNodes) == std::vector<NodeId>{1});
        // The single temporal slot goes to (2,9) with mass 0.8; the origin is
        // forced in regardless.
        CHECK(select_context_nodes(dist, 1, TopUnit::TemporalNodes) ==
              std::vector<NodeId>{1, 2});
    }
}

TEST_CASE("top-unit counting: temporal slots absorb repeat visits") {
    // Source 1 interacted with node 2 three times and with node 3 once; node 2
    // occupies three of the highest-mass temporal slots.
    TemporalGraph graph({{1, 2, 9}, {1, 2, 8}, {1, 2, 7}, {1, 3, 2}});
    ContextParams params;
    params.alpha = 0.5;
    params.beta = 0.5;
    params.max_steps = 1;
    TerminationDistribution dist = termination_distribution(graph, {1, 10}, params);

    // Base counting fills distinct nodes until the cap.
    CHECK(select_context_nodes(dist, 3, TopUnit::BaseNodes) ==
          std::vector<NodeId>{1, 2, 3});

    // Temporal counting spends the three slots on (1,10), (2,9), (2,8):
    // node 3 stays outside even though only two distinct nodes were kept.
    CHECK(select_context_nodes(dist, 3, TopUnit::TemporalNodes) ==
          std::vector<NodeId>{1, 2});

    // With enough slots the two units agree.
    CHECK(select_context_nodes(dist, 10, TopUnit::TemporalNodes) ==
          select_context_nodes(dist, 10, TopUnit::BaseNodes));
}

TEST_CASE("build_context_graph filters by incidence and strict time") {
    TemporalGraph graph({{1, 2, 5}, {2, 3, 7}, {1, 3, 9}});
    SUBCASE("nodes {1}, t_q 10") {
        std::vector<NodeId> nodes{1};
        ContextGraph context = build_context_graph(graph, nodes, 10);
        CHECK(context.links == std::vector<Interaction>{{1, 2, 5}, {1, 3, 9}});
        CHECK(context.query_source == 1);
        CHECK(context.query_time == 10);
    }
    SUBCASE("nodes {1,2}, t_q 8") {
        std::vector<NodeId> nodes{1, 2};
        ContextGraph context = build_context_graph(graph, nodes, 8);
        CHECK(context.links == std::vector<Interaction>{{1, 2, 5}, {2, 3, 7}});
    }
    SUBCASE("absent node yields an empty context") {
        std::vector<NodeId> nodes{4};
        CHECK(build_context_graph(graph, nodes, 100).links.empty());
    }
}

TEST_CASE("context graphs never leak the future") {
    std::mt19937 rng(88);
    for (int i = 0; i < 100; ++i) {
        TemporalGraph graph = random_toy_graph(rng, 15);
        std::uniform_int_distribution<Timestamp> time(0, 41);
        std::uniform_int_distribution<NodeId> node(0, 14);
        const Timestamp t_q = time(rng);
        std::vector<NodeId> nodes{node(rng), node(rng)};
        ContextGraph context = build_context_graph(graph, nodes, t_q);
        for (const Interaction& link : context.links) {
            REQUIRE(link.timestamp < t_q);
        }
    }
}

TEST_CASE("ContextParams validation") {
    ContextParams params;
    params.alpha = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.alpha = 0.2;
    params.beta = 1.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.beta = 0.8;
    params.top_n = 0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
