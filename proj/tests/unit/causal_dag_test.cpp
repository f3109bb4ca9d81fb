#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hclab/causal_dag.hpp"
#include "hclab/errors.hpp"
#include "hclab/rng.hpp"
#include "oracles.hpp"

using namespace hclab;

namespace {

CausalDag observed_dag(const std::vector<std::string>& names, const std::vector<std::pair<std::string, std::string>>& e) {
    std::vector<CausalDag::NodeSpec> nodes;
    for (const auto& n : names) nodes.push_back({n, false});
    return CausalDag(nodes, e);
}

CausalDag from_oracle(const oracle::Graph& g) {
    std::vector<CausalDag::NodeSpec> nodes;
    for (std::size_t v = 0; v < g.n; ++v) nodes.push_back({"v" + std::to_string(v), false});
    std::vector<std::pair<std::string, std::string>> e;
    for (auto [a, b] : g.edges) e.emplace_back("v" + std::to_string(a), "v" + std::to_string(b));
    return CausalDag(nodes, e);
}

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(HCLAB_FIXTURE_DIR) + "/dag/" + name + ".dag");
    REQUIRE(in.good());
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::set<std::pair<std::string, std::string>> edge_names(const CausalDag& dag) {
    auto e = dag.edges();
    return {e.begin(), e.end()};
}

std::set<std::string> names_of(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

const std::vector<std::string> kYjLag{"Yj_t1"};

}  // namespace

TEST_CASE("chain and collider") {
    auto chain = observed_dag({"a", "m", "b"}, {{"a", "m"}, {"m", "b"}});
    CHECK(d_separated(chain, "a", "b", {"m"}));
    CHECK_FALSE(d_separated(chain, "a", "b", {}));

    auto collider = observed_dag({"a", "m", "b", "d"}, {{"a", "m"}, {"b", "m"}, {"m", "d"}});
    CHECK(d_separated(collider, "a", "b", {}));
    CHECK_FALSE(d_separated(collider, "a", "b", {"m"}));
    CHECK_FALSE(d_separated(collider, "a", "b", {"d"}));
}

TEST_CASE("query errors") {
    auto chain = observed_dag({"a", "m", "b"}, {{"a", "m"}, {"m", "b"}});
    CHECK_THROWS_AS(d_separated(chain, "a", "zz", {}), LookupError);
    CHECK_THROWS_AS(d_separated(chain, "a", "a", {}), ArgumentError);
    CHECK_THROWS_AS(d_separated(chain, "a", "b", {"a"}), ArgumentError);
    CHECK_THROWS_AS(open_backdoor_paths(chain, "a", "a", {}), ArgumentError);
    CHECK_THROWS_AS(observed_dag({"a", "b"}, {{"a", "b"}, {"b", "a"}}), ConstructionError);
    CHECK_THROWS_AS(observed_dag({"a", "a"}, {}), ConstructionError);
    CHECK_THROWS_AS(build_template("fig2"), LookupError);
}

TEST_CASE("no edge into the treatment means no backdoor") {
    auto g = observed_dag({"t", "o", "c"}, {{"t", "o"}, {"t", "c"}, {"c", "o"}});
    CHECK(open_backdoor_paths(g, "t", "o", {}).empty());
    CHECK(open_backdoor_paths(g, "t", "o", {"c"}).empty());
}

TEST_CASE("d-separation agrees with path enumeration") {
    Rng rng = derive_stream(31, 0);
    std::size_t queries = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 9;
        auto g = oracle::random_dag(n, 0.3, rng);
        auto dag = from_oracle(g);
        for (int q = 0; q < 4; ++q) {
            std::size_t a = rng() % n, b = rng() % n;
            if (a == b) continue;
            std::set<std::size_t> given;
            std::vector<std::size_t> given_vec;
            for (std::size_t v = 0; v < n; ++v) {
                if (v != a && v != b && uniform01(rng) < 0.3) {
                    given.insert(v);
                    given_vec.push_back(v);
                }
            }
            const bool expected = oracle::d_separated(g, a, b, given);
            CHECK(d_separated(dag, a, b, given_vec) == expected);
            CHECK(d_separated(dag, b, a, given_vec) == expected);
            ++queries;
        }
    }
    CHECK(queries > 800);
}

TEST_CASE("conditioning on a chain node never opens a chain") {
    for (std::size_t len = 3; len <= 8; ++len) {
        std::vector<std::string> names;
        std::vector<std::pair<std::string, std::string>> e;
        for (std::size_t k = 0; k < len; ++k) names.push_back("c" + std::to_string(k));
        for (std::size_t k = 0; k + 1 < len; ++k) e.emplace_back(names[k], names[k + 1]);
        auto dag = observed_dag(names, e);
        for (std::size_t k = 1; k + 1 < len; ++k) {
            CHECK(d_separated(dag, names.front(), names.back(), {names[k]}));
            std::vector<std::string> more{names[k]};
            for (std::size_t j = 1; j + 1 < len; ++j) {
                if (j == k) continue;
                more.push_back(names[j]);
                CHECK(d_separated(dag, names.front(), names.back(), more));
            }
        }
    }
}

TEST_CASE("fig1: contagion is confounded") {
    auto dag = build_template("fig1");
    CHECK(names_of(dag.latent_nodes()) == std::set<std::string>{"Xi", "Xj"});
    auto observed = observed_except(dag, {"Yj_t1", "Yi_t"});
    CHECK_FALSE(d_separated(dag, "Yj_t1", "Yi_t", observed));

    auto paths = confounding_paths_given_observed(dag, "Yj_t1", "Yi_t", observed);
    bool through_both = false;
    for (const auto& p : paths) {
        CHECK(p.nodes.size() >= 3);
        const bool xi = std::find(p.nodes.begin(), p.nodes.end(), "Xi") != p.nodes.end();
        const bool xj = std::find(p.nodes.begin(), p.nodes.end(), "Xj") != p.nodes.end();
        through_both = through_both || (xi && xj);
    }
    CHECK(through_both);
    CHECK(paths.front().to_string() == "Yj_t1 <- Xj -> Aij <- Xi -> Yi_t");

    auto no_contagion = dag.without_edge("Yj_t1", "Yi_t");
    CHECK_FALSE(d_separated(no_contagion, "Yj_t1", "Yi_t", observed));
    CHECK_THROWS_AS(confounding_paths_given_observed(dag, "Yj_t1", "Yi_t", {"Xi"}), ArgumentError);
}

TEST_CASE("fig3 variants are unconfounded") {
    for (const char* name : {"fig3a", "fig3b"}) {
        auto dag = build_template(name);
        auto observed = observed_except(dag, {"Yj_t1", "Yi_t"});
        CHECK(confounding_paths_given_observed(dag, "Yj_t1", "Yi_t", observed).empty());
        auto no_contagion = dag.without_edge("Yj_t1", "Yi_t");
        CHECK(d_separated(no_contagion, "Yj_t1", "Yi_t", observed));
    }
}

TEST_CASE("fig4 and fig5 have no trait-to-outcome or cross-individual edges as drawn") {
    auto fig4 = build_template("fig4");
    CHECK_FALSE(fig4.has_edge("Yj_t1", "Yi_t"));
    CHECK_FALSE(fig4.has_edge("Yj_t2", "Yi_t"));
    auto obs4 = observed_except(fig4, {"Yj_t1", "Yi_t"});
    CHECK_FALSE(d_separated(fig4, "Yj_t1", "Yi_t", obs4));

    auto fig5 = build_template("fig5");
    CHECK(fig5.latent_nodes().empty());
    for (const char* y : {"Yi_t1", "Yi_t", "Yj_t1", "Yj_t"}) {
        CHECK_FALSE(fig5.has_edge("Xi", y));
        CHECK_FALSE(fig5.has_edge("Xj", y));
    }
    CHECK(fig5.has_edge("Yj_t1", "Yi_t"));
}

TEST_CASE("templates match the reviewed fixtures") {
    for (const auto& name : template_names()) {
        CAPTURE(name);
        auto built = build_template(name);
        auto parsed = parse_dag_text(fixture(name));
        CHECK(edge_names(built) == edge_names(parsed));
        CHECK(names_of(built.latent_nodes()) == names_of(parsed.latent_nodes()));
        CHECK(names_of(built.observed_nodes()) == names_of(parsed.observed_nodes()));
    }
}

TEST_CASE("text format round trip") {
    for (const auto& name : template_names()) {
        auto dag = build_template(name);
        auto back = parse_dag_text(to_dag_text(dag));
        CHECK(edge_names(back) == edge_names(dag));
        CHECK(names_of(back.latent_nodes()) == names_of(dag.latent_nodes()));
    }
    CHECK_THROWS_AS(parse_dag_text("a -> b\nb -> a\n"), ConstructionError);
    CHECK_THROWS_AS(parse_dag_text("a => b\n"), ConstructionError);
    auto lone = parse_dag_text("nodes: solo\nlatent: hidden\n");
    CHECK(lone.size() == 2);
}
