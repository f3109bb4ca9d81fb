#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "hclab/errors.hpp"
#include "hclab/io.hpp"
#include "hclab/network.hpp"
#include "hclab/rng.hpp"

using namespace hclab;

namespace {

SocialNetwork random_network(std::size_t n, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j && uniform01(rng) < p) edges.push_back({i, j});
    return SocialNetwork::from_edges(n, edges);
}

}  // namespace

TEST_CASE("empty network has zero exposure") {
    auto net = SocialNetwork::from_edges(3, {});
    CHECK(net.edge_count() == 0);
    std::vector<double> y{1.0, -2.0, 3.0};
    for (auto dir : {Direction::out, Direction::in})
        for (double v : exposure(net, dir, y)) CHECK(v == 0.0);
    auto part = reciprocity_partition(net);
    CHECK(part.mutual.empty());
    CHECK(part.named_only.empty());
    for (const auto& per_node : part.namer_only) CHECK(per_node.empty());
}

TEST_CASE("single directed edge") {
    std::vector<Edge> e{{0, 1}};
    auto net = SocialNetwork::from_edges(2, e);
    CHECK(net.has_edge(0, 1));
    CHECK_FALSE(net.has_edge(1, 0));
    CHECK_FALSE(net.is_symmetric());
    auto part = reciprocity_partition(net);
    CHECK(part.mutual.empty());
    REQUIRE(part.named_only.size() == 1);
    CHECK(part.named_only[0] == Edge{0, 1});

    std::vector<double> y{5.0, 7.0};
    CHECK(exposure(net, Direction::out, y) == std::vector<double>{7.0, 0.0});
    CHECK(exposure(net, Direction::in, y) == std::vector<double>{0.0, 5.0});
}

TEST_CASE("out exposure sums nominees") {
    std::vector<Edge> e{{0, 1}, {0, 2}};
    auto net = SocialNetwork::from_edges(3, e);
    std::vector<double> y{0.0, 1.0, 1.0};
    CHECK(exposure(net, Direction::out, y)[0] == 2.0);
}

TEST_CASE("reciprocity classes on a three-node example") {
    std::vector<Edge> e{{0, 1}, {1, 0}, {1, 2}};
    auto net = SocialNetwork::from_edges(3, e);
    auto part = reciprocity_partition(net);
    CHECK(part.mutual == std::vector<Edge>{{0, 1}});
    CHECK(part.named_only == std::vector<Edge>{{1, 2}});
    CHECK(part.namer_only[2] == std::vector<Edge>{{1, 2}});
    CHECK(part.namer_only[0].empty());
    CHECK(part.namer_only[1].empty());
}

TEST_CASE("full reciprocity") {
    std::vector<Edge> e{{0, 1}, {1, 0}};
    auto part = reciprocity_partition(SocialNetwork::from_edges(2, e));
    CHECK(part.mutual.size() == 1);
    CHECK(part.named_only.empty());
}

TEST_CASE("construction errors") {
    std::vector<Edge> out_of_range{{0, 3}};
    std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(SocialNetwork::from_edges(3, out_of_range), ConstructionError);
    CHECK_THROWS_AS(SocialNetwork::from_edges(3, loop), ConstructionError);
    CHECK_THROWS_AS(SocialNetwork::from_edges(0, {}), ArgumentError);
}

TEST_CASE("exposure length mismatch") {
    auto net = SocialNetwork::from_edges(3, {});
    std::vector<double> y{1.0, 2.0};
    CHECK_THROWS_AS(exposure(net, Direction::out, y), DimensionError);
}

TEST_CASE("duplicated edges collapse") {
    Rng rng = derive_stream(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        auto net = random_network(15, 0.2, rng);
        auto edges = net.edges();
        auto doubled = edges;
        doubled.insert(doubled.end(), edges.begin(), edges.end());
        std::shuffle(doubled.begin(), doubled.end(), rng);
        auto again = SocialNetwork::from_edges(15, doubled);
        CHECK(again.edges() == edges);
    }
}

TEST_CASE("exposure matches a dense double loop") {
    Rng rng = derive_stream(12, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 49;
        auto net = random_network(n, 0.15, rng);
        std::vector<double> y(n);
        for (double& v : y) v = uniform01(rng) * 4 - 2;
        auto out = exposure(net, Direction::out, y);
        auto in = exposure(net, Direction::in, y);
        for (NodeId i = 0; i < n; ++i) {
            double row = 0.0, col = 0.0;
            for (NodeId j = 0; j < n; ++j) {
                if (net.has_edge(i, j)) row += y[j];
                if (net.has_edge(j, i)) col += y[j];
            }
            CHECK(out[i] == doctest::Approx(row).epsilon(1e-12));
            CHECK(in[i] == doctest::Approx(col).epsilon(1e-12));
        }
    }
}

TEST_CASE("reciprocity classes are disjoint and cover the edge set") {
    Rng rng = derive_stream(13, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 30;
        auto net = random_network(n, 0.3, rng);
        auto part = reciprocity_partition(net);
        std::vector<Edge> covered;
        for (const Edge& e : part.mutual) {
            CHECK(e.from < e.to);
            covered.push_back(e);
            covered.push_back({e.to, e.from});
        }
        for (const Edge& e : part.named_only) {
            CHECK_FALSE(net.has_edge(e.to, e.from));
            covered.push_back(e);
        }
        std::sort(covered.begin(), covered.end());
        CHECK(std::adjacent_find(covered.begin(), covered.end()) == covered.end());
        CHECK(covered == net.edges());

        std::size_t namer_total = 0;
        for (NodeId j = 0; j < n; ++j) {
            for (const Edge& e : part.namer_only[j]) {
                CHECK(e.to == j);
                CHECK(net.has_edge(e.from, j));
                CHECK_FALSE(net.has_edge(j, e.from));
            }
            namer_total += part.namer_only[j].size();
        }
        CHECK(namer_total == part.named_only.size());
    }
}

TEST_CASE("undirected construction is symmetric") {
    std::vector<Edge> e{{0, 1}, {2, 1}};
    auto net = SocialNetwork::undirected_from_edges(3, e);
    CHECK(net.is_symmetric());
    CHECK(net.edge_count() == 4);
    CHECK(net.mean_degree() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("edge list text round trip") {
    Rng rng = derive_stream(14, 0);
    auto net = random_network(25, 0.1, rng);
    std::stringstream s;
    io::write_edge_list(s, net);
    auto back = io::read_edge_list(s, 25);
    CHECK(back.edges() == net.edges());
    CHECK(back.size() == 25);

    std::istringstream bad("0 1\n1 x\n");
    CHECK_THROWS(io::read_edge_list(bad));
    std::istringstream comments("# header\n0 2\n\n2 0\n");
    auto small = io::read_edge_list(comments);
    CHECK(small.size() == 3);
    CHECK(small.is_symmetric());
}
