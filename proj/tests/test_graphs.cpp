#include <doctest.h>

#include "nilspec/graph.hpp"
#include "oracles.hpp"

using namespace nilspec;

namespace {

Graph path3() { return Graph({"a", "b", "c"}, {{0, 1}, {1, 2}}); }

// all labeled graphs on n vertices, one per edge mask
Graph graph_from_mask(std::size_t n, unsigned mask) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, char('a' + i)));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    unsigned bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++bit)
            if ((mask >> bit) & 1) edges.emplace_back(i, j);
    return Graph(std::move(labels), std::move(edges));
}

} // namespace

TEST_CASE("construction and validation") {
    Graph g({"a", "b"}, {});
    CHECK(g.size() == 2);
    CHECK(g.edge_count() == 0);

    CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 0}}), FormatError);        // loop
    CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 1}, {1, 0}}), FormatError); // duplicate
    CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 2}}), FormatError);        // unknown
    CHECK_THROWS_AS(Graph({"a", "a"}, {}), FormatError);              // dup label

    Graph p = path3();
    CHECK(p.has_edge(0, 1));
    CHECK(p.has_edge(1, 2));
    CHECK(!p.has_edge(0, 2));
}

TEST_CASE("complement") {
    Graph e2({"a", "b"}, {});
    CHECK(e2.complement().edge_count() == 1);

    Graph k3({"a", "b", "c"}, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(k3.complement().edge_count() == 0);

    Graph pc = path3().complement();
    CHECK(pc.edge_count() == 1);
    CHECK(pc.has_edge(0, 2)); // a-c plus isolated b

    for (unsigned mask = 0; mask < 64; ++mask) {
        Graph g = graph_from_mask(4, mask);
        CHECK(g.complement().complement() == g);
    }
}

TEST_CASE("split_join examples") {
    Graph k2({"a", "b"}, {{0, 1}});
    auto sk2 = split_join(k2);
    REQUIRE(sk2.has_value());
    CHECK(sk2->parts == std::vector<std::vector<std::size_t>>{{0}, {1}});

    CHECK(!split_join(Graph({"a", "b"}, {})).has_value()); // edgeless: no join

    auto sp3 = split_join(path3());
    REQUIRE(sp3.has_value());
    // {b} then {a,c}: the dominating vertex is its own part
    CHECK(sp3->parts == std::vector<std::vector<std::size_t>>{{1}, {0, 2}});

    CHECK_THROWS_AS(split_join(Graph({}, {})), DomainError);
}

TEST_CASE("rational indecomposability examples") {
    for (std::size_t r = 1; r <= 5; ++r) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < r; ++i) labels.push_back(std::string(1, char('a' + i)));
        CHECK(is_rationally_indecomposable(Graph(labels, {}))); // free 2-step
    }
    CHECK(!is_rationally_indecomposable(Graph({"a", "b"}, {{0, 1}})));
    CHECK(!is_rationally_indecomposable(path3()));
}

TEST_CASE("join detection agrees with bipartition brute force up to 5 vertices") {
    for (std::size_t n = 1; n <= 5; ++n) {
        unsigned pairs = unsigned(n * (n - 1) / 2);
        for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
            Graph g = graph_from_mask(n, mask);
            auto sj = split_join(g);
            CHECK(sj.has_value() == oracles::is_join_bruteforce(g));
            if (sj) {
                // every cross-part pair is an edge
                for (std::size_t p = 0; p < sj->parts.size(); ++p)
                    for (std::size_t q = p + 1; q < sj->parts.size(); ++q)
                        for (std::size_t v : sj->parts[p])
                            for (std::size_t w : sj->parts[q]) CHECK(g.has_edge(v, w));
                // parts cover the vertex set exactly once
                std::size_t covered = 0;
                for (const auto& part : sj->parts) covered += part.size();
                CHECK(covered == n);
                // each part is itself join-indecomposable
                for (const auto& part : sj->parts)
                    CHECK(!oracles::is_join_bruteforce(g.induced(part)));
            }
        }
    }
}
