#include "doctest.h"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

namespace {

bool has(const Component& c, Edge e) { return std::find(c.begin(), c.end(), e) != c.end(); }

std::string contains_any(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return s;
    return {};
}

}  // namespace

TEST_CASE("cycle components at M=4") {
    const auto g = build_named(NamedGraph::cycle, 4);
    REQUIRE(g.coin_order() == 2);
    const Component want{{1, 2}, {2, 3}, {3, 4}, {4, 1}};
    CHECK(g.components[0] == want);
    for (const auto& e : want) CHECK(has(g.components[1], {e.to, e.from}));
}

TEST_CASE("petersen_circulant third component is the antipodal matching") {
    const auto g = build_named(NamedGraph::petersen_circulant, 10);
    REQUIRE(g.coin_order() == 4);
    const Component want{{1, 6}, {2, 7}, {3, 8}, {4, 9}, {5, 10},
                         {6, 1}, {7, 2}, {8, 3}, {9, 4}, {10, 5}};
    CHECK(g.components[2] == want);
    CHECK(g.components[3] == want);
    CHECK(validate_decomposition(g).ok());
}

TEST_CASE("petersen_circulant edge sets by enumeration") {
    const auto g = build_named(NamedGraph::petersen_circulant, 10);
    auto wrap = [](int v) { return (v - 1 + 10) % 10 + 1; };
    // Component k holds mu -> nu with mu - nu = -1, +1, -5, +5.
    const int diffs[4] = {-1, 1, -5, 5};
    for (int k = 0; k < 4; ++k) {
        std::set<Edge> want;
        for (int mu = 1; mu <= 10; ++mu) want.insert({mu, wrap(mu - diffs[k])});
        CHECK(std::set<Edge>(g.components[k].begin(), g.components[k].end()) == want);
    }
    const auto adj = undirected_adjacency(g);
    for (int a = 0; a < 10; ++a) {
        int degree = 0;
        for (int b = 0; b < 10; ++b) {
            CHECK(adj[a][b] == adj[b][a]);
            degree += adj[a][b];
        }
        CHECK(degree == 3);
        const int mu = a + 1;
        CHECK(adj[a][wrap(mu - 1) - 1] == 1);
        CHECK(adj[a][wrap(mu + 1) - 1] == 1);
        CHECK(adj[a][wrap(mu + 5) - 1] == 1);
    }
}

TEST_CASE("cycle degrees at several sizes") {
    for (int m : {3, 4, 7, 10, 13}) {
        const auto g = build_named(NamedGraph::cycle, m);
        CHECK(validate_decomposition(g).ok());
        for (const auto& comp : g.components) {
            std::vector<int> in(m + 1, 0), out(m + 1, 0);
            for (const auto& e : comp) {
                ++out[e.from];
                ++in[e.to];
            }
            for (int v = 1; v <= m; ++v) {
                CHECK(in[v] == 1);
                CHECK(out[v] == 1);
            }
        }
        const auto adj = undirected_adjacency(g);
        for (int a = 0; a < m; ++a) {
            int degree = 0;
            for (int b = 0; b < m; ++b) degree += adj[a][b];
            CHECK(degree == 2);
        }
    }
}

TEST_CASE("built-in graphs validate and pairs are transposes") {
    for (auto name : {NamedGraph::cycle, NamedGraph::double_hexagon, NamedGraph::petersen_circulant}) {
        const auto g = build_named(name, 10);
        CHECK(validate_decomposition(g).ok());
        for (const auto& p : g.pairing) {
            std::set<Edge> flipped;
            for (const auto& e : g.components[p.first - 1]) flipped.insert({e.to, e.from});
            const auto& other = g.components[p.second - 1];
            CHECK(flipped == std::set<Edge>(other.begin(), other.end()));
        }
    }
}

TEST_CASE("double hexagon shares exactly one edge") {
    const auto g = build_named(NamedGraph::double_hexagon, 10);
    const auto adj = undirected_adjacency(g);
    int edges = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = a + 1; b < 10; ++b) edges += adj[a][b];
    CHECK(edges == 11);
    CHECK(adj[0][5] == 1);
}

TEST_CASE("build_named argument checks") {
    CHECK_THROWS_AS(build_named(NamedGraph::cycle, 2), ConfigError);
    CHECK_THROWS_AS(build_named(NamedGraph::petersen_circulant, 12), ConfigError);
    CHECK_THROWS_AS(build_named(NamedGraph::double_hexagon, 9), ConfigError);
    CHECK(parse_graph_name("cycle") == NamedGraph::cycle);
    CHECK_THROWS_AS(parse_graph_name("torus"), ConfigError);
}

TEST_CASE("load_graph round-trips a built graph") {
    const auto g = build_named(NamedGraph::cycle, 10);
    CHECK(load_graph(dump_graph(g)) == g);
    const auto p = build_named(NamedGraph::petersen_circulant, 10);
    CHECK(load_graph(dump_graph(p)) == p);
}

TEST_CASE("load_graph rejects self-loops and unpaired transposes") {
    const char* loop = R"({"M":3,"d":2,"components":[[[1,1],[2,3],[3,1]],[[1,1],[3,2],[1,3]]],"pairing":[[1,2]]})";
    try {
        load_graph(loop);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
    }
    const char* bad_pair = R"({"M":3,"d":2,"components":[[[1,2],[2,3],[3,1]],[[2,1],[3,2],[3,1]]],"pairing":[[1,2]]})";
    try {
        load_graph(bad_pair);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("pair (1,2) not transposed") != std::string::npos);
    }
    CHECK_THROWS_AS(load_graph("{not json"), ConfigError);
    CHECK_THROWS_AS(load_graph(R"({"M":3,"d":2,"components":[]})"), ConfigError);
}

TEST_CASE("validate_decomposition flags a missing edge") {
    auto g = build_named(NamedGraph::cycle, 10);
    g.components[1].pop_back();
    const auto r = validate_decomposition(g);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(contains_any(r.violations, "pair (1,2) not transposed").empty());
}

TEST_CASE("validate_decomposition reports endpoint, duplicate and symmetry problems") {
    GraphSpec g;
    g.vertices = 3;
    g.components = {{{1, 2}, {1, 2}, {2, 4}}};
    const auto r = validate_decomposition(g);
    CHECK_FALSE(contains_any(r.violations, "duplicate").empty());
    CHECK_FALSE(contains_any(r.violations, "outside").empty());

    GraphSpec h;
    h.vertices = 3;
    h.components = {{{1, 2}, {2, 3}, {3, 1}}};
    CHECK_FALSE(contains_any(validate_decomposition(h).violations, "not symmetric").empty());
}

TEST_CASE("swap_paired_components exchanges edge sets") {
    const auto g = build_named(NamedGraph::petersen_circulant, 10);
    const auto s = swap_paired_components(g);
    CHECK(s.components[0] == g.components[1]);
    CHECK(s.components[1] == g.components[0]);
    CHECK(s.components[2] == g.components[3]);
    CHECK(swap_paired_components(s) == g);
}
