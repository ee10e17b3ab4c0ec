#include "doctest.h"

#include <cmath>

#include "qwalk/evolution.hpp"
#include "support.hpp"

using namespace qwalk;

namespace {

Rank rank_of(const ConfigurationSpace& s, std::vector<int> occ) {
    return s.rank(std::span<const int>(occ));
}

}  // namespace

TEST_CASE("single walker hop on the 3-cycle") {
    const auto g = build_named(NamedGraph::cycle, 3);
    const ConfigurationSpace s(1, 3);
    AmplitudeTable t(1, 3, 2);
    t.add(0, rank_of(s, {1, 0, 0}), 1.0);
    const auto out = apply_conditional_shift(t, g, coin_matrix(2));
    REQUIRE(out.size() == 2);
    const double h = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < 2; ++j) {
        CHECK(out.entries()[j].chirality == j);
        CHECK(out.entries()[j].rank == rank_of(s, {0, 1, 0}));
        CHECK(std::abs(out.entries()[j].amplitude - Complex(h, 0)) < 1e-15);
    }
}

TEST_CASE("bosonic enhancement on a doubly occupied vertex") {
    const auto g = build_named(NamedGraph::cycle, 3);
    const ConfigurationSpace s(2, 3);
    AmplitudeTable t(2, 3, 2);
    t.add(0, rank_of(s, {2, 0, 0}), 1.0);
    const auto out = apply_conditional_shift(t, g, coin_matrix(2));
    REQUIRE(out.size() == 2);
    for (const auto& e : out.entries()) {
        CHECK(e.rank == rank_of(s, {1, 1, 0}));
        CHECK(std::abs(e.amplitude - Complex(1.0, 0)) < 1e-15);  // sqrt(2) * 1/sqrt(2)
    }
}

TEST_CASE("empty component and unoccupied sources contribute nothing") {
    GraphSpec g;
    g.vertices = 3;
    g.components = {{}, {{1, 2}, {2, 1}}};
    const ConfigurationSpace s(1, 3);
    AmplitudeTable t(1, 3, 2);
    t.add(0, rank_of(s, {1, 0, 0}), 1.0);
    CHECK(apply_conditional_shift(t, g, coin_matrix(2)).empty());
    AmplitudeTable u(1, 3, 2);
    u.add(1, rank_of(s, {0, 0, 1}), 1.0);
    CHECK(apply_conditional_shift(u, g, coin_matrix(2)).empty());
}

TEST_CASE("double coin factor squares the coin entry") {
    const auto g = build_named(NamedGraph::cycle, 3);
    const ConfigurationSpace s(1, 3);
    AmplitudeTable t(1, 3, 2);
    t.add(1, rank_of(s, {1, 0, 0}), 1.0);
    ShiftOptions o;
    o.double_coin_factor = true;
    const auto out = apply_conditional_shift(t, g, coin_matrix(2), o);
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out.entries()[0].amplitude - Complex(0.5, 0)) < 1e-15);
    CHECK(std::abs(out.entries()[1].amplitude - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("steps=0 returns the initial state with step-0 observables") {
    const auto init = qtest::two_term_state();
    const auto r = run(init, build_named(NamedGraph::cycle, 10), coin_matrix(2), 0, {0});
    CHECK(r.final_state == init);
    CHECK(r.reports.empty());
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].step == 0);
}

TEST_CASE("norm, conservation and compaction through a run") {
    for (auto name : {NamedGraph::cycle, NamedGraph::double_hexagon, NamedGraph::petersen_circulant}) {
        const auto g = build_named(name, 10);
        const int d = g.coin_order();
        auto init = qtest::random_state(4, 10, d, 6, 3);
        RunHooks hooks;
        const ConfigurationSpace space(4, 10);
        bool ok = true;
        hooks.on_state = [&](std::int64_t, const AmplitudeTable& t) {
            ok = ok && std::abs(t.squared_norm() - 1.0) <= 1e-12;
            for (const auto& e : t.entries()) {
                ok = ok && e.rank < space.size() && space.unrank(e.rank).total() == 4 &&
                     std::abs(e.amplitude) >= 1e-14;
            }
        };
        run(init, g, coin_matrix(d), 40, {}, {}, hooks);
        CHECK(ok);
    }
}

TEST_CASE("step reports are identical across thread counts") {
    const auto g = build_named(NamedGraph::petersen_circulant, 10);
    const auto init = qtest::random_state(6, 10, 4, 4, 11);
    std::vector<RunResult> results;
    for (int threads : {1, 2, 4}) {
        RunOptions o;
        o.shift.threads = threads;
        results.push_back(run(init, g, coin_matrix(4), 12, {}, o));
    }
    for (std::size_t k = 1; k < results.size(); ++k) {
        CHECK(results[k].final_state == results[0].final_state);
        REQUIRE(results[k].reports.size() == results[0].reports.size());
        for (std::size_t i = 0; i < results[0].reports.size(); ++i) {
            const auto& a = results[0].reports[i];
            const auto& b = results[k].reports[i];
            CHECK(a.pre_norm == b.pre_norm);
            CHECK(a.norm_factor == b.norm_factor);
            CHECK(a.entries == b.entries);
            CHECK(a.effective_dimension == b.effective_dimension);
        }
    }
}

TEST_CASE("split run equals uninterrupted run") {
    const auto g = build_named(NamedGraph::cycle, 10);
    const auto init = qtest::two_term_state(5, 10);
    const auto whole = run(init, g, coin_matrix(2), 20, {});
    const auto first = run(init, g, coin_matrix(2), 8, {});
    const auto rest = run(first.final_state, g, coin_matrix(2), 12, {}, {}, {}, 8);
    CHECK(rest.final_state == whole.final_state);
    REQUIRE(rest.reports.size() == 12);
    CHECK(rest.reports.front().step == 9);
    CHECK(rest.reports.back().effective_dimension == whole.reports.back().effective_dimension);
}

TEST_CASE("step index scale multiplies reported steps") {
    const auto g = build_named(NamedGraph::cycle, 4);
    const auto init = qtest::random_state(2, 4, 2, 3, 5);
    RunOptions o;
    o.step_index_scale = 2;
    const auto r = run(init, g, coin_matrix(2), 3, {0, 4, 6}, o);
    REQUIRE(r.reports.size() == 3);
    CHECK(r.reports[0].step == 2);
    CHECK(r.reports[2].step == 6);
    REQUIRE(r.records.size() == 3);
    CHECK(r.records[1].step == 4);
}
