#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qwalk/error.hpp"
#include "qwalk/statespace.hpp"
#include "support.hpp"

using namespace qwalk;

TEST_CASE("space dimensions") {
    CHECK(space_dimension(12, 10) == 293930);
    CHECK(space_dimension(0, 5) == 1);
    CHECK(space_dimension(2, 2) == 3);
    CHECK(to_string(space_dimension(64, 64)) == "11975573020964041433067793888190275875");
    CHECK_THROWS(space_dimension(1, 0));
    CHECK_THROWS(space_dimension(-1, 3));
}

TEST_CASE("Pascal recurrence") {
    for (int n = 1; n <= 30; ++n)
        for (int m = 2; m <= 30; ++m)
            CHECK(space_dimension(n, m) == space_dimension(n, m - 1) + space_dimension(n - 1, m));
}

TEST_CASE("rank order endpoints") {
    const ConfigurationSpace s(2, 2);
    CHECK(s.unrank(0).occupations == std::vector<int>{2, 0});
    CHECK(s.rank(Configuration{{2, 0}}) == 0);
    CHECK(s.unrank(1).occupations == std::vector<int>{1, 1});
    CHECK(s.unrank(s.size() - 1).occupations == std::vector<int>{0, 2});
}

TEST_CASE("rank order is lexicographic with larger leading occupations first") {
    const ConfigurationSpace s(3, 4);
    REQUIRE(s.size() == 20);
    for (Rank r = 0; r + 1 < s.size(); ++r) {
        CHECK(s.rank(s.unrank(r)) == r);
        CHECK(s.unrank(r).occupations > s.unrank(r + 1).occupations);
    }
}

TEST_CASE("rank/unrank bijection for every space up to 1e5 configurations") {
    std::size_t spaces = 0;
    for (int n = 0; n <= 40; ++n)
        for (int m = 1; m <= 40; ++m) {
            if (space_dimension(n, m) > 100000) continue;
            ++spaces;
            const ConfigurationSpace s(n, m);
            std::vector<int> buf(m);
            bool ok = true;
            for (Rank r = 0; r < s.size() && ok; ++r) {
                s.unrank(r, buf);
                ok = std::accumulate(buf.begin(), buf.end(), 0) == n &&
                     s.rank(std::span<const int>(buf)) == r;
            }
            CAPTURE(n);
            CAPTURE(m);
            CHECK(ok);
        }
    CHECK(spaces > 100);
}

TEST_CASE("rank rejects bad configurations") {
    const ConfigurationSpace s(3, 3);
    CHECK_THROWS(s.rank(Configuration{{1, 1}}));
    CHECK_THROWS(s.rank(Configuration{{1, 1, 0}}));
    CHECK_THROWS(s.unrank(s.size()));
}

TEST_CASE("normalize a single entry") {
    AmplitudeTable t(1, 3, 2);
    t.add(0, 0, {3, 4});
    const auto n = normalize(t);
    CHECK(n.norm == 5.0);
    CHECK(std::abs(n.table.entries()[0].amplitude - Complex(0.6, 0.8)) < 1e-15);
}

TEST_CASE("normalize the two-term state") {
    const ConfigurationSpace space(12, 10);
    AmplitudeTable t(12, 10, 2);
    std::vector<int> a(10, 0), b(10, 0);
    a[2] = 12;
    b[4] = 12;
    t.add(0, space.rank(std::span<const int>(a)), {0, -1});
    t.add(1, space.rank(std::span<const int>(b)), {1, 0});
    const auto n = normalize(t);
    CHECK(n.norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(n.table.entries()[0].amplitude - Complex(0, -s)) < 1e-15);
    CHECK(std::abs(n.table.entries()[1].amplitude - Complex(s, 0)) < 1e-15);
    CHECK(n.table.norm_factor() == n.norm);
}

TEST_CASE("normalize is idempotent") {
    const auto t = qtest::random_state(3, 4, 2, 15, 7);
    const auto again = normalize(t);
    CHECK(std::abs(again.norm - 1.0) < 1e-15);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(again.table.entries()[i].amplitude - t.entries()[i].amplitude) < 1e-15);
    CHECK_THROWS(normalize(AmplitudeTable(1, 2, 2)));
}

TEST_CASE("table ordering, compaction and weights") {
    AmplitudeTable t(2, 3, 2);
    t.add(1, 5, {0.5, 0});
    t.add(0, 7, {0.5, 0});
    t.add(0, 5, {0.5, 0});
    t.add(0, 5, {0.0, 0.5});
    t.add(1, 2, {1e-15, 0});
    REQUIRE(t.size() == 4);
    CHECK(t.entries()[0].chirality == 0);
    CHECK(t.entries()[0].rank == 5);
    CHECK(t.entries()[1].rank == 7);
    CHECK(t.entries()[2].rank == 2);
    t.compact(1e-14);
    CHECK(t.size() == 3);
    const auto w = configuration_weights(t);
    REQUIRE(w.size() == 2);
    CHECK(w[0].rank == 5);
    CHECK(w[0].weight == doctest::Approx(0.75));
    CHECK(effective_dimension(t) == 2);
    CHECK_THROWS(effective_dimension(t, -1.0));
}

TEST_CASE("two-term state has two configurations") {
    CHECK(effective_dimension(qtest::two_term_state()) == 2);
}
