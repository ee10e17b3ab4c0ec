#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/statespace.hpp"

namespace qtest {

// Two-term initial state: 12 bosons on vertex 3 with chirality 1 (amplitude -i)
// and on vertex 5 with chirality 2 (amplitude 1), normalized.
inline qwalk::AmplitudeTable two_term_state(int n = 12, int m = 10) {
    const qwalk::ConfigurationSpace space(n, m);
    std::vector<int> a(m, 0), b(m, 0);
    a[2] = n;
    b[4] = n;
    qwalk::AmplitudeTable t(n, m, 2);
    t.add(0, space.rank(std::span<const int>(a)), {0.0, -1.0});
    t.add(1, space.rank(std::span<const int>(b)), {1.0, 0.0});
    return qwalk::normalize(t).table;
}

// Normalized state with `terms` random entries over the whole space.
inline qwalk::AmplitudeTable random_state(int n, int m, int d, int terms, unsigned seed) {
    const qwalk::ConfigurationSpace space(n, m);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<qwalk::Rank> pick_rank(0, space.size() - 1);
    std::uniform_int_distribution<int> pick_j(0, d - 1);
    std::normal_distribution<double> gauss;
    qwalk::AmplitudeTable t(n, m, d);
    for (int i = 0; i < terms; ++i) t.add(pick_j(rng), pick_rank(rng), {gauss(rng), gauss(rng)});
    return qwalk::normalize(t).table;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("qwalk_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Weak compositions of n into k parts.
inline void compositions(int n, int k, std::vector<int>& cur, const std::function<void()>& visit) {
    if (static_cast<int>(cur.size()) == k - 1) {
        cur.push_back(n);
        visit();
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= n; ++v) {
        cur.push_back(v);
        compositions(n - v, k, cur, visit);
        cur.pop_back();
    }
}

// Phase-space point by explicit enumeration of every mode composition.
inline qwalk::PhasePoint brute_phase(const qwalk::AmplitudeTable& t, int eta) {
    const int n_total = t.particles();
    const qwalk::ConfigurationSpace space(n_total, t.vertices());
    const double phi = 2.0 * std::numbers::pi * eta / n_total;
    qwalk::PhasePoint out;
    for (const auto& w : qwalk::configuration_weights(t)) {
        const auto cfg = space.unrank(w.rank);
        for (int a = 0; a < t.vertices(); ++a) {
            const int n = cfg.occupations[a];
            double fact = 1.0;
            for (int i = 2; i <= n; ++i) fact *= i;
            const double weight = n <= 1 ? 1.0 : std::pow(fact / std::pow(double(n), n), 2);
            const double pos = a + 1;
            std::vector<int> cur;
            compositions(n, n_total, cur, [&] {
                out.x += w.weight * weight * std::cos(phi * pos);
                out.p += w.weight * weight * std::sin(phi * pos);
                out.energy += w.weight * weight * (cur[eta - 1] + 0.5 - std::cos(2 * phi * pos));
            });
        }
    }
    return out;
}

}  // namespace qtest
