#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qwalk/statespace.hpp"

namespace qwalk {

// Counting-statistics reading. `restricted` sums the amplitudes of the
// configurations with n_alpha = n; `literal` scales the total weight by the
// combinatorial envelope alone.
enum class CountingMode { restricted, literal };

struct ObservableOptions {
    std::vector<int> moments{1, 2, 3};
    CountingMode counting = CountingMode::restricted;
    // g2 is undefined when <n_a><n_b> falls below this.
    double g2_floor = 1e-15;
    // Modes of the phase-space evaluation; 0 means one per particle.
    int modes = 0;
    double dimension_tolerance = 1e-24;
};

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
    double energy = 0.0;
};

struct ConfigurationSummary {
    double total = 0.0;        // sum of P_l
    double max_probability = 0.0;
    Rank argmax = 0;
    double participation = 0.0;  // 1 / sum P_l^2
    double entropy = 0.0;        // -sum P_l ln P_l
};

struct ObservableRecord {
    std::int64_t step = 0;
    std::vector<double> densities;                // <n_alpha>, alpha = 1..M
    std::vector<int> moment_orders;
    std::vector<std::vector<double>> moments;     // [q index][alpha]
    std::vector<std::optional<double>> g2;        // row-major M x M
    std::vector<std::vector<double>> occupancy;   // Q_n(alpha): [alpha][n]
    std::vector<std::vector<double>> counting;    // P_n(alpha): [alpha][n]
    std::vector<double> occupancy_mean;           // Q_n averaged over vertices
    std::vector<double> counting_mean;
    std::vector<PhasePoint> phase;                // per mode 1..modes
    ConfigurationSummary configurations;
    Rank effective_dimension = 0;

    const std::optional<double>& g2_at(int a, int b) const {
        return g2[static_cast<std::size_t>(a - 1) * densities.size() + (b - 1)];
    }
};

// Single-quantity evaluations on a normalized table. Vertices and modes are
// 1-based.
double config_probability(const AmplitudeTable& t, Rank rank);
double vertex_moment(const AmplitudeTable& t, int vertex, int q);
std::optional<double> g2(const AmplitudeTable& t, int a, int b, double floor = 1e-15);

struct CountingStatistics {
    std::vector<double> occupancy;  // Q_n, n = 0..N
    std::vector<double> weighted;   // P_n under the chosen mode
};
CountingStatistics counting_statistics(const AmplitudeTable& t, int vertex,
                                       CountingMode mode = CountingMode::restricted);

PhasePoint phase_space(const AmplitudeTable& t, int mode, int modes = 0);

// (n! / n^n)^2 with W(0) = W(1) = 1.
double stirling_weight(int n);
// Weak compositions of n into k parts: binomial(n+k-1, n); 1 for n = k = 0.
double composition_count(int n, int k);

// All observables in one pass over the configuration weights.
ObservableRecord compute_record(const AmplitudeTable& t, std::int64_t step,
                                const ObservableOptions& options = {});

struct RegimeChangeReport {
    bool detected = false;
    std::int64_t change_step = 0;
    std::vector<std::uint64_t> terminal_values;
    const char* rule = "terminal-set<=2,each-value>=2,tail>3";
};

struct DimensionSample {
    std::int64_t step;
    std::uint64_t dimension;
};

// Smallest step r0 from which the dimension series takes at most two values,
// each at least twice when there are two. No detection when the qualifying
// tail has three samples or fewer.
RegimeChangeReport detect_regime_change(const std::vector<DimensionSample>& series);

}  // namespace qwalk
