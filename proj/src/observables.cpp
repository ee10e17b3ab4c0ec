#include "qwalk/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

void check_vertex(const AmplitudeTable& t, int vertex) {
    if (vertex < 1 || vertex > t.vertices())
        throw Error("vertex " + std::to_string(vertex) + " outside 1.." +
                    std::to_string(t.vertices()));
}

// P_l = |C_l|^2 / <psi|psi>. Dividing by the stored norm keeps expectation
// values free of the rounding left by the last normalization.
std::vector<RankWeight> probabilities(const AmplitudeTable& t) {
    auto w = configuration_weights(t);
    double total = 0.0;
    for (const auto& rw : w) total += rw.weight;
    if (!(total > 0.0)) throw Error("observables need a state with nonzero weight");
    for (auto& rw : w) rw.weight /= total;
    return w;
}

// Q_n(alpha) for every vertex: [alpha][n].
std::vector<std::vector<double>> occupancy_histograms(const AmplitudeTable& t,
                                                      const ConfigurationSpace& space) {
    const int m = t.vertices();
    std::vector<std::vector<double>> q(m, std::vector<double>(t.particles() + 1, 0.0));
    std::vector<int> occ(m);
    for (const auto& rw : probabilities(t)) {
        space.unrank(rw.rank, occ);
        for (int a = 0; a < m; ++a) q[a][occ[a]] += rw.weight;
    }
    return q;
}

double ipow(double base, int q) {
    double r = 1.0;
    for (int i = 0; i < q; ++i) r *= base;
    return r;
}

int mode_count(const AmplitudeTable& t, int modes) { return modes > 0 ? modes : t.particles(); }

PhasePoint phase_from_histogram(const std::vector<std::vector<double>>& q, int particles,
                                int mode, int modes) {
    const double phi = 2.0 * std::numbers::pi * mode / modes;
    PhasePoint out;
    for (std::size_t a = 0; a < q.size(); ++a) {
        const double position = static_cast<double>(a + 1);
        const double c = std::cos(phi * position);
        const double s = std::sin(phi * position);
        const double c2 = std::cos(2.0 * phi * position);
        for (int n = 0; n <= particles; ++n) {
            const double w = q[a][n];
            if (w == 0.0) continue;
            const double base = w * stirling_weight(n);
            const double compositions = composition_count(n, modes);
            out.x += base * compositions * c;
            out.p += base * compositions * s;
            double e = 0.0;
            for (int k = 0; k <= n; ++k)
                e += composition_count(n - k, modes - 1) * (k + 0.5 - c2);
            out.energy += base * e;
        }
    }
    return out;
}

double envelope(int particles, int vertices, int n) {
    const double num = static_cast<double>(
        vertices > 1 ? space_dimension(particles - n, vertices - 1) : WideCount(n == particles));
    const double den = static_cast<double>(space_dimension(particles, vertices));
    return num / (vertices * den);
}

}  // namespace

double stirling_weight(int n) {
    if (n <= 1) return 1.0;
    double r = 1.0;
    for (int i = 1; i <= n; ++i) r *= static_cast<double>(i) / n;
    return r * r;
}

double composition_count(int n, int k) {
    if (n < 0 || k < 0) return 0.0;
    if (k == 0) return n == 0 ? 1.0 : 0.0;
    return static_cast<double>(space_dimension(n, k));
}

double config_probability(const AmplitudeTable& t, Rank rank) {
    const ConfigurationSpace space(t.particles(), t.vertices());
    if (rank >= space.size()) throw Error("config_probability: rank out of range");
    double p = 0.0;
    const auto& es = t.entries();
    for (int j = 0; j < t.coin_order(); ++j) {
        const auto it = std::lower_bound(es.begin(), es.end(), std::pair{j, rank},
                                         [](const AmplitudeEntry& e, const std::pair<int, Rank>& k) {
                                             return e.chirality != k.first ? e.chirality < k.first
                                                                           : e.rank < k.second;
                                         });
        if (it != es.end() && it->chirality == j && it->rank == rank) p += std::norm(it->amplitude);
    }
    return p == 0.0 ? 0.0 : p / t.squared_norm();
}

double vertex_moment(const AmplitudeTable& t, int vertex, int q) {
    check_vertex(t, vertex);
    if (q < 1) throw Error("vertex_moment: order q must be positive");
    const ConfigurationSpace space(t.particles(), t.vertices());
    std::vector<int> occ(t.vertices());
    double sum = 0.0;
    for (const auto& rw : probabilities(t)) {
        space.unrank(rw.rank, occ);
        sum += ipow(occ[vertex - 1], q) * rw.weight;
    }
    return sum;
}

std::optional<double> g2(const AmplitudeTable& t, int a, int b, double floor) {
    check_vertex(t, a);
    check_vertex(t, b);
    const ConfigurationSpace space(t.particles(), t.vertices());
    std::vector<int> occ(t.vertices());
    double na = 0.0, nb = 0.0, pair = 0.0;
    for (const auto& rw : probabilities(t)) {
        space.unrank(rw.rank, occ);
        const double x = occ[a - 1];
        const double y = occ[b - 1];
        na += x * rw.weight;
        nb += y * rw.weight;
        pair += x * (y - (a == b ? 1.0 : 0.0)) * rw.weight;
    }
    const double den = na * nb;
    if (den < floor) return std::nullopt;
    return pair / den;
}

CountingStatistics counting_statistics(const AmplitudeTable& t, int vertex, CountingMode mode) {
    check_vertex(t, vertex);
    const ConfigurationSpace space(t.particles(), t.vertices());
    const int n = t.particles();
    CountingStatistics out;
    out.occupancy.assign(n + 1, 0.0);
    out.weighted.assign(n + 1, 0.0);
    std::vector<int> occ(t.vertices());
    double total = 0.0;
    for (const auto& rw : probabilities(t)) {
        space.unrank(rw.rank, occ);
        out.occupancy[occ[vertex - 1]] += rw.weight;
        total += rw.weight;
    }
    for (int k = 0; k <= n; ++k) {
        const double source = mode == CountingMode::restricted ? out.occupancy[k] : total;
        out.weighted[k] = source * envelope(n, t.vertices(), k);
    }
    return out;
}

PhasePoint phase_space(const AmplitudeTable& t, int mode, int modes) {
    const int count = mode_count(t, modes);
    if (mode < 1 || mode > count)
        throw Error("phase_space: mode " + std::to_string(mode) + " outside 1.." +
                    std::to_string(count));
    const ConfigurationSpace space(t.particles(), t.vertices());
    return phase_from_histogram(occupancy_histograms(t, space), t.particles(), mode, count);
}

ObservableRecord compute_record(const AmplitudeTable& t, std::int64_t step,
                                const ObservableOptions& options) {
    const int m = t.vertices();
    const int n = t.particles();
    const ConfigurationSpace space(n, m);
    const auto weights = probabilities(t);

    ObservableRecord rec;
    rec.step = step;
    rec.occupancy.assign(m, std::vector<double>(n + 1, 0.0));
    std::vector<double> pair(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<int> occ(m);
    auto& summary = rec.configurations;
    double sum_sq = 0.0;
    for (const auto& rw : weights) {
        space.unrank(rw.rank, occ);
        const double w = rw.weight;
        summary.total += w;
        sum_sq += w * w;
        if (w > summary.max_probability) {
            summary.max_probability = w;
            summary.argmax = rw.rank;
        }
        summary.entropy -= w * std::log(w);
        if (w > options.dimension_tolerance) ++rec.effective_dimension;
        for (int a = 0; a < m; ++a) {
            rec.occupancy[a][occ[a]] += w;
            if (occ[a] == 0) continue;
            for (int b = a + 1; b < m; ++b) pair[a * m + b] += w * occ[a] * occ[b];
        }
    }
    summary.participation = sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;

    rec.densities.assign(m, 0.0);
    rec.moment_orders = options.moments;
    rec.moments.assign(options.moments.size(), std::vector<double>(m, 0.0));
    std::vector<double> factorial2(m, 0.0);  // <n(n-1)>
    for (int a = 0; a < m; ++a) {
        for (int k = 0; k <= n; ++k) {
            const double w = rec.occupancy[a][k];
            rec.densities[a] += k * w;
            factorial2[a] += static_cast<double>(k) * (k - 1) * w;
            for (std::size_t qi = 0; qi < options.moments.size(); ++qi)
                rec.moments[qi][a] += ipow(k, options.moments[qi]) * w;
        }
    }

    rec.g2.assign(static_cast<std::size_t>(m) * m, std::nullopt);
    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            const double den = rec.densities[a] * rec.densities[b];
            if (den < options.g2_floor) continue;
            const double num = (a == b) ? factorial2[a] : pair[a * m + b];
            rec.g2[a * m + b] = num / den;
            rec.g2[b * m + a] = num / den;
        }
    }

    rec.counting.assign(m, std::vector<double>(n + 1, 0.0));
    rec.occupancy_mean.assign(n + 1, 0.0);
    rec.counting_mean.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double env = envelope(n, m, k);
        for (int a = 0; a < m; ++a) {
            const double source =
                options.counting == CountingMode::restricted ? rec.occupancy[a][k] : summary.total;
            rec.counting[a][k] = source * env;
            rec.occupancy_mean[k] += rec.occupancy[a][k] / m;
            rec.counting_mean[k] += rec.counting[a][k] / m;
        }
    }

    const int modes = mode_count(t, options.modes);
    rec.phase.reserve(modes);
    for (int eta = 1; eta <= modes; ++eta)
        rec.phase.push_back(phase_from_histogram(rec.occupancy, n, eta, modes));
    return rec;
}

RegimeChangeReport detect_regime_change(const std::vector<DimensionSample>& series) {
    if (series.empty()) throw Error("detect_regime_change: empty series");
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].step <= series[i - 1].step)
            throw Error("detect_regime_change: steps must be strictly increasing");

    // Earliest index whose suffix holds at most two distinct values.
    std::size_t start = series.size();
    std::vector<std::uint64_t> seen;
    while (start > 0) {
        const auto v = series[start - 1].dimension;
        if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
            if (seen.size() == 2) break;
            seen.push_back(v);
        }
        --start;
    }

    RegimeChangeReport report;
    for (std::size_t i = start; i < series.size(); ++i) {
        std::map<std::uint64_t, int> counts;
        for (std::size_t k = i; k < series.size(); ++k) ++counts[series[k].dimension];
        const bool ok = counts.size() == 1 ||
                        std::all_of(counts.begin(), counts.end(),
                                    [](const auto& kv) { return kv.second >= 2; });
        if (!ok) continue;
        if (series.size() - i <= 3) break;
        report.detected = true;
        report.change_step = series[i].step;
        for (const auto& kv : counts) report.terminal_values.push_back(kv.first);
        break;
    }
    return report;
}

}  // namespace qwalk
