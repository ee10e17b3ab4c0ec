#include "qwalk/oracle.hpp"

#include <cmath>

#include "qwalk/error.hpp"
#include "qwalk/evolution.hpp"

namespace qwalk::oracle {

namespace {

void enumerate(int remaining, std::vector<int>& prefix, int vertices,
               std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == vertices - 1) {
        prefix.push_back(remaining);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        prefix.push_back(v);
        enumerate(remaining - v, prefix, vertices, out);
        prefix.pop_back();
    }
}

void normalize(std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    const double k = std::sqrt(s);
    if (!(k > 0.0)) throw Error("oracle: state vanished");
    for (auto& x : v) x /= k;
}

}  // namespace

std::vector<Complex> DenseOperator::apply(const std::vector<Complex>& v) const {
    const std::size_t n = dimension();
    std::vector<Complex> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        Complex s{};
        for (std::size_t c = 0; c < n; ++c) s += matrix[r * n + c] * v[c];
        out[r] = s;
    }
    return out;
}

DenseOperator dense_step_matrix(const GraphSpec& g, const CoinMatrix& c, int particles) {
    const int m = g.vertices;
    const int d = g.coin_order();
    if (c.order() != d) throw Error("oracle: coin order differs from graph coin order");
    if (particles < 0 || m < 1) throw Error("oracle: invalid particle or vertex count");
    const auto full = space_dimension(particles, m) * static_cast<unsigned>(d);
    if (full > kMaxDimension)
        throw Error("oracle: dimension " + to_string(full) + " exceeds the dense guard of " +
                    std::to_string(kMaxDimension));

    DenseOperator op;
    op.particles = particles;
    op.vertices = m;
    op.coin_order = d;
    std::vector<int> prefix;
    if (m == 1) {
        op.configs.push_back({particles});
    } else {
        enumerate(particles, prefix, m, op.configs);
    }
    for (std::size_t i = 0; i < op.configs.size(); ++i) op.position[op.configs[i]] = i;

    // A^k as dense matrices, adjacency[k][nu][mu] = 1 for an edge mu -> nu.
    std::vector<std::vector<std::vector<int>>> adjacency(
        d, std::vector<std::vector<int>>(m, std::vector<int>(m, 0)));
    for (int k = 0; k < d; ++k)
        for (const auto& e : g.components[k]) adjacency[k][e.to - 1][e.from - 1] = 1;

    const std::size_t configs = op.configs.size();
    const std::size_t n = op.dimension();
    op.matrix.assign(n * n, Complex{});
    for (int k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < configs; ++l) {
            const auto& src = op.configs[l];
            for (int nu = 0; nu < m; ++nu) {
                for (int mu = 0; mu < m; ++mu) {
                    if (!adjacency[k][nu][mu] || src[mu] == 0) continue;
                    auto dst = src;
                    const double amp = std::sqrt(static_cast<double>(src[mu]) * (src[nu] + 1));
                    dst[mu] -= 1;
                    dst[nu] += 1;
                    const std::size_t l1 = op.position.at(dst);
                    for (int j = 0; j < d; ++j)
                        op.matrix[(j * configs + l1) * n + (k * configs + l)] += c.at(j, k) * amp;
                }
            }
        }
    }
    return op;
}

std::vector<Complex> to_dense(const DenseOperator& op, const AmplitudeTable& t) {
    const ConfigurationSpace space(t.particles(), t.vertices());
    std::vector<Complex> v(op.dimension());
    for (const auto& e : t.entries()) {
        const auto c = space.unrank(e.rank);
        v[e.chirality * op.configs.size() + op.position.at(c.occupations)] = e.amplitude;
    }
    return v;
}

double compare_evolution(const GraphSpec& g, const CoinMatrix& c, const AmplitudeTable& init,
                         int steps) {
    if (steps < 0) throw Error("oracle: step count must be non-negative");
    if (init.vertices() != g.vertices || init.coin_order() != g.coin_order())
        throw Error("oracle: initial state does not match graph dimensions");
    const auto op = dense_step_matrix(g, c, init.particles());

    auto sparse = normalize(init).table;
    auto dense = to_dense(op, init);
    normalize(dense);

    auto deviation = [&] {
        const auto s = to_dense(op, sparse);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - dense[i]));
        return worst;
    };

    double worst = deviation();
    ShiftKernel kernel(g, c, init.particles());
    for (int r = 0; r < steps; ++r) {
        sparse = kernel.apply(sparse);
        normalize_in_place(sparse);
        dense = op.apply(dense);
        normalize(dense);
        worst = std::max(worst, deviation());
    }
    return worst;
}

}  // namespace qwalk::oracle
