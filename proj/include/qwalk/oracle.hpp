#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/statespace.hpp"

namespace qwalk::oracle {

// Largest d * D(N, M) the dense path accepts.
constexpr std::size_t kMaxDimension = 5000;

// Explicit conditional-shift matrix over the (chirality, configuration)
// basis, flattened as index = j * configs + position of the configuration in
// `configs` (ascending lexicographic order of occupation vectors).
struct DenseOperator {
    int particles = 0;
    int vertices = 0;
    int coin_order = 0;
    std::vector<std::vector<int>> configs;
    std::map<std::vector<int>, std::size_t> position;
    std::vector<Complex> matrix;  // row-major, dimension() x dimension()

    std::size_t dimension() const { return configs.size() * coin_order; }
    const Complex& at(std::size_t row, std::size_t col) const {
        return matrix[row * dimension() + col];
    }
    std::vector<Complex> apply(const std::vector<Complex>& v) const;
};

DenseOperator dense_step_matrix(const GraphSpec& g, const CoinMatrix& c, int particles);

// Dense vector of a sparse table in the operator's basis.
std::vector<Complex> to_dense(const DenseOperator& op, const AmplitudeTable& t);

// Max over steps 0..steps of the sup-norm difference between the sparse
// engine and the dense product, both normalized after every step.
double compare_evolution(const GraphSpec& g, const CoinMatrix& c, const AmplitudeTable& init,
                         int steps);

}  // namespace qwalk::oracle
