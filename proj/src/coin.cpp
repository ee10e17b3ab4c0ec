#include "qwalk/coin.hpp"

#include <cmath>
#include <numbers>

#include "qwalk/error.hpp"

namespace qwalk {

CoinMatrix::CoinMatrix(int order, std::vector<Complex> entries)
    : order_(order), h_(std::move(entries)) {
    if (order_ < 1) throw ConfigError("coin", "order must be at least 1");
    if (static_cast<int>(h_.size()) != order_ * order_)
        throw ConfigError("coin", "expected " + std::to_string(order_ * order_) + " entries");
}

std::vector<Complex> CoinMatrix::apply(const std::vector<Complex>& v) const {
    std::vector<Complex> out(order_);
    for (int j = 0; j < order_; ++j)
        for (int k = 0; k < order_; ++k) out[j] += at(j, k) * v[k];
    return out;
}

CoinMatrix coin_matrix(int d) {
    if (d < 1) throw ConfigError("coin", "order must be at least 1");
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<Complex> h(static_cast<std::size_t>(d) * d);
    if (d == 2) {
        h = {s, s, s, -s};
        return CoinMatrix(2, std::move(h));
    }
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            // Exact reduction of the exponent keeps real/imaginary zeros exact
            // for the quarter turns.
            const int p = (j * k) % d;
            if (4 * p == d) {
                h[j * d + k] = {0.0, s};
            } else if (2 * p == d) {
                h[j * d + k] = {-s, 0.0};
            } else if (4 * p == 3 * d) {
                h[j * d + k] = {0.0, -s};
            } else if (p == 0) {
                h[j * d + k] = {s, 0.0};
            } else {
                h[j * d + k] = std::polar(s, 2.0 * std::numbers::pi * p / d);
            }
        }
    }
    return CoinMatrix(d, std::move(h));
}

std::vector<std::string> check_coin(const CoinMatrix& c, double tol) {
    std::vector<std::string> problems;
    const int d = c.order();
    const double modulus = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            if (std::abs(std::abs(c.at(j, k)) - modulus) > tol)
                problems.push_back("entry (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                   ") modulus differs from 1/sqrt(d)");
            Complex dot = 0.0;
            for (int i = 0; i < d; ++i) dot += c.at(j, i) * std::conj(c.at(k, i));
            const Complex expected = (j == k) ? 1.0 : 0.0;
            if (std::abs(dot.real() - expected.real()) > tol || std::abs(dot.imag()) > tol)
                problems.push_back("h h^dagger differs from identity at (" + std::to_string(j + 1) +
                                   "," + std::to_string(k + 1) + ")");
        }
    }
    return problems;
}

}  // namespace qwalk
