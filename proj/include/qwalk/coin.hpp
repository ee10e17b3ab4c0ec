#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;

// d x d coin tossing operator, row-major: at(j, k) = h_jk with 0-based j, k.
class CoinMatrix {
public:
    CoinMatrix() = default;
    CoinMatrix(int order, std::vector<Complex> entries);

    int order() const noexcept { return order_; }
    const Complex& at(int j, int k) const { return h_[j * order_ + k]; }
    const std::vector<Complex>& entries() const noexcept { return h_; }

    // Applies h to a coin vector of length d.
    std::vector<Complex> apply(const std::vector<Complex>& v) const;

private:
    int order_ = 0;
    std::vector<Complex> h_;
};

// d = 2: real Hadamard. d > 2: h_jk = exp(2 pi i (j-1)(k-1)/d) / sqrt(d).
CoinMatrix coin_matrix(int d);

// Empty when the matrix is unitary within `tol` and every entry has
// modulus 1/sqrt(d) within `tol`.
std::vector<std::string> check_coin(const CoinMatrix& c, double tol = 1e-12);

}  // namespace qwalk
