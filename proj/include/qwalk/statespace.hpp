#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

using Rank = std::uint64_t;
using WideCount = unsigned __int128;

std::string to_string(WideCount v);

// binomial(M+N-1, N), exact for N, M <= 64. Throws on M = 0 or negative N.
WideCount space_dimension(int particles, int vertices);

// Occupation numbers n_1..n_M stored 0-based.
struct Configuration {
    std::vector<int> occupations;

    int total() const;
    friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Weak compositions of N into M parts, ordered lexicographically with larger
// leading occupations first: rank 0 is (N,0,...,0), the last rank (0,...,0,N).
class ConfigurationSpace {
public:
    ConfigurationSpace(int particles, int vertices);

    int particles() const noexcept { return n_; }
    int vertices() const noexcept { return m_; }
    Rank size() const noexcept { return size_; }

    // D(n, m) for n <= N, m <= M.
    Rank count(int n, int m) const { return table_[n * (m_ + 1) + m]; }

    Rank rank(const Configuration& c) const;
    Rank rank(std::span<const int> occupations) const;
    Configuration unrank(Rank r) const;
    void unrank(Rank r, std::span<int> out) const;

private:
    int n_;
    int m_;
    Rank size_;
    std::vector<Rank> table_;
    // offset_[(alpha * (N+1) + remaining) * (N+1) + value]: ranks skipped by
    // placing `value` at vertex alpha with `remaining` particles left.
    std::vector<Rank> offset_;
};

// One stored amplitude; chirality is 0-based.
struct AmplitudeEntry {
    int chirality = 0;
    Rank rank = 0;
    Complex amplitude;

    friend bool operator==(const AmplitudeEntry&, const AmplitudeEntry&) = default;
};

// Sparse GMP state: entries sorted by (chirality, rank), unique keys.
class AmplitudeTable {
public:
    AmplitudeTable() = default;
    AmplitudeTable(int particles, int vertices, int coin_order);

    int particles() const noexcept { return n_; }
    int vertices() const noexcept { return m_; }
    int coin_order() const noexcept { return d_; }

    const std::vector<AmplitudeEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    // Norm factor applied by the last normalize (1 for a fresh table).
    double norm_factor() const noexcept { return norm_; }
    void set_norm_factor(double k) noexcept { norm_ = k; }

    // Adds to the amplitude at (chirality, rank), creating it if needed.
    void add(int chirality, Rank rank, Complex amplitude);

    // Takes ownership of entries already sorted by key with unique keys.
    void assign_sorted(std::vector<AmplitudeEntry> entries);

    // Sum of |C|^2 in key order.
    double squared_norm() const;

    // Removes entries with modulus below `threshold`.
    void compact(double threshold);

    friend bool operator==(const AmplitudeTable&, const AmplitudeTable&) = default;

private:
    int n_ = 0;
    int m_ = 0;
    int d_ = 0;
    double norm_ = 1.0;
    std::vector<AmplitudeEntry> entries_;
};

// Returns K = sqrt(sum |C|^2) and the table scaled by 1/K. Throws when the
// table carries no weight.
struct Normalized {
    double norm;
    AmplitudeTable table;
};
Normalized normalize(const AmplitudeTable& t);
// In-place variant used by the evolution loop.
double normalize_in_place(AmplitudeTable& t);

// Configuration weights P_l = sum_j |C_jl|^2, sorted by rank, zero weights
// omitted. Sums over chiralities in ascending chirality order.
struct RankWeight {
    Rank rank;
    double weight;
};
std::vector<RankWeight> configuration_weights(const AmplitudeTable& t);

// Number of distinct ranks whose weight exceeds `tol`.
Rank effective_dimension(const AmplitudeTable& t, double tol = 1e-24);

}  // namespace qwalk
