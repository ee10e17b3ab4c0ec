#include "qwalk/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qwalk/error.hpp"

namespace qwalk {

std::string to_string(WideCount v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

// Pascal's triangle up to row 127 fits in 128 bits (C(127,63) < 2^127).
const std::vector<std::vector<WideCount>>& pascal() {
    static const auto rows = [] {
        std::vector<std::vector<WideCount>> p(128);
        for (int n = 0; n < 128; ++n) {
            p[n].assign(n + 1, 1);
            for (int k = 1; k < n; ++k) p[n][k] = p[n - 1][k - 1] + p[n - 1][k];
        }
        return p;
    }();
    return rows;
}

}  // namespace

WideCount space_dimension(int particles, int vertices) {
    if (vertices < 1) throw Error("space_dimension: vertex count must be positive");
    if (particles < 0) throw Error("space_dimension: particle count must be non-negative");
    if (particles > 64 || vertices > 64)
        throw Error("space_dimension: supported up to N, M <= 64");
    return pascal()[vertices + particles - 1][particles];
}

int Configuration::total() const {
    return std::accumulate(occupations.begin(), occupations.end(), 0);
}

ConfigurationSpace::ConfigurationSpace(int particles, int vertices)
    : n_(particles), m_(vertices) {
    const WideCount full = space_dimension(particles, vertices);
    if (full > std::numeric_limits<Rank>::max())
        throw Error("configuration space of " + to_string(full) + " states exceeds 64-bit ranks");
    size_ = static_cast<Rank>(full);

    table_.assign(static_cast<std::size_t>(n_ + 1) * (m_ + 1), 0);
    for (int n = 0; n <= n_; ++n) {
        table_[n * (m_ + 1)] = (n == 0) ? 1 : 0;
        for (int m = 1; m <= m_; ++m)
            table_[n * (m_ + 1) + m] = static_cast<Rank>(space_dimension(n, m));
    }

    const std::size_t w = n_ + 1;
    offset_.assign(static_cast<std::size_t>(m_) * w * w, 0);
    for (int a = 0; a < m_; ++a) {
        const int rest = m_ - a - 1;
        for (int s = 0; s <= n_; ++s) {
            Rank acc = 0;
            for (int v = s; v >= 0; --v) {
                offset_[(a * w + s) * w + v] = acc;
                acc += count(s - v, rest);
            }
        }
    }
}

Rank ConfigurationSpace::rank(std::span<const int> occupations) const {
    if (static_cast<int>(occupations.size()) != m_)
        throw Error("config_rank: expected " + std::to_string(m_) + " occupations");
    const std::size_t w = n_ + 1;
    Rank r = 0;
    int s = n_;
    for (int a = 0; a < m_; ++a) {
        const int v = occupations[a];
        if (v < 0 || v > s) throw Error("config_rank: occupation sum differs from N");
        r += offset_[(a * w + s) * w + v];
        s -= v;
    }
    if (s != 0) throw Error("config_rank: occupation sum differs from N");
    return r;
}

Rank ConfigurationSpace::rank(const Configuration& c) const { return rank(c.occupations); }

void ConfigurationSpace::unrank(Rank r, std::span<int> out) const {
    if (r >= size_) throw Error("config_unrank: rank " + std::to_string(r) + " out of range");
    int s = n_;
    for (int a = 0; a + 1 < m_; ++a) {
        const int rest = m_ - a - 1;
        int v = s;
        for (;;) {
            const Rank c = count(s - v, rest);
            if (r < c) break;
            r -= c;
            --v;
        }
        out[a] = v;
        s -= v;
    }
    out[m_ - 1] = s;
}

Configuration ConfigurationSpace::unrank(Rank r) const {
    Configuration c{std::vector<int>(m_)};
    unrank(r, c.occupations);
    return c;
}

AmplitudeTable::AmplitudeTable(int particles, int vertices, int coin_order)
    : n_(particles), m_(vertices), d_(coin_order) {}

namespace {
bool key_less(const AmplitudeEntry& a, const AmplitudeEntry& b) {
    return a.chirality != b.chirality ? a.chirality < b.chirality : a.rank < b.rank;
}
}  // namespace

void AmplitudeTable::add(int chirality, Rank rank, Complex amplitude) {
    if (chirality < 0 || chirality >= d_) throw Error("amplitude table: chirality out of range");
    AmplitudeEntry e{chirality, rank, amplitude};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e, key_less);
    if (it != entries_.end() && it->chirality == chirality && it->rank == rank)
        it->amplitude += amplitude;
    else
        entries_.insert(it, e);
}

void AmplitudeTable::assign_sorted(std::vector<AmplitudeEntry> entries) {
    entries_ = std::move(entries);
}

double AmplitudeTable::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.amplitude);
    return s;
}

void AmplitudeTable::compact(double threshold) {
    std::erase_if(entries_, [threshold](const AmplitudeEntry& e) {
        return std::abs(e.amplitude) < threshold;
    });
}

double normalize_in_place(AmplitudeTable& t) {
    const double k = std::sqrt(t.squared_norm());
    if (!(k > 0.0) || !std::isfinite(k))
        throw Error("normalize: amplitude table carries no weight");
    std::vector<AmplitudeEntry> scaled = t.entries();
    for (auto& e : scaled) e.amplitude /= k;
    t.assign_sorted(std::move(scaled));
    t.set_norm_factor(k);
    return k;
}

Normalized normalize(const AmplitudeTable& t) {
    Normalized out{0.0, t};
    out.norm = normalize_in_place(out.table);
    return out;
}

std::vector<RankWeight> configuration_weights(const AmplitudeTable& t) {
    // Entries are grouped by chirality; merge the d sorted runs so each rank
    // sums its chiralities in ascending order.
    const auto& es = t.entries();
    std::vector<std::size_t> begin(t.coin_order() + 1, es.size());
    for (std::size_t i = es.size(); i-- > 0;) begin[es[i].chirality] = i;
    for (int j = t.coin_order() - 1; j >= 0; --j)
        begin[j] = std::min(begin[j], begin[j + 1]);
    std::vector<std::size_t> pos(begin.begin(), begin.end() - 1);

    std::vector<RankWeight> out;
    out.reserve(es.size());
    const int d = t.coin_order();
    for (;;) {
        Rank next = std::numeric_limits<Rank>::max();
        bool any = false;
        for (int j = 0; j < d; ++j) {
            if (pos[j] < begin[j + 1]) {
                next = std::min(next, es[pos[j]].rank);
                any = true;
            }
        }
        if (!any) break;
        double w = 0.0;
        for (int j = 0; j < d; ++j) {
            if (pos[j] < begin[j + 1] && es[pos[j]].rank == next) {
                w += std::norm(es[pos[j]].amplitude);
                ++pos[j];
            }
        }
        if (w > 0.0) out.push_back({next, w});
    }
    return out;
}

Rank effective_dimension(const AmplitudeTable& t, double tol) {
    if (tol < 0.0) throw Error("effective_dimension: tolerance must be non-negative");
    Rank n = 0;
    for (const auto& rw : configuration_weights(t))
        if (rw.weight > tol) ++n;
    return n;
}

}  // namespace qwalk
