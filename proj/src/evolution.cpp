#include "qwalk/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

struct DirectedEdge {
    int from;  // 0-based
    int to;
};

// Dense scratch bound; d * D complex values.
constexpr std::uint64_t kMaxDenseStates = std::uint64_t{1} << 28;

}  // namespace

struct ShiftKernel::Impl {
    ConfigurationSpace space;
    int d;
    std::vector<std::vector<DirectedEdge>> edges;
    std::vector<Complex> coin;  // effective h_jk, row-major
    int threads;

    std::vector<Complex> source;       // d * D
    std::vector<std::uint8_t> marked;  // D
    std::vector<Rank> candidates;
    std::vector<Complex> gathered;     // d * |candidates|

    Impl(const GraphSpec& g, const CoinMatrix& c, int particles, ShiftOptions o)
        : space(particles, g.vertices), d(g.coin_order()), threads(std::max(1, o.threads)) {
        if (c.order() != d)
            throw Error("conditional shift: coin order " + std::to_string(c.order()) +
                        " differs from graph coin order " + std::to_string(d));
        if (static_cast<std::uint64_t>(d) * space.size() > kMaxDenseStates)
            throw Error("conditional shift: state space too large for the dense scratch");
        for (const auto& comp : g.components) {
            std::vector<DirectedEdge> es;
            for (const auto& e : comp) es.push_back({e.from - 1, e.to - 1});
            edges.push_back(std::move(es));
        }
        coin.resize(static_cast<std::size_t>(d) * d);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                coin[j * d + k] = o.double_coin_factor ? c.at(j, k) * c.at(j, k) : c.at(j, k);
        source.assign(static_cast<std::size_t>(d) * space.size(), Complex{});
        marked.assign(space.size(), 0);
    }

    void mark_targets(const AmplitudeTable& t) {
        const int m = space.vertices();
        std::vector<int> occ(m);
        Rank last = space.size();
        for (const auto& e : t.entries()) {
            if (e.rank != last) {
                space.unrank(e.rank, occ);
                last = e.rank;
            }
            for (const auto& ed : edges[e.chirality]) {
                if (occ[ed.from] == 0) continue;
                --occ[ed.from];
                ++occ[ed.to];
                marked[space.rank(occ)] = 1;
                ++occ[ed.from];
                --occ[ed.to];
            }
        }
        candidates.clear();
        for (Rank r = 0; r < space.size(); ++r) {
            if (marked[r]) {
                candidates.push_back(r);
                marked[r] = 0;
            }
        }
    }

    void gather(std::size_t begin, std::size_t end) {
        const int m = space.vertices();
        const Rank size = space.size();
        std::vector<int> occ(m);
        std::vector<Complex> acc(d);
        for (std::size_t i = begin; i < end; ++i) {
            const Rank target = candidates[i];
            space.unrank(target, occ);
            std::fill(acc.begin(), acc.end(), Complex{});
            for (int k = 0; k < d; ++k) {
                for (const auto& ed : edges[k]) {
                    // Source configuration has one more particle at `from`.
                    if (occ[ed.to] == 0) continue;
                    const double factor =
                        std::sqrt(static_cast<double>(occ[ed.from] + 1) * occ[ed.to]);
                    --occ[ed.to];
                    ++occ[ed.from];
                    const Complex a = source[k * size + space.rank(occ)];
                    ++occ[ed.to];
                    --occ[ed.from];
                    if (a != Complex{}) acc[k] += a * factor;
                }
            }
            for (int j = 0; j < d; ++j) {
                Complex out{};
                for (int k = 0; k < d; ++k) out += coin[j * d + k] * acc[k];
                gathered[i * d + j] = out;
            }
        }
    }

    AmplitudeTable apply(const AmplitudeTable& t) {
        if (t.particles() != space.particles() || t.vertices() != space.vertices() ||
            t.coin_order() != d)
            throw Error("conditional shift: table dimensions do not match graph/coin");
        const Rank size = space.size();
        for (const auto& e : t.entries()) source[e.chirality * size + e.rank] = e.amplitude;

        mark_targets(t);
        gathered.assign(candidates.size() * d, Complex{});
        const std::size_t n = candidates.size();
        const int workers = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(n / 1024, 1)));
        if (workers <= 1) {
            gather(0, n);
        } else {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (n + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::size_t b = std::min(n, w * chunk);
                const std::size_t e = std::min(n, b + chunk);
                pool.emplace_back([this, b, e] { gather(b, e); });
            }
        }

        for (const auto& e : t.entries()) source[e.chirality * size + e.rank] = Complex{};

        std::vector<AmplitudeEntry> out;
        out.reserve(n * d);
        for (int j = 0; j < d; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (const Complex v = gathered[i * d + j]; v != Complex{})
                    out.push_back({j, candidates[i], v});
        AmplitudeTable result(space.particles(), space.vertices(), d);
        result.assign_sorted(std::move(out));
        return result;
    }
};

ShiftKernel::ShiftKernel(const GraphSpec& g, const CoinMatrix& c, int particles,
                         ShiftOptions options)
    : impl_(std::make_unique<Impl>(g, c, particles, options)) {}
ShiftKernel::~ShiftKernel() = default;
ShiftKernel::ShiftKernel(ShiftKernel&&) noexcept = default;
ShiftKernel& ShiftKernel::operator=(ShiftKernel&&) noexcept = default;

const ConfigurationSpace& ShiftKernel::space() const { return impl_->space; }

AmplitudeTable ShiftKernel::apply(const AmplitudeTable& t) { return impl_->apply(t); }

AmplitudeTable apply_conditional_shift(const AmplitudeTable& t, const GraphSpec& g,
                                       const CoinMatrix& c, ShiftOptions options) {
    if (g.vertices != t.vertices())
        throw Error("conditional shift: graph has " + std::to_string(g.vertices) +
                    " vertices, table " + std::to_string(t.vertices()));
    ShiftKernel kernel(g, c, t.particles(), options);
    return kernel.apply(t);
}

RunResult run(const AmplitudeTable& init, const GraphSpec& g, const CoinMatrix& c,
              std::int64_t steps, const std::set<std::int64_t>& schedule,
              const RunOptions& options, const RunHooks& hooks, std::int64_t first_applied) {
    if (steps < 0) throw Error("run: step count must be non-negative");
    if (options.step_index_scale < 1) throw Error("run: step index scale must be positive");
    if (g.vertices != init.vertices())
        throw Error("run: graph and initial state disagree on the vertex count");

    ShiftKernel kernel(g, c, init.particles(), options.shift);
    RunResult result;
    result.final_state = init;
    const auto scale = options.step_index_scale;

    auto observe = [&](std::int64_t applied) {
        const std::int64_t reported = applied * scale;
        if (!schedule.contains(reported)) return;
        auto rec = compute_record(result.final_state, reported, options.observables);
        if (hooks.on_record) hooks.on_record(rec);
        result.records.push_back(std::move(rec));
    };
    observe(first_applied);

    for (std::int64_t i = 1; i <= steps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const std::int64_t applied = first_applied + i;
        AmplitudeTable next = kernel.apply(result.final_state);
        StepReport report;
        report.step = applied * scale;
        report.pre_norm = std::sqrt(next.squared_norm());
        try {
            report.norm_factor = normalize_in_place(next);
        } catch (const Error& e) {
            throw Error("step " + std::to_string(report.step) + ": " + e.what());
        }
        next.compact(options.drop_threshold);
        report.entries = next.size();
        report.effective_dimension = effective_dimension(next, options.dimension_tolerance);
        result.final_state = std::move(next);
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (hooks.on_step) hooks.on_step(report);
        result.reports.push_back(report);
        if (hooks.on_state) hooks.on_state(applied, result.final_state);
        observe(applied);
    }
    return result;
}

}  // namespace qwalk
