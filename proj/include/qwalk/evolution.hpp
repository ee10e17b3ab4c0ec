#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/statespace.hpp"

namespace qwalk {

struct ShiftOptions {
    int threads = 1;
    // Literal product of the recursion and the f factor: h_jk applied twice.
    bool double_coin_factor = false;
};

// Conditional shift on one (N, M, graph, coin). Owns the dense scratch used to
// gather contributions; reuse one kernel across steps.
class ShiftKernel {
public:
    ShiftKernel(const GraphSpec& g, const CoinMatrix& c, int particles, ShiftOptions options = {});
    ~ShiftKernel();
    ShiftKernel(ShiftKernel&&) noexcept;
    ShiftKernel& operator=(ShiftKernel&&) noexcept;

    const ConfigurationSpace& space() const;

    // Unnormalized image of `t`. Every output amplitude sums its sources in a
    // fixed order, so the result does not depend on the thread count.
    AmplitudeTable apply(const AmplitudeTable& t);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

AmplitudeTable apply_conditional_shift(const AmplitudeTable& t, const GraphSpec& g,
                                       const CoinMatrix& c, ShiftOptions options = {});

struct StepReport {
    std::int64_t step = 0;
    double pre_norm = 0.0;  // sqrt(sum |C|^2) before normalization
    double norm_factor = 0.0;
    std::uint64_t entries = 0;
    std::uint64_t effective_dimension = 0;
    double wall_seconds = 0.0;
};

struct RunOptions {
    ShiftOptions shift;
    double drop_threshold = 1e-14;
    double dimension_tolerance = 1e-24;
    // Reported step = scale x number of applied shifts.
    int step_index_scale = 1;
    ObservableOptions observables;
};

struct RunHooks {
    std::function<void(const StepReport&)> on_step;
    std::function<void(const ObservableRecord&)> on_record;
    // Called after each completed application with the applied-shift count.
    std::function<void(std::int64_t applied, const AmplitudeTable&)> on_state;
};

struct RunResult {
    AmplitudeTable final_state;
    std::vector<StepReport> reports;
    std::vector<ObservableRecord> records;
};

// Applies `steps` conditional shifts to a normalized `init`, normalizing and
// compacting after each. `first_applied` shifts are assumed already applied
// (resume). Records are computed at every reported step in `schedule`,
// including the starting step when listed.
RunResult run(const AmplitudeTable& init, const GraphSpec& g, const CoinMatrix& c,
              std::int64_t steps, const std::set<std::int64_t>& schedule,
              const RunOptions& options = {}, const RunHooks& hooks = {},
              std::int64_t first_applied = 0);

}  // namespace qwalk
