#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/error.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/run_config.hpp"

namespace qwalk {

inline constexpr const char* kVersion = "qwalk 1.0.0";

// A run stopped after starting; `last_snapshot` is empty when none was taken.
class RunFailure : public Error {
public:
    RunFailure(const std::string& what, std::string last_snapshot)
        : Error(what), last_snapshot_(std::move(last_snapshot)) {}
    const std::string& last_snapshot() const noexcept { return last_snapshot_; }

private:
    std::string last_snapshot_;
};

struct RunSummary {
    std::string output_dir;
    std::int64_t final_step = 0;  // reported units
    std::string last_snapshot;
    RegimeChangeReport regime;
};

// Fresh run into cfg.output_dir. Series files:
//   steps.csv          step,pre_norm,norm_factor,entries,effective_dimension
//   timing.csv         step,wall_seconds
//   densities.csv      step,n_1..n_M
//   moments.csv        step,q,v_1..v_M
//   configurations.csv step,total,max_probability,argmax_rank,participation,entropy,effective_dimension
//   g2.csv             step,g2_<a>_<b> for a,b = 1..M (nan where undefined)
//   counting.csv       step,vertex,n,occupancy,weighted (vertex 0: mean over vertices)
//   phase_space.csv    step,mode,x,p,energy
// plus manifest.json, regime.json and snapshots/ (step_<r>.bin, index.json).
RunSummary execute_run(const RunConfig& cfg);

// Continues the run that produced `snapshot_path` up to cfg.steps, appending
// to the series in cfg.output_dir (rows after the snapshot step are dropped
// first). Throws ConfigError when the snapshot's settings differ.
RunSummary execute_resume(const RunConfig& cfg, const std::string& snapshot_path);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// (step, effective_dimension) pairs read back from a steps.csv file.
std::vector<DimensionSample> read_dimension_series(const std::string& steps_csv);

}  // namespace qwalk
