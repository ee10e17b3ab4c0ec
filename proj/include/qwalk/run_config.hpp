#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/statespace.hpp"

namespace qwalk {

struct InitialTerm {
    int chirality = 1;  // 1-based
    std::vector<int> configuration;
    Complex amplitude;
};

// Interpretation switches. Defaults are the reference readings.
struct Toggles {
    bool double_coin_factor = false;
    CountingMode counting = CountingMode::restricted;
    double drop_threshold = 1e-14;
    double dimension_tolerance = 1e-24;
    // Reads every adjacency component transposed (row = source vertex), which
    // exchanges the edge sets of each declared pair.
    bool transpose_components = false;
    // Reported steps per applied conditional shift.
    int step_index_scale = 1;
    // Phase-space modes; 0 means one per particle.
    int modes = 0;
};

struct RunConfig {
    GraphSpec graph;
    std::string graph_source;  // builder name or file path, for the manifest
    int particles = 0;
    std::int64_t steps = 0;    // reported-step units
    std::optional<CoinMatrix> coin;  // empty: coin_matrix(d)
    std::vector<InitialTerm> initial;
    std::set<std::int64_t> schedule;  // reported steps receiving observables
    std::int64_t observe_every = 0;   // 0: only `schedule`
    std::vector<int> moments{1, 2, 3};
    Toggles toggles;
    std::int64_t snapshot_every = 50;
    std::string output_dir;
    std::uint64_t seed = 0;  // reserved; evolution is deterministic
    int threads = 1;

    CoinMatrix resolved_coin() const;
    // Graph actually evolved (after `transpose_components`).
    GraphSpec evolved_graph() const;
    // Normalized initial table.
    AmplitudeTable initial_state() const;
    // Reported steps with observables, expanded from `schedule` and `observe_every`.
    std::set<std::int64_t> observed_steps() const;
    RunOptions run_options() const;

    // Identity of the physics and observable settings; snapshots carry it so a
    // resume can refuse mismatched settings.
    std::string fingerprint() const;
};

// Parses and validates a configuration document (JSON). Relative graph file
// paths resolve against `base_dir`. Throws ConfigError naming the field.
RunConfig parse_run_config(const std::string& document, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

// Applies `name=value` toggle overrides. Throws ConfigError on unknown names.
void apply_toggle(RunConfig& cfg, const std::string& assignment);

// Re-checks cross-field invariants after overrides.
void validate(const RunConfig& cfg);

// Fully resolved configuration (graph inlined); a valid input document.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace qwalk
