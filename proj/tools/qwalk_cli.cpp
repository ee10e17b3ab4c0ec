#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/run_config.hpp"
#include "qwalk/runner.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct RunFlags {
    std::string config;
    std::optional<std::int64_t> steps;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::int64_t> snapshot_every;
    std::vector<std::string> toggles;
};

std::string default_output_dir(const std::string& config_path) {
    if (const char* env = std::getenv("QWALK_OUT_DIR"); env && *env) {
        return (std::filesystem::path(env) / std::filesystem::path(config_path).stem()).string();
    }
    return (std::filesystem::path("out") / std::filesystem::path(config_path).stem()).string();
}

qwalk::RunConfig resolve(const RunFlags& f) {
    auto cfg = qwalk::load_run_config(f.config);
    for (const auto& t : f.toggles) qwalk::apply_toggle(cfg, t);
    if (f.steps) {
        // A shortened run keeps the scheduled steps it still reaches.
        cfg.steps = *f.steps;
        std::erase_if(cfg.schedule, [&](std::int64_t s) { return s > cfg.steps; });
    }
    if (f.threads) cfg.threads = *f.threads;
    if (f.snapshot_every) cfg.snapshot_every = *f.snapshot_every;
    if (f.out) cfg.output_dir = *f.out;
    if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir(f.config);
    qwalk::validate(cfg);
    return cfg;
}

void report(const qwalk::RunSummary& s) {
    std::cout << "output: " << s.output_dir << '\n' << "final step: " << s.final_step << '\n';
    if (!s.last_snapshot.empty()) std::cout << "last snapshot: " << s.last_snapshot << '\n';
    if (s.regime.detected) {
        std::cout << "regime change at step " << s.regime.change_step << ", terminal dimensions";
        for (auto v : s.regime.terminal_values) std::cout << ' ' << v;
        std::cout << '\n';
    } else {
        std::cout << "no regime change detected\n";
    }
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--steps", f.steps, "Total steps (reported units)");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--threads", f.threads, "Worker threads for the shift");
    cmd->add_option("--snapshot-every", f.snapshot_every, "Snapshot interval in steps, 0 to disable");
    cmd->add_option("--toggle", f.toggles, "Interpretation toggle, name=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-coin many-boson discrete-time quantum walk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qwalk::kVersion);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Evolve a configuration and write observable series");
    run_cmd->add_option("config", run_flags.config, "Run configuration (JSON)")->required();
    add_run_flags(run_cmd, run_flags);

    RunFlags resume_flags;
    std::string snapshot;
    auto* resume_cmd = app.add_subcommand("resume", "Continue a run from a snapshot");
    resume_cmd->add_option("snapshot", snapshot, "Snapshot file")->required();
    resume_cmd->add_option("config", resume_flags.config, "Run configuration (JSON)")->required();
    add_run_flags(resume_cmd, resume_flags);

    std::string graph_file;
    auto* validate_cmd = app.add_subcommand("validate", "Check a graph decomposition file");
    validate_cmd->add_option("graph", graph_file, "Graph file (JSON)")->required();

    std::string oracle_config;
    auto* oracle_cmd = app.add_subcommand("oracle-compare", "Compare against dense evolution");
    oracle_cmd->add_option("config", oracle_config, "Run configuration (JSON)")->required();
    oracle_cmd->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*run_cmd) {
            report(qwalk::execute_run(resolve(run_flags)));
        } else if (*resume_cmd) {
            report(qwalk::execute_resume(resolve(resume_flags), snapshot));
        } else if (*validate_cmd) {
            const auto g = qwalk::load_graph_file(graph_file);
            const auto rep = qwalk::validate_decomposition(g);
            for (const auto& n : rep.notes) std::cout << "note: " << n << '\n';
            std::cout << g.name << ": " << g.vertices << " vertices, " << g.coin_order()
                      << " components, valid\n";
        } else if (*oracle_cmd) {
            const auto cfg = qwalk::load_run_config(oracle_config);
            const auto applied = static_cast<int>(cfg.steps / cfg.toggles.step_index_scale);
            const double dev = qwalk::oracle::compare_evolution(
                cfg.evolved_graph(), cfg.resolved_coin(), cfg.initial_state(), applied);
            std::cout << "max deviation over " << applied << " shifts: " << qwalk::format_double(dev)
                      << '\n';
            return dev <= 1e-10 ? 0 : kExitFailure;
        }
    } catch (const qwalk::ConfigError& e) {
        std::cerr << "invalid configuration (" << e.field() << "): " << e.what() << '\n';
        return kExitInvalid;
    } catch (const qwalk::RunFailure& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        std::cerr << "last good snapshot: "
                  << (e.last_snapshot().empty() ? "none" : e.last_snapshot()) << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
