#include "qwalk/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/snapshot.hpp"

namespace qwalk {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

using ojson = nlohmann::ordered_json;

struct Series {
    std::string name;
    std::string header;
};

std::vector<Series> series_files(int vertices) {
    std::string dens = "step", mom = "step,q", g2h = "step";
    for (int a = 1; a <= vertices; ++a) {
        dens += ",n_" + std::to_string(a);
        mom += ",v_" + std::to_string(a);
    }
    for (int a = 1; a <= vertices; ++a)
        for (int b = 1; b <= vertices; ++b) g2h += ",g2_" + std::to_string(a) + "_" + std::to_string(b);
    return {
        {"steps.csv", "step,pre_norm,norm_factor,entries,effective_dimension"},
        {"timing.csv", "step,wall_seconds"},
        {"densities.csv", dens},
        {"moments.csv", mom},
        {"configurations.csv",
         "step,total,max_probability,argmax_rank,participation,entropy,effective_dimension"},
        {"g2.csv", g2h},
        {"counting.csv", "step,vertex,n,occupancy,weighted"},
        {"phase_space.csv", "step,mode,x,p,energy"},
    };
}

// Keeps the header and the rows whose leading step is <= `last`. Creates the
// file with `header` when it does not exist.
void truncate_series(const fs::path& path, const std::string& header, std::int64_t last) {
    std::vector<std::string> keep;
    if (std::ifstream in(path); in) {
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first) {
                if (line != header)
                    throw ConfigError("output", path.string() + " has a different column set");
                first = false;
                continue;
            }
            std::int64_t step = 0;
            std::from_chars(line.data(), line.data() + line.size(), step);
            if (step <= last) keep.push_back(line);
        }
    }
    std::ofstream out(path, std::ios::trunc);
    out << header << '\n';
    for (const auto& l : keep) out << l << '\n';
}

class SeriesWriter {
public:
    SeriesWriter(const fs::path& dir, int vertices, bool fresh, std::int64_t keep_until) {
        for (const auto& s : series_files(vertices)) {
            const auto path = dir / s.name;
            if (fresh) {
                std::ofstream(path, std::ios::trunc) << s.header << '\n';
            } else {
                truncate_series(path, s.header, keep_until);
            }
            auto f = std::make_unique<std::ofstream>(path, std::ios::app);
            if (!*f) throw Error("cannot open " + path.string() + " for writing");
            files_[s.name] = std::move(f);
        }
    }

    void step(const StepReport& r) {
        auto& f = file("steps.csv");
        f << r.step << ',' << format_double(r.pre_norm) << ',' << format_double(r.norm_factor) << ','
          << r.entries << ',' << r.effective_dimension << '\n';
        file("timing.csv") << r.step << ',' << format_double(r.wall_seconds) << '\n';
    }

    void record(const ObservableRecord& rec) {
        const int m = static_cast<int>(rec.densities.size());
        auto& dens = file("densities.csv");
        dens << rec.step;
        for (double v : rec.densities) dens << ',' << format_double(v);
        dens << '\n';

        auto& mom = file("moments.csv");
        for (std::size_t qi = 0; qi < rec.moment_orders.size(); ++qi) {
            mom << rec.step << ',' << rec.moment_orders[qi];
            for (double v : rec.moments[qi]) mom << ',' << format_double(v);
            mom << '\n';
        }

        const auto& c = rec.configurations;
        file("configurations.csv") << rec.step << ',' << format_double(c.total) << ','
                                   << format_double(c.max_probability) << ',' << c.argmax << ','
                                   << format_double(c.participation) << ','
                                   << format_double(c.entropy) << ',' << rec.effective_dimension
                                   << '\n';

        auto& g2f = file("g2.csv");
        g2f << rec.step;
        for (const auto& v : rec.g2) g2f << ',' << (v ? format_double(*v) : "nan");
        g2f << '\n';

        auto& cnt = file("counting.csv");
        const int n = static_cast<int>(rec.occupancy_mean.size()) - 1;
        for (int k = 0; k <= n; ++k)
            cnt << rec.step << ",0," << k << ',' << format_double(rec.occupancy_mean[k]) << ','
                << format_double(rec.counting_mean[k]) << '\n';
        for (int a = 0; a < m; ++a)
            for (int k = 0; k <= n; ++k)
                cnt << rec.step << ',' << (a + 1) << ',' << k << ','
                    << format_double(rec.occupancy[a][k]) << ',' << format_double(rec.counting[a][k])
                    << '\n';

        auto& ph = file("phase_space.csv");
        for (std::size_t eta = 0; eta < rec.phase.size(); ++eta)
            ph << rec.step << ',' << (eta + 1) << ',' << format_double(rec.phase[eta].x) << ','
               << format_double(rec.phase[eta].p) << ',' << format_double(rec.phase[eta].energy)
               << '\n';
    }

    void flush() {
        for (auto& [name, f] : files_) {
            f->flush();
            if (!*f) throw Error("failed writing " + name);
        }
    }

private:
    std::ofstream& file(const std::string& name) { return *files_.at(name); }
    std::map<std::string, std::unique_ptr<std::ofstream>> files_;
};

std::uint64_t fnv1a(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, const std::string& status) {
    ojson m = ojson::parse(dump_run_config(cfg));
    ojson meta;
    meta["version"] = kVersion;
    meta["status"] = status;
    meta["graph_source"] = cfg.graph_source;
    meta["fingerprint"] = cfg.fingerprint();
    ojson sums;
    for (const auto& s : series_files(cfg.graph.vertices)) {
        if (s.name == "timing.csv") continue;
        if (fs::exists(dir / s.name)) {
            char hex[17];
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(fnv1a(dir / s.name)));
            sums[s.name] = std::string("fnv1a64:") + hex;
        }
    }
    meta["checksums"] = std::move(sums);
    m["manifest"] = std::move(meta);
    std::ofstream(dir / "manifest.json", std::ios::trunc) << m.dump(2) << '\n';
}

RegimeChangeReport write_regime(const fs::path& dir) {
    const auto series = read_dimension_series((dir / "steps.csv").string());
    const auto report = detect_regime_change(series);
    ojson r;
    r["rule"] = report.rule;
    r["detected"] = report.detected;
    if (report.detected) {
        r["change_step"] = report.change_step;
        r["terminal_values"] = report.terminal_values;
    }
    std::ofstream(dir / "regime.json", std::ios::trunc) << r.dump(2) << '\n';
    return report;
}

void append_snapshot_index(const fs::path& dir, std::int64_t step, const std::string& file) {
    const auto path = dir / "index.json";
    ojson idx = ojson::array();
    if (std::ifstream in(path); in) {
        try {
            idx = ojson::parse(in);
        } catch (const ojson::exception&) {
            idx = ojson::array();
        }
    }
    ojson kept = ojson::array();
    for (auto& e : idx)
        if (e.value("step", std::int64_t{-1}) != step) kept.push_back(e);
    kept.push_back({{"step", step}, {"file", file}});
    std::ofstream(path, std::ios::trunc) << kept.dump(2) << '\n';
}

RunSummary drive(const RunConfig& cfg, const AmplitudeTable& start, std::int64_t applied_before,
                 bool fresh) {
    if (cfg.output_dir.empty()) throw ConfigError("output", "no output directory given");
    const fs::path dir(cfg.output_dir);
    const fs::path snaps = dir / "snapshots";
    fs::create_directories(snaps);

    const int scale = cfg.toggles.step_index_scale;
    const std::int64_t total_applied = cfg.steps / scale;
    if (applied_before > total_applied)
        throw ConfigError("steps", "snapshot is past the configured step count");

    RunSummary summary;
    summary.output_dir = dir.string();
    const std::int64_t start_reported = applied_before * scale;
    SeriesWriter writer(dir, cfg.graph.vertices, fresh, start_reported);
    write_manifest(dir, cfg, "running");

    const auto fingerprint = cfg.fingerprint();
    auto save = [&](std::int64_t applied, const AmplitudeTable& t) {
        const std::int64_t reported = applied * scale;
        const std::string name = "step_" + std::to_string(reported) + ".bin";
        write_snapshot((snaps / name).string(), Snapshot{applied, fingerprint, t});
        append_snapshot_index(snaps, reported, name);
        summary.last_snapshot = (snaps / name).string();
    };

    auto schedule = cfg.observed_steps();
    if (!fresh) std::erase_if(schedule, [&](std::int64_t s) { return s <= start_reported; });

    if (fresh) {
        StepReport r0;
        r0.step = 0;
        double raw = 0.0;
        {
            const ConfigurationSpace space(cfg.particles, cfg.graph.vertices);
            AmplitudeTable raw_table(cfg.particles, cfg.graph.vertices, cfg.graph.coin_order());
            for (const auto& term : cfg.initial)
                raw_table.add(term.chirality - 1, space.rank(term.configuration), term.amplitude);
            raw = std::sqrt(raw_table.squared_norm());
        }
        r0.pre_norm = raw;
        r0.norm_factor = raw;
        r0.entries = start.size();
        r0.effective_dimension = effective_dimension(start, cfg.toggles.dimension_tolerance);
        writer.step(r0);
        if (cfg.snapshot_every > 0) save(0, start);
    }

    RunHooks hooks;
    hooks.on_step = [&](const StepReport& r) { writer.step(r); };
    hooks.on_record = [&](const ObservableRecord& rec) { writer.record(rec); };
    hooks.on_state = [&](std::int64_t applied, const AmplitudeTable& t) {
        const std::int64_t reported = applied * scale;
        if ((cfg.snapshot_every > 0 && reported % cfg.snapshot_every == 0) || applied == total_applied) {
            writer.flush();
            save(applied, t);
        }
    };

    try {
        run(start, cfg.evolved_graph(), cfg.resolved_coin(), total_applied - applied_before, schedule,
            cfg.run_options(), hooks, applied_before);
        if (applied_before == total_applied && !fs::exists(snaps / ("step_" + std::to_string(cfg.steps) + ".bin")))
            save(applied_before, start);
        writer.flush();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        writer.flush();
        write_manifest(dir, cfg, "failed");
        throw RunFailure(e.what(), summary.last_snapshot);
    }

    summary.final_step = cfg.steps;
    summary.regime = write_regime(dir);
    write_manifest(dir, cfg, "complete");
    return summary;
}

}  // namespace

std::vector<DimensionSample> read_dimension_series(const std::string& steps_csv) {
    std::ifstream in(steps_csv);
    if (!in) throw Error("cannot read " + steps_csv);
    std::vector<DimensionSample> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (cols.size() < 5) throw Error("malformed row in " + steps_csv);
        out.push_back({std::stoll(cols[0]), std::stoull(cols[4])});
    }
    return out;
}

RunSummary execute_run(const RunConfig& cfg) {
    validate(cfg);
    return drive(cfg, cfg.initial_state(), 0, true);
}

RunSummary execute_resume(const RunConfig& cfg, const std::string& snapshot_path) {
    validate(cfg);
    Snapshot snap;
    try {
        snap = read_snapshot(snapshot_path);
    } catch (const Error& e) {
        throw ConfigError("snapshot", e.what());
    }
    if (snap.fingerprint != cfg.fingerprint())
        throw ConfigError("snapshot", "run settings differ from those that produced the snapshot");
    return drive(cfg, snap.table, snap.step, false);
}

}  // namespace qwalk
