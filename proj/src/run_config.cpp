#include "qwalk/run_config.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qwalk/error.hpp"

namespace qwalk {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::set<std::string> kTopLevel = {
    "graph", "M", "N", "steps", "coin", "initial_state", "observables", "toggles",
    "snapshot_every", "output", "seed", "threads", "manifest"};

template <typename T>
T field(const json& doc, const char* key, const std::string& path = {}) {
    const std::string name = path.empty() ? key : path;
    if (!doc.contains(key)) throw ConfigError(name, "missing field");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(name, "has the wrong type");
    }
}

Complex parse_complex(const json& v, const std::string& name) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(name, "complex values are [re, im] pairs");
}

bool parse_bool(const std::string& name, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("toggles." + name, "expected a boolean, got '" + value + "'");
}

double parse_double(const std::string& name, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("toggles." + name, "expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& name, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("toggles." + name, "expected an integer, got '" + value + "'");
    }
}

void set_toggle(Toggles& t, const std::string& name, const std::string& value) {
    if (name == "double-coin-factor") {
        t.double_coin_factor = parse_bool(name, value);
    } else if (name == "counting") {
        if (value == "restricted") t.counting = CountingMode::restricted;
        else if (value == "literal") t.counting = CountingMode::literal;
        else throw ConfigError("toggles.counting", "expected 'restricted' or 'literal'");
    } else if (name == "drop-threshold") {
        t.drop_threshold = parse_double(name, value);
    } else if (name == "dimension-tolerance") {
        t.dimension_tolerance = parse_double(name, value);
    } else if (name == "transpose-components") {
        t.transpose_components = parse_bool(name, value);
    } else if (name == "step-index-scale") {
        t.step_index_scale = parse_int(name, value);
    } else if (name == "modes") {
        t.modes = parse_int(name, value);
    } else {
        throw ConfigError("toggles." + name, "unknown toggle");
    }
}

std::string toggle_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v.get<double>();
        return ss.str();
    }
    throw ConfigError("toggles", "values must be strings, booleans or numbers");
}

std::string hex_double(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
    return buf;
}

ojson graph_json(const GraphSpec& g) { return ojson::parse(dump_graph(g)); }

ojson coin_json(const CoinMatrix& c) {
    ojson rows = ojson::array();
    for (int j = 0; j < c.order(); ++j) {
        ojson row = ojson::array();
        for (int k = 0; k < c.order(); ++k) row.push_back({c.at(j, k).real(), c.at(j, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson toggles_json(const Toggles& t) {
    ojson o;
    o["double-coin-factor"] = t.double_coin_factor;
    o["counting"] = t.counting == CountingMode::restricted ? "restricted" : "literal";
    o["drop-threshold"] = t.drop_threshold;
    o["dimension-tolerance"] = t.dimension_tolerance;
    o["transpose-components"] = t.transpose_components;
    o["step-index-scale"] = t.step_index_scale;
    o["modes"] = t.modes;
    return o;
}

}  // namespace

CoinMatrix RunConfig::resolved_coin() const {
    return coin ? *coin : coin_matrix(graph.coin_order());
}

GraphSpec RunConfig::evolved_graph() const {
    return toggles.transpose_components ? swap_paired_components(graph) : graph;
}

AmplitudeTable RunConfig::initial_state() const {
    const ConfigurationSpace space(particles, graph.vertices);
    AmplitudeTable t(particles, graph.vertices, graph.coin_order());
    for (const auto& term : initial) t.add(term.chirality - 1, space.rank(term.configuration), term.amplitude);
    return normalize(t).table;
}

std::set<std::int64_t> RunConfig::observed_steps() const {
    std::set<std::int64_t> out(schedule.begin(), schedule.upper_bound(steps));
    if (observe_every > 0)
        for (std::int64_t s = 0; s <= steps; s += observe_every) out.insert(s);
    return out;
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.shift.threads = threads;
    o.shift.double_coin_factor = toggles.double_coin_factor;
    o.drop_threshold = toggles.drop_threshold;
    o.dimension_tolerance = toggles.dimension_tolerance;
    o.step_index_scale = toggles.step_index_scale;
    o.observables.moments = moments;
    o.observables.counting = toggles.counting;
    o.observables.modes = toggles.modes;
    o.observables.dimension_tolerance = toggles.dimension_tolerance;
    return o;
}

std::string RunConfig::fingerprint() const {
    ojson f;
    f["graph"] = graph_json(graph);
    f["N"] = particles;
    ojson coin_bits = ojson::array();
    const auto coin = resolved_coin();
    for (const auto& h : coin.entries())
        coin_bits.push_back(hex_double(h.real()) + ":" + hex_double(h.imag()));
    f["coin"] = std::move(coin_bits);
    ojson init = ojson::array();
    for (const auto& term : initial) {
        init.push_back({{"chirality", term.chirality},
                        {"configuration", term.configuration},
                        {"amplitude", hex_double(term.amplitude.real()) + ":" +
                                          hex_double(term.amplitude.imag())}});
    }
    f["initial_state"] = std::move(init);
    ojson t = toggles_json(toggles);
    t["drop-threshold"] = hex_double(toggles.drop_threshold);
    t["dimension-tolerance"] = hex_double(toggles.dimension_tolerance);
    f["toggles"] = std::move(t);
    f["moments"] = moments;
    return f.dump();
}

void validate(const RunConfig& cfg) {
    const auto report = validate_decomposition(cfg.graph);
    if (!report.ok()) throw ConfigError("graph", report.violations.front());
    if (cfg.particles < 0) throw ConfigError("N", "must be non-negative");
    if (cfg.steps < 0) throw ConfigError("steps", "must be non-negative");
    const auto& t = cfg.toggles;
    if (t.step_index_scale < 1) throw ConfigError("toggles.step-index-scale", "must be positive");
    if (t.drop_threshold < 0) throw ConfigError("toggles.drop-threshold", "must be non-negative");
    if (t.dimension_tolerance < 0)
        throw ConfigError("toggles.dimension-tolerance", "must be non-negative");
    if (t.modes < 0) throw ConfigError("toggles.modes", "must be non-negative");
    if (cfg.steps % t.step_index_scale != 0)
        throw ConfigError("steps", "must be a multiple of the step index scale");
    if (cfg.snapshot_every < 0 || cfg.snapshot_every % t.step_index_scale != 0)
        throw ConfigError("snapshot_every",
                          "must be a non-negative multiple of the step index scale");
    if (cfg.observe_every < 0 || cfg.observe_every % t.step_index_scale != 0)
        throw ConfigError("observables.every",
                          "must be a non-negative multiple of the step index scale");
    for (auto s : cfg.schedule) {
        if (s < 0 || s > cfg.steps)
            throw ConfigError("observables.steps",
                              "step " + std::to_string(s) + " outside 0.." + std::to_string(cfg.steps));
        if (s % t.step_index_scale != 0)
            throw ConfigError("observables.steps", "step " + std::to_string(s) +
                                                       " is not a multiple of the step index scale");
    }
    for (int q : cfg.moments)
        if (q < 1) throw ConfigError("observables.moments", "orders must be positive");
    if (cfg.threads < 1) throw ConfigError("threads", "must be positive");

    if (cfg.coin) {
        if (cfg.coin->order() != cfg.graph.coin_order())
            throw ConfigError("coin", "order differs from the graph's component count");
        const auto problems = check_coin(*cfg.coin);
        if (!problems.empty()) throw ConfigError("coin", problems.front());
    }

    if (cfg.initial.empty()) throw ConfigError("initial state", "needs at least one term");
    for (const auto& term : cfg.initial) {
        if (term.chirality < 1 || term.chirality > cfg.graph.coin_order())
            throw ConfigError("initial state", "chirality outside 1..d");
        if (static_cast<int>(term.configuration.size()) != cfg.graph.vertices)
            throw ConfigError("initial state", "configuration length differs from M");
        int total = 0;
        for (int n : term.configuration) {
            if (n < 0) throw ConfigError("initial state", "negative occupation");
            total += n;
        }
        if (total != cfg.particles)
            throw ConfigError("initial state", "term holds " + std::to_string(total) +
                                                   " particles, N is " + std::to_string(cfg.particles));
    }
}

RunConfig parse_run_config(const std::string& document, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "document must be an object");
    for (const auto& [key, _] : doc.items())
        if (!kTopLevel.contains(key)) throw ConfigError(key, "unknown field");

    RunConfig cfg;
    const auto& g = doc.contains("graph") ? doc.at("graph") : throw ConfigError("graph", "missing field");
    if (g.is_string()) {
        cfg.graph_source = g.get<std::string>();
        cfg.graph = build_named(parse_graph_name(cfg.graph_source), field<int>(doc, "M"));
    } else if (g.is_object() && g.contains("file")) {
        std::filesystem::path p = field<std::string>(g, "file", "graph.file");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        cfg.graph_source = p.string();
        cfg.graph = load_graph_file(p.string());
    } else if (g.is_object() && g.contains("inline")) {
        cfg.graph_source = "inline";
        cfg.graph = load_graph(g.at("inline").dump());
    } else {
        throw ConfigError("graph", "expected a builder name, {\"file\": path} or {\"inline\": graph}");
    }
    if (doc.contains("M") && field<int>(doc, "M") != cfg.graph.vertices)
        throw ConfigError("M", "differs from the graph's vertex count");

    cfg.particles = field<int>(doc, "N");
    cfg.steps = field<std::int64_t>(doc, "steps");

    if (doc.contains("coin") && !(doc.at("coin").is_string() && doc.at("coin") == "default")) {
        const auto& rows = doc.at("coin");
        if (!rows.is_array()) throw ConfigError("coin", "expected \"default\" or a d x d array");
        const int d = static_cast<int>(rows.size());
        std::vector<Complex> h;
        for (const auto& row : rows) {
            if (!row.is_array() || static_cast<int>(row.size()) != d)
                throw ConfigError("coin", "matrix must be square");
            for (const auto& v : row) h.push_back(parse_complex(v, "coin"));
        }
        cfg.coin = CoinMatrix(d, std::move(h));
    }

    if (!doc.contains("initial_state")) throw ConfigError("initial state", "missing field");
    for (const auto& term : doc.at("initial_state")) {
        InitialTerm t;
        t.chirality = field<int>(term, "chirality", "initial state");
        t.configuration = field<std::vector<int>>(term, "configuration", "initial state");
        if (!term.contains("amplitude")) throw ConfigError("initial state", "term lacks an amplitude");
        t.amplitude = parse_complex(term.at("amplitude"), "initial state");
        cfg.initial.push_back(std::move(t));
    }

    if (doc.contains("toggles")) {
        const auto& t = doc.at("toggles");
        if (!t.is_object()) throw ConfigError("toggles", "expected an object");
        for (const auto& [name, value] : t.items()) set_toggle(cfg.toggles, name, toggle_text(value));
    }

    cfg.observe_every = cfg.toggles.step_index_scale;
    if (doc.contains("observables")) {
        const auto& o = doc.at("observables");
        if (o.contains("every")) cfg.observe_every = field<std::int64_t>(o, "every", "observables.every");
        if (o.contains("steps"))
            for (auto s : field<std::vector<std::int64_t>>(o, "steps", "observables.steps"))
                cfg.schedule.insert(s);
        if (o.contains("moments")) cfg.moments = field<std::vector<int>>(o, "moments", "observables.moments");
    }

    if (doc.contains("snapshot_every")) cfg.snapshot_every = field<std::int64_t>(doc, "snapshot_every");
    if (doc.contains("output")) cfg.output_dir = field<std::string>(doc, "output");
    if (doc.contains("seed")) cfg.seed = field<std::uint64_t>(doc, "seed");
    if (doc.contains("threads")) cfg.threads = field<int>(doc, "threads");

    validate(cfg);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

void apply_toggle(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("toggle", "expected name=value, got '" + assignment + "'");
    set_toggle(cfg.toggles, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string dump_run_config(const RunConfig& cfg) {
    ojson doc;
    doc["graph"] = {{"inline", graph_json(cfg.graph)}};
    doc["N"] = cfg.particles;
    doc["steps"] = cfg.steps;
    doc["coin"] = cfg.coin ? coin_json(*cfg.coin) : ojson("default");
    ojson init = ojson::array();
    for (const auto& t : cfg.initial)
        init.push_back({{"chirality", t.chirality},
                        {"configuration", t.configuration},
                        {"amplitude", {t.amplitude.real(), t.amplitude.imag()}}});
    doc["initial_state"] = std::move(init);
    ojson obs;
    obs["every"] = cfg.observe_every;
    obs["steps"] = std::vector<std::int64_t>(cfg.schedule.begin(), cfg.schedule.end());
    obs["moments"] = cfg.moments;
    doc["observables"] = std::move(obs);
    doc["toggles"] = toggles_json(cfg.toggles);
    doc["snapshot_every"] = cfg.snapshot_every;
    doc["output"] = cfg.output_dir;
    doc["seed"] = cfg.seed;
    return doc.dump(2);
}

}  // namespace qwalk
