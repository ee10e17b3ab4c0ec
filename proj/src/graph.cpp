#include "qwalk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qwalk/error.hpp"

namespace qwalk {

namespace {

// Maps any integer into 1..m.
int wrap(int label, int m) {
    int r = (label - 1) % m;
    if (r < 0) r += m;
    return r + 1;
}

Component transpose(const Component& c) {
    Component t;
    t.reserve(c.size());
    for (const auto& e : c) t.push_back({e.to, e.from});
    std::sort(t.begin(), t.end());
    return t;
}

Component sorted(Component c) {
    std::sort(c.begin(), c.end());
    return c;
}

GraphSpec cycle(int m) {
    GraphSpec g;
    g.name = "cycle";
    g.vertices = m;
    Component forward;
    for (int mu = 1; mu <= m; ++mu) forward.push_back({mu, wrap(mu + 1, m)});
    g.components = {forward, transpose(forward)};
    g.pairing = {{1, 2}};
    return g;
}

// Two hexagons sharing the edge {1,6}: (1,2,3,4,5,6) and (1,6,7,8,9,10).
GraphSpec double_hexagon() {
    GraphSpec g;
    g.name = "double_hexagon";
    g.vertices = 10;
    const int a[] = {1, 2, 3, 4, 5, 6};
    const int b[] = {1, 6, 7, 8, 9, 10};
    Component forward;
    for (int i = 0; i < 6; ++i) {
        forward.push_back({a[i], a[(i + 1) % 6]});
        forward.push_back({b[i], b[(i + 1) % 6]});
    }
    g.components = {forward, transpose(forward)};
    g.pairing = {{1, 2}};
    return g;
}

// Circulant on 10 vertices with label differences -1, +1, -5, +5.
GraphSpec petersen_circulant() {
    GraphSpec g;
    g.name = "petersen_circulant";
    g.vertices = 10;
    const int shifts[] = {+1, -1, +5, -5};
    for (int s : shifts) {
        Component c;
        for (int mu = 1; mu <= 10; ++mu) c.push_back({mu, wrap(mu + s, 10)});
        g.components.push_back(std::move(c));
    }
    g.pairing = {{1, 2}, {3, 4}};
    return g;
}

std::string edge_str(const Edge& e) {
    return std::to_string(e.from) + "->" + std::to_string(e.to);
}

}  // namespace

void GraphSpec::canonicalize() {
    for (auto& c : components) std::sort(c.begin(), c.end());
}

NamedGraph parse_graph_name(std::string_view name) {
    if (name == "cycle") return NamedGraph::cycle;
    if (name == "double_hexagon") return NamedGraph::double_hexagon;
    if (name == "petersen_circulant") return NamedGraph::petersen_circulant;
    throw ConfigError("graph", "unknown graph name '" + std::string(name) + "'");
}

std::string_view to_string(NamedGraph name) {
    switch (name) {
        case NamedGraph::cycle: return "cycle";
        case NamedGraph::double_hexagon: return "double_hexagon";
        case NamedGraph::petersen_circulant: return "petersen_circulant";
    }
    return "?";
}

GraphSpec build_named(NamedGraph name, int vertices) {
    if (vertices < 3)
        throw ConfigError("M", "named graphs need at least 3 vertices");
    GraphSpec g;
    switch (name) {
        case NamedGraph::cycle:
            g = cycle(vertices);
            break;
        case NamedGraph::double_hexagon:
            if (vertices != 10) throw ConfigError("M", "double_hexagon requires M = 10");
            g = double_hexagon();
            break;
        case NamedGraph::petersen_circulant:
            if (vertices != 10) throw ConfigError("M", "petersen_circulant requires M = 10");
            g = petersen_circulant();
            break;
    }
    g.canonicalize();
    return g;
}

ValidationReport validate_decomposition(const GraphSpec& g) {
    ValidationReport report;
    auto& v = report.violations;
    const int m = g.vertices;
    const int d = g.coin_order();
    if (m < 1) v.push_back("vertex count must be positive");
    if (d < 1) v.push_back("at least one component is required");

    bool endpoints_ok = true;
    for (int k = 0; k < d; ++k) {
        const auto& comp = g.components[k];
        std::set<Edge> seen;
        std::vector<int> out(m + 1, 0), in(m + 1, 0);
        for (const auto& e : comp) {
            const std::string where = "component " + std::to_string(k + 1) + " edge " + edge_str(e);
            if (e.from < 1 || e.from > m || e.to < 1 || e.to > m) {
                v.push_back(where + ": endpoint outside 1.." + std::to_string(m));
                endpoints_ok = false;
                continue;
            }
            if (e.from == e.to) v.push_back(where + ": self-loop");
            if (!seen.insert(e).second) v.push_back(where + ": duplicate edge");
            ++out[e.from];
            ++in[e.to];
        }
        for (int mu = 1; mu <= m; ++mu) {
            if (out[mu] > 1 || in[mu] > 1)
                report.notes.push_back("component " + std::to_string(k + 1) +
                                       " is not a partial permutation at vertex " +
                                       std::to_string(mu));
        }
    }

    std::vector<int> paired(d + 1, 0);
    for (const auto& p : g.pairing) {
        const std::string name =
            "pair (" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
        if (p.first < 1 || p.first > d || p.second < 1 || p.second > d) {
            v.push_back(name + " references a missing component");
            continue;
        }
        ++paired[p.first];
        if (p.second != p.first) ++paired[p.second];
        if (sorted(g.components[p.first - 1]) != transpose(g.components[p.second - 1]))
            v.push_back(name + " not transposed");
    }
    for (int k = 1; k <= d; ++k)
        if (paired[k] > 1)
            v.push_back("component " + std::to_string(k) + " appears in more than one pair");

    if (endpoints_ok && m >= 1) {
        auto a = undirected_adjacency(g);
        for (int mu = 0; mu < m; ++mu)
            for (int nu = mu + 1; nu < m; ++nu)
                if (a[mu][nu] != a[nu][mu])
                    v.push_back("union of components not symmetric at {" + std::to_string(mu + 1) +
                                "," + std::to_string(nu + 1) + "}");
    }
    return report;
}

std::vector<std::vector<int>> undirected_adjacency(const GraphSpec& g) {
    std::vector<std::vector<int>> a(g.vertices, std::vector<int>(g.vertices, 0));
    for (const auto& comp : g.components)
        for (const auto& e : comp) a[e.from - 1][e.to - 1] = 1;
    return a;
}

GraphSpec swap_paired_components(const GraphSpec& g) {
    GraphSpec out = g;
    for (const auto& p : g.pairing)
        std::swap(out.components[p.first - 1], out.components[p.second - 1]);
    return out;
}

GraphSpec load_graph(std::string_view document) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError("graph", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("graph", "document must be an object");
    for (const char* key : {"M", "d", "components", "pairing"})
        if (!doc.contains(key)) throw ConfigError(key, "missing field");

    GraphSpec g;
    try {
        g.vertices = doc.at("M").get<int>();
        const int d = doc.at("d").get<int>();
        if (doc.contains("name")) g.name = doc.at("name").get<std::string>();
        const auto& comps = doc.at("components");
        if (!comps.is_array() || static_cast<int>(comps.size()) != d)
            throw ConfigError("components", "expected " + std::to_string(d) + " components");
        for (const auto& c : comps) {
            Component comp;
            for (const auto& e : c) {
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("components", "edges are [mu, nu] pairs");
                comp.push_back({e[0].get<int>(), e[1].get<int>()});
            }
            g.components.push_back(std::move(comp));
        }
        for (const auto& p : doc.at("pairing")) {
            if (!p.is_array() || p.size() != 2)
                throw ConfigError("pairing", "pairs are [k, k'] arrays");
            g.pairing.push_back({p[0].get<int>(), p[1].get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("graph", std::string("schema violation: ") + e.what());
    }
    g.canonicalize();

    const auto report = validate_decomposition(g);
    if (!report.ok()) {
        std::string msg;
        for (const auto& s : report.violations) msg += (msg.empty() ? "" : "; ") + s;
        throw ConfigError("graph", msg);
    }
    return g;
}

GraphSpec load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("graph", "cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str());
}

std::string dump_graph(const GraphSpec& g) {
    GraphSpec c = g;
    c.canonicalize();
    nlohmann::ordered_json doc;
    doc["name"] = c.name;
    doc["M"] = c.vertices;
    doc["d"] = c.coin_order();
    auto comps = nlohmann::ordered_json::array();
    for (const auto& comp : c.components) {
        auto edges = nlohmann::ordered_json::array();
        for (const auto& e : comp) edges.push_back({e.from, e.to});
        comps.push_back(std::move(edges));
    }
    doc["components"] = std::move(comps);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : c.pairing) pairs.push_back({p.first, p.second});
    doc["pairing"] = std::move(pairs);
    return doc.dump(2);
}

}  // namespace qwalk
