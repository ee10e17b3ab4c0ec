#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwalk {

// Directed edge between 1-based vertex labels.
struct Edge {
    int from = 0;
    int to = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

using Component = std::vector<Edge>;

// Pair of 1-based component indices declared mutually transposed.
struct ComponentPair {
    int first = 0;
    int second = 0;

    friend bool operator==(const ComponentPair&, const ComponentPair&) = default;
};

// Undirected graph given as d directed components, one per coin chirality.
// Component k holds the edges a particle may follow while the coin reads k.
struct GraphSpec {
    std::string name;
    int vertices = 0;
    std::vector<Component> components;
    std::vector<ComponentPair> pairing;

    int coin_order() const noexcept { return static_cast<int>(components.size()); }

    // Sorts every component's edges; the canonical form used for comparison
    // and serialization.
    void canonicalize();

    friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

enum class NamedGraph { cycle, double_hexagon, petersen_circulant };

NamedGraph parse_graph_name(std::string_view name);
std::string_view to_string(NamedGraph name);

GraphSpec build_named(NamedGraph name, int vertices);

struct ValidationReport {
    // Broken GraphSpec invariants; empty means the spec is usable.
    std::vector<std::string> violations;
    // Components that are not partial permutations. Reported but accepted,
    // since some built-in topologies (double hexagon) cannot avoid it.
    std::vector<std::string> notes;

    bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_decomposition(const GraphSpec& g);

// Graph file (JSON): {"M":..,"d":..,"components":[[[mu,nu],..],..],
// "pairing":[[k,k'],..],"name":..}. Throws ConfigError on schema or
// invariant violations.
GraphSpec load_graph(std::string_view document);
GraphSpec load_graph_file(const std::string& path);
std::string dump_graph(const GraphSpec& g);

// Entrywise max of all components as a dense 0/1 matrix, row = source.
std::vector<std::vector<int>> undirected_adjacency(const GraphSpec& g);

// Returns a copy where each declared pair (k,k') exchanges its edge sets.
GraphSpec swap_paired_components(const GraphSpec& g);

}  // namespace qwalk
