#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridrestore/netmodel.hpp"

namespace gridrestore {

struct ShortestPathLabel {
    double time_s = 0.0;
    // Previous road node on the shortest path; empty at the source.
    std::optional<RoadNodeId> predecessor;
};

using ShortestPathTree = std::unordered_map<RoadNodeId, ShortestPathLabel>;

/// Exact single-source travel times (Dijkstra). Unreachable nodes are absent.
ShortestPathTree shortest_paths_from(const RoadNetwork& roads, RoadNodeId source);

/// Road-node sequence source..target recovered from a tree, empty if unreachable.
std::vector<RoadNodeId> extract_path(const ShortestPathTree& tree, RoadNodeId target);

enum class TerminalKind { depot_start, damaged, depot_end };

const char* to_string(TerminalKind kind) noexcept;

struct Terminal {
    TerminalKind kind = TerminalKind::damaged;
    // Power-node id for damaged terminals.
    PowerNodeId power{};
    // Depot id for depot terminals.
    std::string depot;
    RoadNodeId road{};

    /// Stable text label, e.g. "start:D1", "damaged:8433", "end:D1".
    std::string label() const;
    friend bool operator==(const Terminal&, const Terminal&) = default;
};

/// Complete weighted graph over depots and damaged nodes. Terminal order is
/// every depot start, the damaged nodes in input order, then every depot end.
/// Weights are symmetric shortest-path travel times in seconds.
class ReducedGraph {
public:
    ReducedGraph() = default;
    /// Builds from an explicit dense row-major matrix (no road paths).
    ReducedGraph(std::vector<Terminal> terminals, std::vector<double> weights);

    std::size_t size() const noexcept { return terminals_.size(); }
    std::span<const Terminal> terminals() const noexcept { return terminals_; }
    const Terminal& terminal(std::size_t i) const { return terminals_[i]; }

    double weight(std::size_t i, std::size_t j) const { return weights_[i * terminals_.size() + j]; }
    std::span<const double> weights() const noexcept { return weights_; }

    bool has_paths() const noexcept { return !paths_.empty(); }
    /// Road-node sequence from terminal i to terminal j (empty if not stored).
    std::vector<RoadNodeId> path(std::size_t i, std::size_t j) const;

    std::optional<std::size_t> start_of(std::string_view depot) const;
    std::optional<std::size_t> end_of(std::string_view depot) const;
    std::optional<std::size_t> index_of(PowerNodeId damaged) const;

private:
    friend ReducedGraph build_reduced_graph(const RoadNetwork&, const ProjectionMap&, std::span<const PowerNodeId>,
                                            std::span<const Depot>);
    std::vector<Terminal> terminals_;
    std::vector<double> weights_;
    // paths_[i * n + j] for i < j, stored in the i -> j direction.
    std::vector<std::vector<RoadNodeId>> paths_;
};

/// Contracts the road network onto the selected damaged nodes and depots.
/// Throws UnreachableError naming the first disconnected terminal pair.
ReducedGraph build_reduced_graph(const RoadNetwork& roads, const ProjectionMap& projection,
                                 std::span<const PowerNodeId> selected, std::span<const Depot> depots);

/// Writes "terminals,<label>..." then one labelled row per terminal.
void write_reduced_graph(std::ostream& out, const ReducedGraph& graph);

}  // namespace gridrestore
