#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridrestore {

// Strongly typed node identifiers. Distribution-network and road-network ids
// live in separate namespaces and must not be mixed up.
enum class PowerNodeId : std::int64_t {};
enum class RoadNodeId : std::int64_t {};

constexpr std::int64_t raw(PowerNodeId id) noexcept { return static_cast<std::int64_t>(id); }
constexpr std::int64_t raw(RoadNodeId id) noexcept { return static_cast<std::int64_t>(id); }

/// Geodesic coordinate in degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Great-circle distance in meters on a spherical Earth (radius 6371008.8 m).
double haversine_m(GeoPoint a, GeoPoint b) noexcept;

/// Free-flow speed assumed for road edges that carry no speed attribute (m/s).
inline constexpr double kDefaultSpeedMps = 13.9;

struct PowerNode {
    PowerNodeId id{};
    GeoPoint coord;
    friend bool operator==(const PowerNode&, const PowerNode&) = default;
};

struct PowerLine {
    PowerNodeId a{};
    PowerNodeId b{};
    friend bool operator==(const PowerLine&, const PowerLine&) = default;
};

/// Undirected distribution network. Validated on construction: unique ids,
/// edge endpoints present, finite coordinates, connected.
class PowerNetwork {
public:
    PowerNetwork() = default;
    PowerNetwork(std::vector<PowerNode> nodes, std::vector<PowerLine> edges);

    std::span<const PowerNode> nodes() const noexcept { return nodes_; }
    std::span<const PowerLine> edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    bool contains(PowerNodeId id) const { return index_.contains(id); }
    const PowerNode& node(PowerNodeId id) const;

    friend bool operator==(const PowerNetwork& a, const PowerNetwork& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::vector<PowerNode> nodes_;
    std::vector<PowerLine> edges_;
    std::unordered_map<PowerNodeId, std::size_t> index_;
};

struct RoadNode {
    RoadNodeId id{};
    GeoPoint coord;
    friend bool operator==(const RoadNode&, const RoadNode&) = default;
};

struct RoadEdge {
    RoadNodeId a{};
    RoadNodeId b{};
    double length_m = 0.0;
    double speed_mps = kDefaultSpeedMps;

    double travel_time_s() const noexcept { return length_m / speed_mps; }
    friend bool operator==(const RoadEdge&, const RoadEdge&) = default;
};

/// Undirected road graph with travel-time weighted edges. Parallel edges are
/// kept; self-loops and nonpositive lengths or speeds are rejected.
class RoadNetwork {
public:
    struct Arc {
        std::size_t to;
        double time_s;
    };

    RoadNetwork() = default;
    RoadNetwork(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges);

    std::span<const RoadNode> nodes() const noexcept { return nodes_; }
    std::span<const RoadEdge> edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    bool contains(RoadNodeId id) const { return index_.contains(id); }
    std::optional<std::size_t> index_of(RoadNodeId id) const;
    const RoadNode& node_at(std::size_t index) const { return nodes_[index]; }
    const RoadNode& node(RoadNodeId id) const;
    std::span<const Arc> arcs(std::size_t index) const { return adjacency_[index]; }

    friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::vector<RoadNode> nodes_;
    std::vector<RoadEdge> edges_;
    std::unordered_map<RoadNodeId, std::size_t> index_;
    std::vector<std::vector<Arc>> adjacency_;
};

struct Projection {
    RoadNodeId road{};
    double distance_m = 0.0;
    friend bool operator==(const Projection&, const Projection&) = default;
};

/// Nearest road node for every power node.
struct ProjectionMap {
    std::map<PowerNodeId, Projection> entries;

    bool contains(PowerNodeId id) const { return entries.contains(id); }
    const Projection& at(PowerNodeId id) const;
    std::size_t size() const noexcept { return entries.size(); }
};

/// Maps every power node to the road node with the smallest great-circle
/// distance; ties go to the smallest road-node id.
ProjectionMap project_power_onto_roads(const PowerNetwork& power, const RoadNetwork& roads);

struct DamagedNode {
    PowerNodeId id{};
    double power_kw = 0.0;
    double repair_hours = 0.0;
    double demand = 0.0;
    friend bool operator==(const DamagedNode&, const DamagedNode&) = default;
};

struct Depot {
    std::string id;
    RoadNodeId road{};
    friend bool operator==(const Depot&, const Depot&) = default;
};

enum class CrewKind { tree, line };

const char* to_string(CrewKind kind) noexcept;
std::optional<CrewKind> crew_kind_from_string(std::string_view text) noexcept;

struct Crew {
    std::string id;
    CrewKind kind = CrewKind::line;
    double capacity = 0.0;
    int sequence_index = 0;
    // Multiplier turning base travel times into this crew's route costs.
    double cost_scale = 1.0;
    // Empty means round-robin assignment by sequence order.
    std::string home_depot;
    friend bool operator==(const Crew&, const Crew&) = default;
};

struct DamageScenario {
    std::vector<DamagedNode> damaged;
    std::vector<Depot> depots;
    std::vector<Crew> crews;

    /// Throws ValidationError on the first broken invariant.
    void validate() const;
    /// validate() plus: every depot sits on a node of `roads`.
    void validate(const RoadNetwork& roads) const;

    std::vector<Crew> crews_in_sequence() const;
    const DamagedNode* find(PowerNodeId id) const;
    const Depot* find_depot(std::string_view id) const;

    friend bool operator==(const DamageScenario&, const DamageScenario&) = default;
};

}  // namespace gridrestore
