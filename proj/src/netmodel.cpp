#include "gridrestore/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gridrestore/errors.hpp"

namespace gridrestore {

namespace {

constexpr double kEarthRadiusM = 6371008.8;

bool finite_coord(GeoPoint p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && std::abs(p.lat) <= 90.0 &&
           std::abs(p.lon) <= 180.0;
}

}  // namespace

double haversine_m(GeoPoint a, GeoPoint b) noexcept {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double s = std::sin(dlat / 2.0);
    const double t = std::sin(dlon / 2.0);
    const double h = s * s + std::cos(a.lat * deg) * std::cos(b.lat * deg) * t * t;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

PowerNetwork::PowerNetwork(std::vector<PowerNode> nodes, std::vector<PowerLine> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!finite_coord(n.coord))
            throw ValidationError("power node " + std::to_string(raw(n.id)) + " has an invalid coordinate");
        if (!index_.emplace(n.id, i).second)
            throw ValidationError("duplicate power node id " + std::to_string(raw(n.id)));
    }

    // Union-find over node indices for the connectivity check.
    std::vector<std::size_t> parent(nodes_.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = nodes_.size();
    for (const auto& e : edges_) {
        auto ia = index_.find(e.a);
        auto ib = index_.find(e.b);
        if (ia == index_.end() || ib == index_.end()) {
            const auto missing = ia == index_.end() ? e.a : e.b;
            throw ValidationError("power line references unknown node " + std::to_string(raw(missing)));
        }
        const auto ra = find(ia->second);
        const auto rb = find(ib->second);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    if (components > 1)
        throw ValidationError("power network is not connected (" + std::to_string(components) +
                              " components)");
}

const PowerNode& PowerNetwork::node(PowerNodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown power node " + std::to_string(raw(id)));
    return nodes_[it->second];
}

RoadNetwork::RoadNetwork(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!finite_coord(n.coord))
            throw ValidationError("road node " + std::to_string(raw(n.id)) + " has an invalid coordinate");
        if (!index_.emplace(n.id, i).second)
            throw ValidationError("duplicate road node id " + std::to_string(raw(n.id)));
    }
    adjacency_.resize(nodes_.size());
    for (const auto& e : edges_) {
        const std::string label = std::to_string(raw(e.a)) + "-" + std::to_string(raw(e.b));
        auto ia = index_.find(e.a);
        auto ib = index_.find(e.b);
        if (ia == index_.end() || ib == index_.end())
            throw ValidationError("road edge " + label + " references an unknown node");
        if (e.a == e.b) throw ValidationError("road edge " + label + " is a self-loop");
        if (!(e.length_m > 0.0) || !std::isfinite(e.length_m))
            throw ValidationError("road edge " + label + " has nonpositive length");
        if (!(e.speed_mps > 0.0) || !std::isfinite(e.speed_mps))
            throw ValidationError("road edge " + label + " has nonpositive speed");
        const double t = e.travel_time_s();
        adjacency_[ia->second].push_back({ib->second, t});
        adjacency_[ib->second].push_back({ia->second, t});
    }
}

std::optional<std::size_t> RoadNetwork::index_of(RoadNodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const RoadNode& RoadNetwork::node(RoadNodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown road node " + std::to_string(raw(id)));
    return nodes_[it->second];
}

const Projection& ProjectionMap::at(PowerNodeId id) const {
    auto it = entries.find(id);
    if (it == entries.end())
        throw ValidationError("power node " + std::to_string(raw(id)) + " has no projection");
    return it->second;
}

ProjectionMap project_power_onto_roads(const PowerNetwork& power, const RoadNetwork& roads) {
    if (power.empty() || roads.empty())
        throw ValidationError("projection needs nonempty power and road networks");
    ProjectionMap pm;
    for (const auto& p : power.nodes()) {
        const RoadNode* best = nullptr;
        double best_d = 0.0;
        for (const auto& r : roads.nodes()) {
            const double d = haversine_m(p.coord, r.coord);
            if (!best || d < best_d || (d == best_d && raw(r.id) < raw(best->id))) {
                best = &r;
                best_d = d;
            }
        }
        pm.entries.emplace(p.id, Projection{best->id, best_d});
    }
    return pm;
}

const char* to_string(CrewKind kind) noexcept {
    return kind == CrewKind::tree ? "tree" : "line";
}

std::optional<CrewKind> crew_kind_from_string(std::string_view text) noexcept {
    if (text == "tree") return CrewKind::tree;
    if (text == "line") return CrewKind::line;
    return std::nullopt;
}

void DamageScenario::validate() const {
    std::set<PowerNodeId> seen;
    for (const auto& d : damaged) {
        const std::string id = std::to_string(raw(d.id));
        if (!seen.insert(d.id).second) throw ValidationError("duplicate damaged node " + id);
        if (!(d.demand > 0.0) || !std::isfinite(d.demand))
            throw ValidationError("damaged node " + id + " must have positive demand");
        if (!(d.power_kw >= 0.0) || !std::isfinite(d.power_kw))
            throw ValidationError("damaged node " + id + " has negative restorable power");
        if (!(d.repair_hours >= 0.0) || !std::isfinite(d.repair_hours))
            throw ValidationError("damaged node " + id + " has negative repair time");
    }
    if (depots.empty()) throw ValidationError("scenario needs at least one depot");
    std::set<std::string> depot_ids;
    for (const auto& dp : depots)
        if (!depot_ids.insert(dp.id).second) throw ValidationError("duplicate depot id " + dp.id);

    std::set<std::string> crew_ids;
    std::vector<int> order;
    for (const auto& c : crews) {
        if (!crew_ids.insert(c.id).second) throw ValidationError("duplicate crew id " + c.id);
        if (!(c.capacity > 0.0) || !std::isfinite(c.capacity))
            throw ValidationError("crew " + c.id + " must have positive capacity");
        if (!(c.cost_scale > 0.0) || !std::isfinite(c.cost_scale))
            throw ValidationError("crew " + c.id + " must have a positive cost scale");
        if (!c.home_depot.empty() && !depot_ids.contains(c.home_depot))
            throw ValidationError("crew " + c.id + " references unknown depot " + c.home_depot);
        order.push_back(c.sequence_index);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] != static_cast<int>(i))
            throw ValidationError("crew sequence indices must be a permutation of 0..K-1");
    const auto seq = crews_in_sequence();
    bool seen_line = false;
    for (const auto& c : seq) {
        if (c.kind == CrewKind::line) seen_line = true;
        else if (seen_line) throw ValidationError("tree crew " + c.id + " is sequenced after a line crew");
    }
}

void DamageScenario::validate(const RoadNetwork& roads) const {
    validate();
    for (const auto& dp : depots)
        if (!roads.contains(dp.road))
            throw ValidationError("depot " + dp.id + " sits on unknown road node " +
                                  std::to_string(raw(dp.road)));
}

std::vector<Crew> DamageScenario::crews_in_sequence() const {
    auto out = crews;
    std::stable_sort(out.begin(), out.end(),
                     [](const Crew& a, const Crew& b) { return a.sequence_index < b.sequence_index; });
    return out;
}

const DamagedNode* DamageScenario::find(PowerNodeId id) const {
    auto it = std::find_if(damaged.begin(), damaged.end(), [&](const auto& d) { return d.id == id; });
    return it == damaged.end() ? nullptr : &*it;
}

const Depot* DamageScenario::find_depot(std::string_view id) const {
    auto it = std::find_if(depots.begin(), depots.end(), [&](const auto& d) { return d.id == id; });
    return it == depots.end() ? nullptr : &*it;
}

}  // namespace gridrestore
