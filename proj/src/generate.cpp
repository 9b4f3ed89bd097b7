#include "gridrestore/generate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include "gridrestore/errors.hpp"
#include "gridrestore/netmodel_io.hpp"

namespace gridrestore {

namespace {

constexpr std::int64_t kRoadIdBase = 100000;
constexpr std::int64_t kPowerIdBase = 10000;
constexpr double kSpeedsMps[] = {8.9, 11.2, 13.9, 17.9, 24.6};

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

// Uniform draws built from raw engine output so files are reproducible
// across standard library implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

void shuffle(std::mt19937_64& rng, std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

}  // namespace

GeoPoint place_local(GeoPoint origin, double east_m, double north_m, double rotation_deg, double scale) {
    constexpr double kMetersPerDegLat = 111320.0;
    const double a = rotation_deg * std::numbers::pi / 180.0;
    const double e = scale * (east_m * std::cos(a) - north_m * std::sin(a));
    const double n = scale * (east_m * std::sin(a) + north_m * std::cos(a));
    const double lat = origin.lat + n / kMetersPerDegLat;
    const double lon = origin.lon + e / (kMetersPerDegLat * std::cos(origin.lat * std::numbers::pi / 180.0));
    return {lat, lon};
}

ScenarioBundle generate_bundle(const GeneratorOptions& o) {
    if (o.road_nodes < 1 || o.depots < 1) throw ValidationError("generator needs at least one road node and one depot");
    if (o.depots > o.road_nodes) throw ValidationError("more depots than road nodes");
    const std::size_t power_count = o.power_nodes ? o.power_nodes : std::max(o.road_nodes, o.damaged);
    if (o.damaged > power_count) throw ValidationError("more damaged nodes than power nodes");
    if (!(o.capacity > 0.0)) throw ValidationError("crew capacity must be positive");

    std::mt19937_64 rng(o.seed);
    const auto width = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(o.road_nodes))));

    std::vector<RoadNode> rnodes;
    for (std::size_t k = 0; k < o.road_nodes; ++k) {
        const double east = static_cast<double>(k % width) * o.spacing_m + uniform(rng, -0.2, 0.2) * o.spacing_m;
        const double north = static_cast<double>(k / width) * o.spacing_m + uniform(rng, -0.2, 0.2) * o.spacing_m;
        const auto p = place_local(o.origin, east, north);
        rnodes.push_back({RoadNodeId{kRoadIdBase + static_cast<std::int64_t>(k)}, {round_to(p.lat, 7), round_to(p.lon, 7)}});
    }
    std::vector<RoadEdge> redges;
    auto link = [&](std::size_t a, std::size_t b) {
        const double straight = haversine_m(rnodes[a].coord, rnodes[b].coord);
        const double len = std::max(1.0, round_to(straight * uniform(rng, 1.0, 1.25), 1));
        const double speed = kSpeedsMps[pick(rng, std::size(kSpeedsMps))];
        redges.push_back({rnodes[a].id, rnodes[b].id, len, speed});
    };
    for (std::size_t k = 0; k < o.road_nodes; ++k) {
        if (k % width) link(k - 1, k);
        if (k >= width) link(k - width, k);
    }

    std::vector<PowerNode> pnodes;
    for (std::size_t k = 0; k < power_count; ++k) {
        const auto& anchor = rnodes[pick(rng, rnodes.size())].coord;
        const auto p = place_local(anchor, uniform(rng, -60.0, 60.0), uniform(rng, -60.0, 60.0));
        pnodes.push_back({PowerNodeId{kPowerIdBase + static_cast<std::int64_t>(k)}, {round_to(p.lat, 7), round_to(p.lon, 7)}});
    }
    std::vector<PowerLine> pedges;
    for (std::size_t k = 1; k < power_count; ++k) {
        const std::size_t lo = k > 10 ? k - 10 : 0;
        pedges.push_back({pnodes[lo + pick(rng, k - lo)].id, pnodes[k].id});
    }

    DamageScenario s;
    std::vector<std::size_t> order(power_count);
    std::iota(order.begin(), order.end(), 0);
    shuffle(rng, order);
    for (std::size_t k = 0; k < o.damaged; ++k) {
        DamagedNode d;
        d.id = pnodes[order[k]].id;
        d.power_kw = round_to(uniform(rng, 78.43, 10773.17), 2);
        d.repair_hours = round_to(uniform(rng, 1.13, 3.59), 2);
        d.demand = static_cast<double>(1 + pick(rng, 8));
        s.damaged.push_back(d);
    }
    std::vector<std::size_t> roads_order(o.road_nodes);
    std::iota(roads_order.begin(), roads_order.end(), 0);
    shuffle(rng, roads_order);
    for (std::size_t k = 0; k < o.depots; ++k)
        s.depots.push_back({"D" + std::to_string(k + 1), rnodes[roads_order[k]].id});
    int seq = 0;
    for (std::size_t k = 0; k < o.tree_crews; ++k)
        s.crews.push_back({"T" + std::to_string(k + 1), CrewKind::tree, o.capacity, seq++, 1.0, {}});
    for (std::size_t k = 0; k < o.line_crews; ++k)
        s.crews.push_back({"L" + std::to_string(k + 1), CrewKind::line, o.capacity, seq++, 1.0, {}});

    ScenarioBundle b{RoadNetwork(std::move(rnodes), std::move(redges)),
                     PowerNetwork(std::move(pnodes), std::move(pedges)), std::move(s)};
    b.scenario.validate(b.roads);
    return b;
}

void write_bundle(const ScenarioBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    auto emit = [&](const char* name, auto&& writer) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        writer(out);
        if (!out) throw IoError("failed writing " + (dir / name).string());
    };
    emit("roads.csv", [&](std::ostream& out) { write_road_network(out, bundle.roads); });
    emit("power.csv", [&](std::ostream& out) { write_power_network(out, bundle.power); });
    emit("scenario.csv", [&](std::ostream& out) { write_damage_scenario(out, bundle.scenario); });
}

}  // namespace gridrestore
