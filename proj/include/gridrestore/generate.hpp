#pragma once

#include <cstdint>
#include <filesystem>

#include "gridrestore/netmodel.hpp"

namespace gridrestore {

/// Places a point given in local east/north meters (rotated counter-clockwise
/// by `rotation_deg` and multiplied by `scale`) relative to `origin`.
GeoPoint place_local(GeoPoint origin, double east_m, double north_m, double rotation_deg = 0.0, double scale = 1.0);

struct GeneratorOptions {
    std::uint64_t seed = 1;
    std::size_t road_nodes = 25;
    std::size_t damaged = 3;
    std::size_t depots = 1;
    // 0 picks max(road_nodes, damaged).
    std::size_t power_nodes = 0;
    std::size_t line_crews = 1;
    std::size_t tree_crews = 0;
    double capacity = 15.0;
    GeoPoint origin{32.7767, -96.7970};
    double spacing_m = 250.0;
};

struct ScenarioBundle {
    RoadNetwork roads;
    PowerNetwork power;
    DamageScenario scenario;
};

/// Connected road grid with randomized lengths and speeds, a tree-shaped
/// power overlay near the roads, and a damage table with P in
/// [78.43, 10773.17] kW, T in [1.13, 3.59] h and integer q in [1, 8].
/// Identical options give identical bundles.
ScenarioBundle generate_bundle(const GeneratorOptions& options);

/// Writes roads.csv, power.csv and scenario.csv into `dir`.
void write_bundle(const ScenarioBundle& bundle, const std::filesystem::path& dir);

}  // namespace gridrestore
