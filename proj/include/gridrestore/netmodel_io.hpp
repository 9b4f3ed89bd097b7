#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gridrestore/netmodel.hpp"

namespace gridrestore {

// File formats
// ------------
// Tabular (UTF-8, line oriented). Blank lines and lines starting with '#'
// are ignored. A line "[section]" opens a section; its first line is a
// comma-separated header, and columns are matched by name.
//
//   network files:   [nodes]  id,lat,lon
//                    [edges]  id_a,id_b[,length_m,speed_mps]
//   scenario files:  [damaged] node_id,power_kw,repair_hours,demand
//                    [depots]  depot_id,road_node_id
//                    [crews]   crew_id,kind,capacity,sequence_index[,cost_scale,home_depot]
//
// Road edges need length_m; an absent or blank speed_mps takes the
// configured default speed.
//
// GraphML: <node id=...> with data keys lat/lon (or y/x), <edge source target>
// with length_m (or length) and speed_mps (or speed_kph).

enum class NetworkFormat { automatic, tabular, graphml };

struct RoadLoadOptions {
    NetworkFormat format = NetworkFormat::automatic;
    double default_speed_mps = kDefaultSpeedMps;
};

PowerNetwork load_power_network(const std::filesystem::path& path,
                                NetworkFormat format = NetworkFormat::automatic);
RoadNetwork load_road_network(const std::filesystem::path& path, const RoadLoadOptions& options = {});
DamageScenario load_damage_scenario(const std::filesystem::path& path);
/// Also checks that every depot sits on a node of `roads`.
DamageScenario load_damage_scenario(const std::filesystem::path& path, const RoadNetwork& roads);

PowerNetwork parse_power_network(std::istream& in, const std::string& source,
                                 NetworkFormat format = NetworkFormat::tabular);
RoadNetwork parse_road_network(std::istream& in, const std::string& source,
                               const RoadLoadOptions& options = {});
DamageScenario parse_damage_scenario(std::istream& in, const std::string& source);

void write_power_network(std::ostream& out, const PowerNetwork& net,
                         NetworkFormat format = NetworkFormat::tabular);
void write_road_network(std::ostream& out, const RoadNetwork& net,
                        NetworkFormat format = NetworkFormat::tabular);
void write_damage_scenario(std::ostream& out, const DamageScenario& scenario);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace gridrestore
