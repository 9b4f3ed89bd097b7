#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gridrestore/orchestrate.hpp"

namespace gridrestore {

inline constexpr const char* kScheduleSchema = "gridrestore.schedule/1";

/// Structured JSON report: run configuration, every iteration's allocation,
/// served and residual demand, and per-crew stops with t and u values.
void write_schedule_report(std::ostream& out, const Schedule& schedule, const TwoStageConfig& config);

struct LoadedSchedule {
    Schedule schedule;
    TwoStageConfig config;
};

/// Rebuilds a Schedule from a report. Reduced graphs and route problems are
/// recomputed from the inputs; crew capacities and node attributes come from
/// `scenario`, assignments from the report's allocation block.
LoadedSchedule read_schedule_report(std::istream& in, const std::string& source, const RoadNetwork& roads,
                                    const ProjectionMap& projection, const DamageScenario& scenario);

/// GeoJSON FeatureCollection: one LineString per crew route following road
/// paths, plus Point features for depots and damaged nodes.
void write_route_geojson(std::ostream& out, const Schedule& schedule, const RoadNetwork& roads,
                         const PowerNetwork& power, const DamageScenario& scenario);

/// Plain-text summary: iterations, travel seconds, restored power, then a
/// per-iteration table.
void write_summary(std::ostream& out, const Schedule& schedule);

}  // namespace gridrestore
