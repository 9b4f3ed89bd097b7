#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gridrestore/allocate.hpp"
#include "gridrestore/netmodel.hpp"
#include "gridrestore/reduce.hpp"
#include "gridrestore/route.hpp"

namespace gridrestore {

struct TwoStageConfig {
    AllocationWeights allocation;
    RouteWeights routing;
    // Divide P_i by the scenario's largest P before it enters the routing objective.
    bool normalize_power = true;
    std::size_t exact_cap = kDefaultExactCap;
    std::size_t max_iterations = 10000;
};

struct IterationRecord {
    int index = 0;  // 1-based
    // Stage 1 ran with nonpositive-score nodes made eligible.
    bool forced = false;
    AllocationSolution allocation;
    std::shared_ptr<const ReducedGraph> reduced;
    // One problem/route pair per crew that received work, in sequence order.
    std::vector<RouteProblem> problems;
    std::vector<CrewRoute> routes;
    std::map<PowerNodeId, double> served;
    // Residual demand of every original damaged node after this iteration.
    std::map<PowerNodeId, double> residual;
};

struct ScheduleTotals {
    double travel_s = 0.0;
    double order_cost = 0.0;
    double power_restored_kw = 0.0;
    int iterations = 0;
};

struct Schedule {
    std::vector<IterationRecord> iterations;
    ScheduleTotals totals;
    double power_scale = 1.0;
};

/// Crew id -> home depot id. Crews without an explicit depot are dealt out
/// round-robin over the depot list in sequence order.
std::map<std::string, std::string> assign_home_depots(const DamageScenario& scenario);

/// Retires served demand. Nodes that reach zero leave the damaged list.
/// Throws OverServiceError when a quantity exceeds the residual.
DamageScenario apply_service(const DamageScenario& scenario, const std::map<PowerNodeId, double>& served);

/// Alternates allocation and routing until every demand is met.
Schedule run_two_stage(const DamageScenario& scenario, const RoadNetwork& roads, const ProjectionMap& projection,
                       const TwoStageConfig& config = {});

/// Schedule-level invariants (conservation, monotone residuals, completion,
/// restored power, route/allocation agreement) plus every route certificate.
/// Returns human-readable violations; empty means the schedule checks out.
std::vector<std::string> check_schedule(const Schedule& schedule, const DamageScenario& original);

}  // namespace gridrestore
