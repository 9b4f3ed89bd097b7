#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gridrestore/reduce.hpp"

namespace gridrestore {

struct RouteWeights {
    double alpha = 1.0;  // repair time weight on visit order
    double beta = 1.0;   // restorable power weight on visit order
};

struct RouteNodeAttrs {
    double power_kw = 0.0;
    double repair_hours = 0.0;
};

struct RouteCrew {
    std::string id;
    double capacity = 0.0;
    double cost_scale = 1.0;
    // Home depot; the route starts at its start terminal and ends at its end terminal.
    std::string depot;
};

/// Default ceiling on assigned nodes for the exact subset solver.
inline constexpr std::size_t kDefaultExactCap = 18;
// Memory bound of the subset table (2^20 x 20 states).
inline constexpr std::size_t kHardExactCap = 20;

/// Single-crew routing problem over a reduced graph.
///
/// Objective of an ordering (start, v1..vm, end):
///   sum of scaled travel times + sum_i (alpha T_i - beta P_i / power_scale) * t_i
/// where t_i is the 1-based position of v_i.
struct RouteProblem {
    std::shared_ptr<const ReducedGraph> reduced;
    RouteCrew crew;
    std::map<PowerNodeId, double> assignments;  // q_{i,k} > 0
    std::map<PowerNodeId, RouteNodeAttrs> attrs;
    RouteWeights weights;
    double power_scale = 1.0;
    std::size_t exact_cap = kDefaultExactCap;

    std::size_t start_terminal() const;
    std::size_t end_terminal() const;
    /// Scaled travel cost c_ijk between terminals.
    double cost(std::size_t from, std::size_t to) const { return reduced->weight(from, to) * crew.cost_scale; }
    /// Per-position coefficient of a damaged node in the order term.
    double order_weight(PowerNodeId node) const;
    /// Assigned quantity at a terminal; zero for depots and unassigned nodes.
    double demand_at(std::size_t terminal) const;
    double total_demand() const;
};

struct CostBreakdown {
    double travel = 0.0;
    double order = 0.0;
    double total = 0.0;
};

struct CrewRoute {
    std::string crew_id;
    // Terminal indices into the reduced graph, start depot first, end depot last.
    std::vector<std::size_t> sequence;
    // t and u, aligned with `sequence`.
    std::vector<int> visit_order;
    std::vector<double> load;
    double travel_cost = 0.0;
    double order_cost = 0.0;
    double objective = 0.0;
};

/// Re-costs an ordering. Throws ValidationError if it is not a start..end
/// ordering of the assigned nodes.
CostBreakdown route_cost(std::span<const std::size_t> sequence, const RouteProblem& problem);

/// Exact minimum-cost ordering by subset dynamic programming.
CrewRoute solve_route(const RouteProblem& problem);

enum class ConstraintFamily {
    degree,
    flow_conservation,
    visit_order,
    order_monotonicity,
    resource_balance,
    capacity_bound,
};

const char* to_string(ConstraintFamily family) noexcept;

struct Violation {
    ConstraintFamily family;
    std::string detail;
};

/// Checks every routing constraint family; an empty result means feasible.
std::vector<Violation> validate_route(const CrewRoute& route, const RouteProblem& problem);

}  // namespace gridrestore
