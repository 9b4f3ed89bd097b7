#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridrestore/netmodel.hpp"

namespace gridrestore {

struct AllocationWeights {
    double alpha = 1.0;  // restorable power weight
    double beta = 1.0;   // repair time weight
};

struct AllocationNode {
    PowerNodeId id{};
    double power_kw = 0.0;
    double repair_hours = 0.0;
    double demand = 0.0;  // residual demand, > 0
};

struct AllocationCrew {
    std::string id;
    double capacity = 0.0;
};

/// Stage-1 problem: share crew capacity over damaged nodes,
///
///   max  sum_k sum_i (alpha P_i - beta T_i) / q_i * y_ik
///   s.t. sum_i y_ik <= Q_k,   y_{i,k-1} <= y_ik,   0 <= y_ik <= q_i
///
/// with crews listed in sequence order.
struct AllocationProblem {
    std::vector<AllocationNode> nodes;
    std::vector<AllocationCrew> crews;
    AllocationWeights weights;
    // When set, nonpositive-score nodes become eligible: every per-unit
    // score is shifted so the worst node scores 1.
    bool force_service = false;

    void validate() const;
    double unit_score(std::size_t node) const;
};

struct AllocationSolution {
    std::vector<PowerNodeId> nodes;
    std::vector<std::string> crews;
    // y[node * crews.size() + crew]
    std::vector<double> y;
    // Value of the unshifted objective.
    double objective = 0.0;
    // Nodes with positive total allocation, in problem order.
    std::vector<PowerNodeId> selected;

    double at(std::size_t node, std::size_t crew) const { return y[node * crews.size() + crew]; }
};

AllocationSolution solve_allocation(const AllocationProblem& problem);

struct IterationSelection {
    std::vector<PowerNodeId> nodes;
    // Per crew (problem order): node -> q_{i,k} = y_ik > 0.
    std::vector<std::map<PowerNodeId, double>> per_crew;
    // Demand retired this iteration: max_k y_ik, the last crew's share.
    std::map<PowerNodeId, double> served;
};

IterationSelection select_iteration_nodes(const AllocationSolution& solution);

}  // namespace gridrestore
