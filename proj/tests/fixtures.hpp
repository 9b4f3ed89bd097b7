#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <vector>

#include "gridrestore/allocate.hpp"
#include "gridrestore/netmodel.hpp"
#include "gridrestore/reduce.hpp"
#include "gridrestore/route.hpp"

namespace fixture {

using namespace gridrestore;

inline std::filesystem::path data_dir() { return GRIDRESTORE_DATA_DIR; }

inline DamagedNode damaged(std::int64_t id, double p, double t, double q) { return {PowerNodeId{id}, p, t, q}; }

// The five-node primary-feeder damage table with one line crew.
inline std::vector<DamagedNode> feeder5_nodes() {
    return {damaged(37215, 78.43, 3.59, 6), damaged(23214, 302.17, 2.55, 1), damaged(8433, 10476.66, 1.13, 4),
            damaged(36856, 10764.30, 2.75, 4), damaged(51201, 10773.17, 1.14, 8)};
}

inline AllocationProblem allocation_problem(const std::vector<DamagedNode>& nodes, const std::vector<double>& caps,
                                            double alpha = 1.0, double beta = 1.0) {
    AllocationProblem p;
    for (const auto& d : nodes) p.nodes.push_back({d.id, d.power_kw, d.repair_hours, d.demand});
    for (std::size_t k = 0; k < caps.size(); ++k) p.crews.push_back({"C" + std::to_string(k), caps[k]});
    p.weights = {alpha, beta};
    return p;
}

inline std::int64_t rand_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline double rand_real(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Connected random road graph: a random spanning tree plus `extra` chords.
/// With `integer_times` every edge has integer length and speed 1, so every
/// path sum is exact in floating point.
inline RoadNetwork random_roads(std::mt19937_64& rng, std::size_t n, std::size_t extra, bool integer_times) {
    std::vector<RoadNode> nodes;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back({RoadNodeId{static_cast<std::int64_t>(i + 1)},
                         {32.0 + rand_real(rng, 0.0, 0.05), -97.0 + rand_real(rng, 0.0, 0.05)}});
    auto edge = [&](std::size_t a, std::size_t b) {
        RoadEdge e{nodes[a].id, nodes[b].id, 1.0, 1.0};
        if (integer_times) {
            e.length_m = static_cast<double>(rand_int(rng, 1, 100));
        } else {
            e.length_m = rand_real(rng, 5.0, 900.0);
            e.speed_mps = rand_real(rng, 4.0, 30.0);
        }
        return e;
    };
    std::vector<RoadEdge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back(edge(static_cast<std::size_t>(rand_int(rng, 0, i - 1)), i));
    for (std::size_t k = 0; k < extra && n > 1; ++k) {
        const auto a = static_cast<std::size_t>(rand_int(rng, 0, n - 1));
        auto b = static_cast<std::size_t>(rand_int(rng, 0, n - 2));
        if (b >= a) ++b;
        edges.push_back(edge(a, b));
    }
    return RoadNetwork(std::move(nodes), std::move(edges));
}

/// Reduced graph over one depot (start and end at the same place) and
/// damaged nodes 1..m, with symmetric integer weights in [1, 50].
/// `w` receives the row-major (m + 2)^2 matrix.
inline std::shared_ptr<ReducedGraph> random_reduced(std::mt19937_64& rng, std::size_t m, std::vector<double>& w) {
    const std::size_t n = m + 2;
    std::vector<Terminal> t;
    t.push_back({TerminalKind::depot_start, {}, "D1", RoadNodeId{0}});
    for (std::size_t i = 1; i <= m; ++i)
        t.push_back({TerminalKind::damaged, PowerNodeId{static_cast<std::int64_t>(i)}, "", RoadNodeId{static_cast<std::int64_t>(i)}});
    t.push_back({TerminalKind::depot_end, {}, "D1", RoadNodeId{0}});
    w.assign(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const bool depot_pair = a == 0 && b == n - 1;
            const double v = depot_pair ? 0.0 : static_cast<double>(rand_int(rng, 1, 50));
            w[a * n + b] = w[b * n + a] = v;
        }
    // The end depot sits where the start depot does.
    for (std::size_t a = 1; a <= m; ++a) w[a * n + n - 1] = w[(n - 1) * n + a] = w[a];
    return std::make_shared<ReducedGraph>(std::move(t), w);
}

/// Route problem over `graph` assigning each damaged terminal with integer
/// demand, integer P and T, and integer weights, so objectives are exact.
inline RouteProblem random_route_problem(std::mt19937_64& rng, std::shared_ptr<ReducedGraph> graph, std::size_t m) {
    RouteProblem p;
    p.reduced = std::move(graph);
    p.crew = {"L1", 0.0, 1.0, "D1"};
    for (std::size_t i = 1; i <= m; ++i) {
        const PowerNodeId id{static_cast<std::int64_t>(i)};
        const double q = static_cast<double>(rand_int(rng, 1, 8));
        p.assignments[id] = q;
        p.crew.capacity += q;
        p.attrs[id] = {static_cast<double>(rand_int(rng, 1, 40)), static_cast<double>(rand_int(rng, 1, 4))};
    }
    p.weights = {static_cast<double>(rand_int(rng, 0, 3)), static_cast<double>(rand_int(rng, 0, 3))};
    p.power_scale = 1.0;
    return p;
}

}  // namespace fixture
