#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "gridrestore/errors.hpp"
#include "gridrestore/netmodel_io.hpp"
#include "gridrestore/reduce.hpp"
#include "oracles.hpp"

using namespace gridrestore;

namespace {

struct Located {
    RoadNetwork roads;
    ProjectionMap pm;
    std::vector<PowerNodeId> damaged;
    std::vector<Depot> depots;
};

// Damaged nodes pinned directly on chosen road nodes.
Located place(RoadNetwork roads, std::mt19937_64& rng, std::size_t damaged, std::size_t depots) {
    Located l{std::move(roads), {}, {}, {}};
    const auto n = static_cast<std::int64_t>(l.roads.size());
    for (std::size_t i = 0; i < damaged; ++i) {
        const PowerNodeId id{static_cast<std::int64_t>(1000 + i)};
        l.pm.entries[id] = {RoadNodeId{fixture::rand_int(rng, 1, n)}, 0.0};
        l.damaged.push_back(id);
    }
    for (std::size_t k = 0; k < depots; ++k)
        l.depots.push_back({"D" + std::to_string(k + 1), RoadNodeId{fixture::rand_int(rng, 1, n)}});
    return l;
}

double edge_time(const RoadNetwork& roads, RoadNodeId a, RoadNodeId b) {
    double best = INFINITY;
    for (const auto& e : roads.edges())
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) best = std::min(best, e.travel_time_s());
    return best;
}

void check_metric(const ReducedGraph& g) {
    const auto n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(g.weight(i, i) == 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(g.weight(i, j) == g.weight(j, i));
            CHECK(g.weight(i, j) >= 0.0);
            for (std::size_t k = 0; k < n; ++k) CHECK(g.weight(i, j) <= g.weight(i, k) + g.weight(k, j));
        }
    }
}

}  // namespace

TEST_CASE("one edge of 100 m at 10 m/s takes 10 s") {
    const RoadNetwork roads({{RoadNodeId{1}, {32, -97}}, {RoadNodeId{2}, {32, -96.999}}},
                            {{RoadNodeId{1}, RoadNodeId{2}, 100, 10}});
    const auto tree = shortest_paths_from(roads, RoadNodeId{1});
    CHECK(tree.at(RoadNodeId{2}).time_s == 10.0);
    CHECK(tree.at(RoadNodeId{1}).time_s == 0.0);
    CHECK(extract_path(tree, RoadNodeId{2}) == std::vector<RoadNodeId>{RoadNodeId{1}, RoadNodeId{2}});

    ProjectionMap pm;
    pm.entries[PowerNodeId{5}] = {RoadNodeId{2}, 0};
    const std::vector<PowerNodeId> sel{PowerNodeId{5}};
    const std::vector<Depot> depots{{"D1", RoadNodeId{1}}};
    const auto g = build_reduced_graph(roads, pm, sel, depots);
    REQUIRE(g.size() == 3);
    const auto s = *g.start_of("D1"), e = *g.end_of("D1"), d = *g.index_of(PowerNodeId{5});
    CHECK(g.weight(s, d) == 10.0);
    CHECK(g.weight(d, e) == 10.0);
    CHECK(g.weight(s, e) == 0.0);
    CHECK(g.terminal(s).label() == "start:D1");
    CHECK(g.terminal(d).label() == "damaged:5");
    CHECK(g.terminal(e).label() == "end:D1");
}

TEST_CASE("shortest paths match Floyd-Warshall on random graphs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto roads = fixture::random_roads(rng, 40, 30, trial % 2 == 0);
        const auto fw = oracle::floyd_warshall(roads);
        const auto n = roads.size();
        for (std::size_t s = 0; s < n; s += 7) {
            const auto tree = shortest_paths_from(roads, roads.node_at(s).id);
            for (std::size_t t = 0; t < n; ++t)
                CHECK(tree.at(roads.node_at(t).id).time_s == doctest::Approx(fw[s * n + t]).epsilon(1e-12));
        }
    }
}

TEST_CASE("unreachable nodes are absent and reduction reports the pair") {
    const RoadNetwork roads({{RoadNodeId{1}, {32, -97}}, {RoadNodeId{2}, {32, -96.99}}, {RoadNodeId{3}, {33, -96}}},
                            {{RoadNodeId{1}, RoadNodeId{2}, 100, 10}});
    const auto tree = shortest_paths_from(roads, RoadNodeId{1});
    CHECK(!tree.contains(RoadNodeId{3}));
    CHECK(extract_path(tree, RoadNodeId{3}).empty());
    CHECK_THROWS_AS(shortest_paths_from(roads, RoadNodeId{42}), ValidationError);

    ProjectionMap pm;
    pm.entries[PowerNodeId{5}] = {RoadNodeId{3}, 0};
    const std::vector<PowerNodeId> sel{PowerNodeId{5}};
    const std::vector<Depot> depots{{"D1", RoadNodeId{1}}};
    try {
        build_reduced_graph(roads, pm, sel, depots);
        FAIL("expected unreachable");
    } catch (const UnreachableError& e) {
        const auto [a, b] = e.pair();
        CHECK(((a == 1 && b == 3) || (a == 3 && b == 1)));
    }
}

TEST_CASE("reduced weights equal restricted Floyd-Warshall distances") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto l = place(fixture::random_roads(rng, 80, 40, true), rng, 6, 2);
        const auto g = build_reduced_graph(l.roads, l.pm, l.damaged, l.depots);
        const auto fw = oracle::floyd_warshall(l.roads);
        const auto n = l.roads.size();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                const auto a = *l.roads.index_of(g.terminal(i).road), b = *l.roads.index_of(g.terminal(j).road);
                const bool same_depot = g.terminal(i).kind != TerminalKind::damaged &&
                                        g.terminal(j).kind != TerminalKind::damaged &&
                                        g.terminal(i).depot == g.terminal(j).depot;
                CHECK(g.weight(i, j) == (same_depot ? 0.0 : fw[a * n + b]));
            }
        check_metric(g);
    }
}

TEST_CASE("reduced graph is a metric on non-integer travel times") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        auto l = place(fixture::random_roads(rng, 60, 50, false), rng, 7, 2);
        check_metric(build_reduced_graph(l.roads, l.pm, l.damaged, l.depots));
    }
}

TEST_CASE("stored paths re-cost to the reduced weight") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        auto l = place(fixture::random_roads(rng, 50, 30, false), rng, 5, 1);
        const auto g = build_reduced_graph(l.roads, l.pm, l.damaged, l.depots);
        REQUIRE(g.has_paths());
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (i == j || g.terminal(i).road == g.terminal(j).road) continue;
                const auto p = g.path(i, j);
                REQUIRE(p.size() >= 2);
                CHECK(p.front() == g.terminal(i).road);
                CHECK(p.back() == g.terminal(j).road);
                double t = 0;
                for (std::size_t s = 1; s < p.size(); ++s) t += edge_time(l.roads, p[s - 1], p[s]);
                CHECK(std::abs(t - g.weight(i, j)) <= 1e-9 * std::max(1.0, g.weight(i, j)));
            }
    }
}

TEST_CASE("adding a road edge never lengthens a reduced weight") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        auto l = place(fixture::random_roads(rng, 40, 10, true), rng, 5, 1);
        const auto before = build_reduced_graph(l.roads, l.pm, l.damaged, l.depots);
        std::vector<RoadNode> nodes(l.roads.nodes().begin(), l.roads.nodes().end());
        std::vector<RoadEdge> edges(l.roads.edges().begin(), l.roads.edges().end());
        edges.push_back({nodes[0].id, nodes[nodes.size() - 1].id, static_cast<double>(fixture::rand_int(rng, 1, 20)), 1.0});
        const RoadNetwork more(nodes, edges);
        const auto after = build_reduced_graph(more, l.pm, l.damaged, l.depots);
        for (std::size_t i = 0; i < before.size(); ++i)
            for (std::size_t j = 0; j < before.size(); ++j) CHECK(after.weight(i, j) <= before.weight(i, j));
    }
}

TEST_CASE("five damaged nodes and three depots on the feeder bundle") {
    const auto roads = load_road_network(fixture::data_dir() / "feeder5" / "roads.csv");
    const auto power = load_power_network(fixture::data_dir() / "feeder5" / "power.csv");
    const auto s = load_damage_scenario(fixture::data_dir() / "feeder5" / "scenario.csv", roads);
    const auto pm = project_power_onto_roads(power, roads);
    std::vector<PowerNodeId> ids;
    for (const auto& d : s.damaged) ids.push_back(d.id);
    const auto g = build_reduced_graph(roads, pm, ids, s.depots);
    CHECK(g.size() == 11);
    check_metric(g);
    for (const auto& dp : s.depots)
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g.terminal(j).kind == TerminalKind::damaged)
                CHECK(g.weight(*g.start_of(dp.id), j) == g.weight(*g.end_of(dp.id), j));

    std::ostringstream out;
    write_reduced_graph(out, g);
    CHECK(out.str().rfind("terminals,start:D1", 0) == 0);
}

TEST_CASE("terminal constructor rejects a non-square matrix") {
    std::vector<Terminal> t{{TerminalKind::depot_start, {}, "D1", RoadNodeId{1}}};
    CHECK_THROWS_AS(ReducedGraph(t, {0.0, 1.0}), ValidationError);
}
