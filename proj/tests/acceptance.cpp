// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "gridrestore/allocate.hpp"
#include "gridrestore/errors.hpp"
#include "gridrestore/generate.hpp"
#include "gridrestore/netmodel_io.hpp"
#include "gridrestore/orchestrate.hpp"
#include "gridrestore/reduce.hpp"
#include "gridrestore/route.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gridrestore;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;

    void fail(const std::string& why) {
        if (ok) note = why;
        ok = false;
    }
};

struct Bundle {
    RoadNetwork roads;
    PowerNetwork power;
    DamageScenario scenario;
    ProjectionMap pm;
};

Bundle feeder5() {
    const auto dir = fixture::data_dir() / "feeder5";
    Bundle b;
    b.roads = load_road_network(dir / "roads.csv");
    b.power = load_power_network(dir / "power.csv");
    b.scenario = load_damage_scenario(dir / "scenario.csv", b.roads);
    b.pm = project_power_onto_roads(b.power, b.roads);
    return b;
}

Bundle generated(const GeneratorOptions& o) {
    auto g = generate_bundle(o);
    Bundle b{std::move(g.roads), std::move(g.power), std::move(g.scenario), {}};
    b.pm = project_power_onto_roads(b.power, b.roads);
    return b;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

double demand_sum(const DamageScenario& s) {
    return std::accumulate(s.damaged.begin(), s.damaged.end(), 0.0,
                           [](double a, const DamagedNode& d) { return a + d.demand; });
}

// 1. Feeder table: iteration-1 selection and quantities.
Outcome feeder_selection() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto p = fixture::allocation_problem(fixture::feeder5_nodes(), {15});
    const auto s = solve_allocation(p);
    const std::vector<PowerNodeId> want{PowerNodeId{8433}, PowerNodeId{36856}, PowerNodeId{51201}};
    if (s.selected != want) o.fail("selected set differs");
    const double expect[] = {0, 0, 4, 4, 7};
    for (std::size_t i = 0; i < 5; ++i)
        if (s.at(i, 0) != expect[i]) o.fail("y differs at node " + std::to_string(raw(p.nodes[i].id)));
    const auto b = feeder5();
    const auto sched = run_two_stage(b.scenario, b.roads, b.pm);
    if (sched.iterations.empty() || sched.iterations[0].allocation.selected != want)
        o.fail("end-to-end iteration 1 selection differs");
    const double t = seconds_since(t0);
    if (t >= 1.0) o.fail("took " + std::to_string(t) + " s");
    o.note += (o.note.empty() ? "" : "; ") + std::to_string(t) + " s";
    return o;
}

// 2. Iteration counts on the feeder table and a 17-node three-depot scenario.
Outcome iteration_counts() {
    Outcome o;
    {
        const auto t0 = Clock::now();
        const auto b = feeder5();
        const auto s = run_two_stage(b.scenario, b.roads, b.pm);
        if (s.iterations.size() != 2) o.fail("feeder table took " + std::to_string(s.iterations.size()) + " iterations");
        if (seconds_since(t0) >= 10.0) o.fail("feeder table over 10 s");
    }
    GeneratorOptions g;
    g.road_nodes = 144;
    g.damaged = 17;
    g.depots = 3;
    g.capacity = 54;
    Bundle b;
    for (g.seed = 1;; ++g.seed) {
        b = generated(g);
        const double total = demand_sum(b.scenario);
        if (total > 54 && total <= 108) break;
    }
    const auto t0 = Clock::now();
    const auto s = run_two_stage(b.scenario, b.roads, b.pm);
    const double t = seconds_since(t0);
    if (s.iterations.size() != 2) o.fail("17-node scenario took " + std::to_string(s.iterations.size()) + " iterations");
    if (t >= 10.0) o.fail("17-node scenario over 10 s");
    if (!check_schedule(s, b.scenario).empty()) o.fail("17-node schedule fails its checks");
    o.note += (o.note.empty() ? "" : "; ") + std::string("17-node seed ") + std::to_string(g.seed) + ", demand " +
              std::to_string(static_cast<int>(demand_sum(b.scenario))) + ", " + std::to_string(t) + " s";
    return o;
}

// 3. Exact routing equals brute force on integer instances.
Outcome routing_exactness() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3003);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = static_cast<std::size_t>(fixture::rand_int(rng, 4, 8));
        std::vector<double> w;
        auto p = fixture::random_route_problem(rng, fixture::random_reduced(rng, m, w), m);
        const auto r = solve_route(p);
        const auto n = p.reduced->size();
        std::vector<std::size_t> nodes;
        std::vector<double> ow(n, 0.0);
        for (const auto& [id, q] : p.assignments) {
            const auto t = *p.reduced->index_of(id);
            nodes.push_back(t);
            ow[t] = p.weights.alpha * p.attrs.at(id).repair_hours - p.weights.beta * p.attrs.at(id).power_kw;
        }
        const double best = oracle::brute_force_route(w, n, p.start_terminal(), p.end_terminal(), nodes, ow);
        if (r.objective != best) o.fail("instance " + std::to_string(trial) + " differs from brute force");
        if (!validate_route(r, p).empty()) o.fail("instance " + std::to_string(trial) + " fails its certificate");
    }
    const double t = seconds_since(t0);
    if (t >= 30.0) o.fail("took " + std::to_string(t) + " s");
    o.note += (o.note.empty() ? "" : "; ") + std::string("200 instances, ") + std::to_string(t) + " s";
    return o;
}

// 4. Allocation optimum equals LP vertex enumeration.
Outcome allocation_exactness() {
    Outcome o;
    std::mt19937_64 rng(4004);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(fixture::rand_int(rng, 1, 4));
        const auto k = static_cast<std::size_t>(fixture::rand_int(rng, 1, 2));
        std::vector<DamagedNode> nodes;
        for (std::size_t i = 0; i < n; ++i)
            nodes.push_back(fixture::damaged(static_cast<std::int64_t>(i + 1), fixture::rand_real(rng, 78.43, 10773.17),
                                             fixture::rand_real(rng, 1.13, 3.59),
                                             static_cast<double>(fixture::rand_int(rng, 1, 8))));
        std::vector<double> caps;
        for (std::size_t c = 0; c < k; ++c) caps.push_back(static_cast<double>(fixture::rand_int(rng, 1, 20)));
        const auto p = fixture::allocation_problem(nodes, caps);
        const auto s = solve_allocation(p);
        std::vector<double> score, demand;
        for (std::size_t i = 0; i < n; ++i) {
            score.push_back((nodes[i].power_kw - nodes[i].repair_hours) / nodes[i].demand);
            demand.push_back(nodes[i].demand);
        }
        const auto lp = oracle::allocation_lp(score, demand, caps);
        const double rel = std::abs(s.objective - lp.objective) / std::max(1.0, std::abs(lp.objective));
        worst = std::max(worst, rel);
        if (rel > 1e-7) o.fail("instance " + std::to_string(trial) + " off by " + std::to_string(rel));
    }
    std::ostringstream note;
    note << "worst relative gap " << worst;
    o.note += (o.note.empty() ? "" : "; ") + note.str();
    return o;
}

// 5. Reduced weights equal Floyd-Warshall and form a metric.
Outcome reduction_exactness() {
    Outcome o;
    std::mt19937_64 rng(5005);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(fixture::rand_int(rng, 10, 200));
        const auto roads = fixture::random_roads(rng, n, n / 2, true);
        ProjectionMap pm;
        std::vector<PowerNodeId> damaged;
        const auto nd = static_cast<std::size_t>(fixture::rand_int(rng, 1, 8));
        for (std::size_t i = 0; i < nd; ++i) {
            const PowerNodeId id{static_cast<std::int64_t>(i + 1)};
            pm.entries[id] = {RoadNodeId{fixture::rand_int(rng, 1, static_cast<std::int64_t>(n))}, 0};
            damaged.push_back(id);
        }
        std::vector<Depot> depots;
        for (int k = 0; k < 2; ++k)
            depots.push_back({"D" + std::to_string(k + 1), RoadNodeId{fixture::rand_int(rng, 1, static_cast<std::int64_t>(n))}});
        const auto g = build_reduced_graph(roads, pm, damaged, depots);
        const auto fw = oracle::floyd_warshall(roads);
        const auto m = g.size();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const auto& ti = g.terminal(i);
                const auto& tj = g.terminal(j);
                const bool same_depot =
                    ti.kind != TerminalKind::damaged && tj.kind != TerminalKind::damaged && ti.depot == tj.depot;
                const double want = same_depot ? 0.0 : fw[*roads.index_of(ti.road) * n + *roads.index_of(tj.road)];
                if (g.weight(i, j) != want) o.fail("graph " + std::to_string(trial) + " differs from Floyd-Warshall");
                if (g.weight(i, j) != g.weight(j, i)) o.fail("graph " + std::to_string(trial) + " not symmetric");
                if (i == j && g.weight(i, j) != 0.0) o.fail("graph " + std::to_string(trial) + " nonzero diagonal");
                for (std::size_t k = 0; k < m; ++k)
                    if (g.weight(i, j) > g.weight(i, k) + g.weight(k, j))
                        o.fail("graph " + std::to_string(trial) + " breaks the triangle inequality");
            }
    }
    if (o.ok) o.note = "50 graphs";
    return o;
}

// 6. Certificate catches every mutation family.
Outcome mutation_detection() {
    Outcome o;
    std::mt19937_64 rng(6006);
    int caught = 0, total = 0;
    auto has = [](const std::vector<Violation>& v, ConstraintFamily f) {
        return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.family == f; });
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = static_cast<std::size_t>(fixture::rand_int(rng, 2, 8));
        std::vector<double> w;
        auto p = fixture::random_route_problem(rng, fixture::random_reduced(rng, m, w), m);
        const auto r = solve_route(p);
        if (!validate_route(r, p).empty()) o.fail("optimal route " + std::to_string(trial) + " rejected");
        const auto pos = static_cast<std::size_t>(fixture::rand_int(rng, 1, static_cast<std::int64_t>(m)));

        auto dropped = r;  // remove one visit
        dropped.sequence.erase(dropped.sequence.begin() + static_cast<std::ptrdiff_t>(pos));
        dropped.visit_order.pop_back();
        dropped.load.erase(dropped.load.begin() + static_cast<std::ptrdiff_t>(pos));
        for (std::size_t i = pos; i < dropped.load.size(); ++i) dropped.load[i] -= p.demand_at(r.sequence[pos]);
        caught += has(validate_route(dropped, p), ConstraintFamily::degree);

        auto dup = r;  // visit one node twice
        dup.sequence.insert(dup.sequence.begin() + static_cast<std::ptrdiff_t>(pos), r.sequence[pos]);
        dup.visit_order.push_back(static_cast<int>(dup.sequence.size()) - 1);
        dup.load.insert(dup.load.begin() + static_cast<std::ptrdiff_t>(pos), r.load[pos]);
        caught += has(validate_route(dup, p), ConstraintFamily::degree);

        auto skip = r;  // t jumps by 2
        for (std::size_t i = pos; i < skip.visit_order.size(); ++i) skip.visit_order[i] += 1;
        caught += has(validate_route(skip, p), ConstraintFamily::visit_order);

        auto swapped = r;  // t goes backwards
        std::swap(swapped.visit_order[pos], swapped.visit_order[pos + 1]);
        caught += has(validate_route(swapped, p), ConstraintFamily::order_monotonicity);

        auto bent = r;  // u breaks accumulation
        bent.load[pos] += 0.5;
        caught += has(validate_route(bent, p), ConstraintFamily::resource_balance);
        total += 5;
    }
    if (caught != total) o.fail(std::to_string(total - caught) + " mutations slipped through");
    o.note += (o.note.empty() ? "" : "; ") + std::to_string(caught) + "/" + std::to_string(total) + " caught";
    return o;
}

// 7. Conservation and termination over generated scenarios.
Outcome conservation() {
    Outcome o;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorOptions g;
        g.seed = 7000 + seed;
        g.road_nodes = 25 + seed % 40;
        g.damaged = 1 + seed % 12;
        g.depots = 1 + seed % 3;
        g.tree_crews = seed % 3 == 0 ? 1 : 0;
        g.line_crews = 1 + seed % 2;
        g.capacity = 5 + static_cast<double>(seed % 20);
        const auto b = generated(g);
        const double total = demand_sum(b.scenario);
        try {
            const auto s = run_two_stage(b.scenario, b.roads, b.pm);
            double served = 0, prev = total;
            for (const auto& it : s.iterations) {
                double now = 0;
                for (const auto& [id, q] : it.served) served += q;
                for (const auto& [id, r] : it.residual) now += r;
                if (!(now < prev)) o.fail("seed " + std::to_string(g.seed) + ": residual did not shrink");
                prev = now;
            }
            if (std::abs(served - total) > 1e-9 * std::max(1.0, total)) o.fail("seed " + std::to_string(g.seed) + ": demand not conserved");
            if (prev != 0.0) o.fail("seed " + std::to_string(g.seed) + ": demand left over");
            if (!check_schedule(s, b.scenario).empty()) o.fail("seed " + std::to_string(g.seed) + ": schedule check failed");
        } catch (const Error& e) {
            o.fail("seed " + std::to_string(g.seed) + ": " + e.what());
        }
    }
    if (o.ok) o.note = "100 scenarios";
    return o;
}

// 8. Two identical CLI runs write identical files.
Outcome determinism() {
    Outcome o;
    const auto root = fs::temp_directory_path() / "gridrestore_acceptance";
    fs::remove_all(root);
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string("\"") + GRIDRESTORE_CLI + "\" " + args + " > /dev/null";
        return std::system(cmd.c_str());
    };
    for (const char* side : {"a", "b"}) {
        const auto dir = root / side;
        if (run("generate --seed 8 --road-nodes 100 --damaged 12 --depots 2 --tree-crews 1 --capacity 20 --out \"" +
                (dir / "bundle").string() + "\"") != 0 ||
            run("run --bundle \"" + (dir / "bundle").string() + "\" --out \"" + (dir / "out").string() + "\"") != 0)
            o.fail(std::string("CLI failed on run ") + side);
    }
    for (const char* f : {"bundle/roads.csv", "bundle/power.csv", "bundle/scenario.csv", "out/schedule.json",
                          "out/routes.geojson", "out/summary.txt"}) {
        const auto a = slurp(root / "a" / f), b = slurp(root / "b" / f);
        if (a.empty() || a != b) o.fail(std::string(f) + " differs");
    }
    if (o.ok) o.note = "6 files byte-identical";
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"feeder table selection", feeder_selection},
        {"iteration counts", iteration_counts},
        {"exact routing vs brute force", routing_exactness},
        {"allocation vs LP oracle", allocation_exactness},
        {"reduction vs Floyd-Warshall", reduction_exactness},
        {"mutation detection", mutation_detection},
        {"conservation and termination", conservation},
        {"CLI determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome out;
        try {
            out = check();
        } catch (const std::exception& e) {
            out.fail(std::string("threw: ") + e.what());
        }
        failed += !out.ok;
        std::cout << (out.ok ? "PASS" : "FAIL") << "  [" << index << "] " << name;
        if (!out.note.empty()) std::cout << " (" << out.note << ")";
        std::cout << '\n';
    }
    std::cout << (8 - failed) << "/8 criteria passed\n";
    return failed ? 1 : 0;
}
