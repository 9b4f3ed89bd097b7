// gridrestore: command-line front end.
//
//   gridrestore generate    --seed 1 --road-nodes 25 --damaged 3 --depots 1 --out DIR
//   gridrestore run         --bundle DIR [--alpha1 .. --beta2 ..] --out DIR
//   gridrestore validate    --schedule FILE --bundle DIR
//   gridrestore reduce-dump --bundle DIR [--out FILE]
//
// Exit codes: 0 success, 1 validation, 2 solver, 3 I/O.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridrestore/errors.hpp"
#include "gridrestore/generate.hpp"
#include "gridrestore/netmodel_io.hpp"
#include "gridrestore/orchestrate.hpp"
#include "gridrestore/reduce.hpp"
#include "gridrestore/report.hpp"

namespace fs = std::filesystem;
using namespace gridrestore;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct BundlePaths {
    std::string bundle;
    std::string power;
    std::string roads;
    std::string scenario;
    double speed = kDefaultSpeedMps;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--bundle", bundle, "Directory holding power.csv, roads.csv and scenario.csv");
        cmd.add_option("--power", power, "Power network file (tabular or GraphML)");
        cmd.add_option("--roads", roads, "Road network file (tabular or GraphML)");
        cmd.add_option("--scenario", scenario, "Damage scenario file");
        cmd.add_option("--speed", speed, "Default free-flow speed for road edges without one (m/s)")
            ->check(CLI::PositiveNumber);
    }

    fs::path resolve(const std::string& explicit_path, const char* name) const {
        if (!explicit_path.empty()) return explicit_path;
        if (!bundle.empty()) return fs::path(bundle) / name;
        throw ValidationError(std::string("missing input: pass --bundle or the ") + name + " path");
    }
};

struct Inputs {
    PowerNetwork power;
    RoadNetwork roads;
    DamageScenario scenario;
    ProjectionMap projection;
};

Inputs load_inputs(const BundlePaths& p) {
    Inputs in;
    in.power = load_power_network(p.resolve(p.power, "power.csv"));
    RoadLoadOptions ro;
    ro.default_speed_mps = p.speed;
    in.roads = load_road_network(p.resolve(p.roads, "roads.csv"), ro);
    in.scenario = load_damage_scenario(p.resolve(p.scenario, "scenario.csv"), in.roads);
    in.projection = project_power_onto_roads(in.power, in.roads);
    return in;
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("GRIDRESTORE_OUT_DIR"); env && *env) return env;
    return "out";
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    writer(out);
    if (!out) throw IoError("failed writing " + path.string());
}

int fail(const Error& e, int code) {
    nlohmann::ordered_json diag{{"error", e.kind()}, {"message", e.what()}};
    if (const auto* u = dynamic_cast<const UnreachableError*>(&e))
        diag["pair"] = {u->pair().first, u->pair().second};
    std::cerr << diag.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crew scheduling for distribution-network restoration over a road network"};
    app.require_subcommand(1);

    GeneratorOptions gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic road grid, power overlay and damage table");
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--road-nodes", gen.road_nodes, "Road grid node count")->check(CLI::PositiveNumber);
    generate->add_option("--damaged", gen.damaged, "Damaged node count");
    generate->add_option("--depots", gen.depots, "Depot count")->check(CLI::PositiveNumber);
    generate->add_option("--power-nodes", gen.power_nodes, "Power node count (default: max(road nodes, damaged))");
    generate->add_option("--line-crews", gen.line_crews, "Line crew count");
    generate->add_option("--tree-crews", gen.tree_crews, "Tree crew count");
    generate->add_option("--capacity", gen.capacity, "Capacity of each crew")->check(CLI::PositiveNumber);
    generate->add_option("--out", gen_out, "Output directory (default $GRIDRESTORE_OUT_DIR or ./out)");

    BundlePaths run_in;
    TwoStageConfig cfg;
    bool no_normalize = false;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Solve the two-stage schedule and write reports");
    run_in.add_to(*run);
    run->add_option("--alpha1", cfg.allocation.alpha, "Allocation weight on restorable power")->check(CLI::NonNegativeNumber);
    run->add_option("--beta1", cfg.allocation.beta, "Allocation weight on repair time")->check(CLI::NonNegativeNumber);
    run->add_option("--alpha2", cfg.routing.alpha, "Routing weight on repair time")->check(CLI::NonNegativeNumber);
    run->add_option("--beta2", cfg.routing.beta, "Routing weight on restorable power")->check(CLI::NonNegativeNumber);
    run->add_flag("--no-normalize-power", no_normalize, "Use raw kW in the routing objective");
    run->add_option("--exact-cap", cfg.exact_cap, "Largest per-crew node count for the exact route solver")
        ->check(CLI::Range(std::size_t{1}, kHardExactCap));
    run->add_option("--out", run_out, "Output directory (default $GRIDRESTORE_OUT_DIR or ./out)");

    BundlePaths val_in;
    std::string schedule_path;
    auto* validate = app.add_subcommand("validate", "Re-check a schedule report against its inputs");
    val_in.add_to(*validate);
    validate->add_option("--schedule", schedule_path, "schedule.json written by run")->required();

    BundlePaths dump_in;
    std::string dump_out;
    auto* dump = app.add_subcommand("reduce-dump", "Write the reduced graph over all damaged nodes and depots");
    dump_in.add_to(*dump);
    dump->add_option("--out", dump_out, "Matrix file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            const auto dir = output_dir(gen_out);
            write_bundle(generate_bundle(gen), dir);
            std::cout << "wrote " << (dir / "roads.csv").string() << ", power.csv, scenario.csv\n";
        } else if (*run) {
            cfg.normalize_power = !no_normalize;
            const auto in = load_inputs(run_in);
            const auto schedule = run_two_stage(in.scenario, in.roads, in.projection, cfg);
            const auto dir = output_dir(run_out);
            write_file(dir / "schedule.json", [&](std::ostream& o) { write_schedule_report(o, schedule, cfg); });
            write_file(dir / "routes.geojson",
                       [&](std::ostream& o) { write_route_geojson(o, schedule, in.roads, in.power, in.scenario); });
            write_file(dir / "summary.txt", [&](std::ostream& o) { write_summary(o, schedule); });
            write_summary(std::cout, schedule);
        } else if (*validate) {
            const auto in = load_inputs(val_in);
            std::ifstream f(schedule_path, std::ios::binary);
            if (!f) throw IoError("cannot open " + schedule_path);
            const auto loaded = read_schedule_report(f, schedule_path, in.roads, in.projection, in.scenario);
            const auto violations = check_schedule(loaded.schedule, in.scenario);
            for (const auto& v : violations) std::cout << v << '\n';
            return violations.empty() ? 0 : kExitValidation;
        } else if (*dump) {
            const auto in = load_inputs(dump_in);
            std::vector<PowerNodeId> ids;
            for (const auto& d : in.scenario.damaged) ids.push_back(d.id);
            const auto g = build_reduced_graph(in.roads, in.projection, ids, in.scenario.depots);
            if (dump_out.empty())
                write_reduced_graph(std::cout, g);
            else
                write_file(dump_out, [&](std::ostream& o) { write_reduced_graph(o, g); });
        }
    } catch (const IoError& e) {
        return fail(e, kExitIo);
    } catch (const SolverError& e) {
        return fail(e, kExitSolver);
    } catch (const Error& e) {
        return fail(e, kExitValidation);
    }
    return 0;
}
