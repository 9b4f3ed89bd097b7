#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "gridrestore/allocate.hpp"
#include "gridrestore/errors.hpp"
#include "gridrestore/generate.hpp"
#include "gridrestore/netmodel.hpp"
#include "gridrestore/netmodel_io.hpp"
#include "gridrestore/orchestrate.hpp"
#include "gridrestore/reduce.hpp"
#include "gridrestore/report.hpp"
#include "gridrestore/route.hpp"

namespace py = pybind11;
using namespace gridrestore;

// Node ids cross the boundary as plain Python ints.
namespace pybind11::detail {
template <typename Id>
struct id_caster {
    PYBIND11_TYPE_CASTER(Id, const_name("int"));
    bool load(handle src, bool convert) {
        make_caster<std::int64_t> inner;
        if (!inner.load(src, convert)) return false;
        value = Id{cast_op<std::int64_t>(inner)};
        return true;
    }
    static handle cast(Id v, return_value_policy, handle) {
        return PyLong_FromLongLong(static_cast<long long>(v));
    }
};
template <>
struct type_caster<PowerNodeId> : id_caster<PowerNodeId> {};
template <>
struct type_caster<RoadNodeId> : id_caster<RoadNodeId> {};
}  // namespace pybind11::detail

namespace {

template <typename T>
std::vector<T> to_vector(std::span<const T> s) {
    return {s.begin(), s.end()};
}

py::list weight_rows(const ReducedGraph& g) {
    py::list rows;
    for (std::size_t i = 0; i < g.size(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < g.size(); ++j) row.append(g.weight(i, j));
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crew scheduling for distribution-network restoration over a road network";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", error);
    py::register_exception<ValidationError>(m, "ValidationError", error);
    py::register_exception<IoError>(m, "IoError", error);
    py::register_exception<SolverError>(m, "SolverError", error);

    py::class_<GeoPoint>(m, "GeoPoint")
        .def(py::init<double, double>(), py::arg("lat"), py::arg("lon"))
        .def_readwrite("lat", &GeoPoint::lat)
        .def_readwrite("lon", &GeoPoint::lon);
    m.def("haversine_m", &haversine_m);

    py::class_<PowerNode>(m, "PowerNode")
        .def(py::init([](PowerNodeId id, double lat, double lon) { return PowerNode{id, {lat, lon}}; }))
        .def_readonly("id", &PowerNode::id)
        .def_readonly("coord", &PowerNode::coord);
    py::class_<PowerNetwork>(m, "PowerNetwork")
        .def(py::init([](const std::vector<PowerNode>& nodes, const std::vector<std::pair<PowerNodeId, PowerNodeId>>& edges) {
            std::vector<PowerLine> lines;
            for (auto [a, b] : edges) lines.push_back({a, b});
            return PowerNetwork(nodes, lines);
        }))
        .def("__len__", &PowerNetwork::size)
        .def_property_readonly("nodes", [](const PowerNetwork& n) { return to_vector(n.nodes()); })
        .def_property_readonly("edge_count", [](const PowerNetwork& n) { return n.edges().size(); });

    py::class_<RoadNode>(m, "RoadNode")
        .def(py::init([](RoadNodeId id, double lat, double lon) { return RoadNode{id, {lat, lon}}; }))
        .def_readonly("id", &RoadNode::id)
        .def_readonly("coord", &RoadNode::coord);
    py::class_<RoadEdge>(m, "RoadEdge")
        .def(py::init([](RoadNodeId a, RoadNodeId b, double length_m, double speed_mps) {
                 return RoadEdge{a, b, length_m, speed_mps};
             }),
             py::arg("a"), py::arg("b"), py::arg("length_m"), py::arg("speed_mps") = kDefaultSpeedMps)
        .def_readonly("a", &RoadEdge::a)
        .def_readonly("b", &RoadEdge::b)
        .def_readonly("length_m", &RoadEdge::length_m)
        .def_readonly("speed_mps", &RoadEdge::speed_mps)
        .def("travel_time_s", &RoadEdge::travel_time_s);
    py::class_<RoadNetwork>(m, "RoadNetwork")
        .def(py::init<std::vector<RoadNode>, std::vector<RoadEdge>>())
        .def("__len__", &RoadNetwork::size)
        .def_property_readonly("nodes", [](const RoadNetwork& n) { return to_vector(n.nodes()); })
        .def_property_readonly("edges", [](const RoadNetwork& n) { return to_vector(n.edges()); });

    py::class_<Projection>(m, "Projection")
        .def_readonly("road", &Projection::road)
        .def_readonly("distance_m", &Projection::distance_m);
    py::class_<ProjectionMap>(m, "ProjectionMap")
        .def("__len__", &ProjectionMap::size)
        .def("__getitem__", &ProjectionMap::at)
        .def("__contains__", &ProjectionMap::contains)
        .def_readonly("entries", &ProjectionMap::entries);
    m.def("project_power_onto_roads", &project_power_onto_roads);

    py::enum_<CrewKind>(m, "CrewKind").value("tree", CrewKind::tree).value("line", CrewKind::line);
    py::class_<DamagedNode>(m, "DamagedNode")
        .def(py::init<PowerNodeId, double, double, double>(), py::arg("id"), py::arg("power_kw"),
             py::arg("repair_hours"), py::arg("demand"))
        .def_readwrite("id", &DamagedNode::id)
        .def_readwrite("power_kw", &DamagedNode::power_kw)
        .def_readwrite("repair_hours", &DamagedNode::repair_hours)
        .def_readwrite("demand", &DamagedNode::demand);
    py::class_<Depot>(m, "Depot")
        .def(py::init<std::string, RoadNodeId>(), py::arg("id"), py::arg("road"))
        .def_readwrite("id", &Depot::id)
        .def_readwrite("road", &Depot::road);
    py::class_<Crew>(m, "Crew")
        .def(py::init([](std::string id, CrewKind kind, double capacity, int seq, double scale, std::string home) {
                 return Crew{std::move(id), kind, capacity, seq, scale, std::move(home)};
             }),
             py::arg("id"), py::arg("kind"), py::arg("capacity"), py::arg("sequence_index"),
             py::arg("cost_scale") = 1.0, py::arg("home_depot") = "")
        .def_readwrite("id", &Crew::id)
        .def_readwrite("kind", &Crew::kind)
        .def_readwrite("capacity", &Crew::capacity)
        .def_readwrite("sequence_index", &Crew::sequence_index)
        .def_readwrite("cost_scale", &Crew::cost_scale)
        .def_readwrite("home_depot", &Crew::home_depot);
    py::class_<DamageScenario>(m, "DamageScenario")
        .def(py::init<>())
        .def_readwrite("damaged", &DamageScenario::damaged)
        .def_readwrite("depots", &DamageScenario::depots)
        .def_readwrite("crews", &DamageScenario::crews)
        .def("validate", py::overload_cast<>(&DamageScenario::validate, py::const_));

    m.def("load_power_network", [](const std::filesystem::path& p) { return load_power_network(p); });
    m.def("load_road_network", [](const std::filesystem::path& p, double speed) {
        RoadLoadOptions o;
        o.default_speed_mps = speed;
        return load_road_network(p, o);
    }, py::arg("path"), py::arg("default_speed_mps") = kDefaultSpeedMps);
    m.def("load_damage_scenario", py::overload_cast<const std::filesystem::path&>(&load_damage_scenario));

    m.def("shortest_paths_from", [](const RoadNetwork& r, RoadNodeId source) {
        py::dict out;
        for (const auto& [id, label] : shortest_paths_from(r, source))
            out[py::int_(raw(id))] = py::make_tuple(label.time_s, label.predecessor ? py::cast(*label.predecessor) : py::none());
        return out;
    });

    py::class_<ReducedGraph, std::shared_ptr<ReducedGraph>>(m, "ReducedGraph")
        .def("__len__", &ReducedGraph::size)
        .def_property_readonly("labels", [](const ReducedGraph& g) {
            std::vector<std::string> out;
            for (const auto& t : g.terminals()) out.push_back(t.label());
            return out;
        })
        .def_property_readonly("weights", &weight_rows)
        .def("weight", &ReducedGraph::weight)
        .def("path", &ReducedGraph::path)
        .def("dump", [](const ReducedGraph& g) {
            std::ostringstream s;
            write_reduced_graph(s, g);
            return s.str();
        });
    m.def("build_reduced_graph", [](const RoadNetwork& r, const ProjectionMap& pm, const std::vector<PowerNodeId>& selected,
                                    const std::vector<Depot>& depots) {
        return std::make_shared<ReducedGraph>(build_reduced_graph(r, pm, selected, depots));
    });

    py::class_<AllocationSolution>(m, "AllocationSolution")
        .def_readonly("nodes", &AllocationSolution::nodes)
        .def_readonly("crews", &AllocationSolution::crews)
        .def_readonly("objective", &AllocationSolution::objective)
        .def_readonly("selected", &AllocationSolution::selected)
        .def("at", &AllocationSolution::at);
    m.def(
        "solve_allocation",
        [](const std::vector<DamagedNode>& nodes, const std::vector<std::pair<std::string, double>>& crews, double alpha,
           double beta) {
            AllocationProblem p;
            for (const auto& n : nodes) p.nodes.push_back({n.id, n.power_kw, n.repair_hours, n.demand});
            for (const auto& [id, cap] : crews) p.crews.push_back({id, cap});
            p.weights = {alpha, beta};
            return solve_allocation(p);
        },
        py::arg("nodes"), py::arg("crews"), py::arg("alpha1") = 1.0, py::arg("beta1") = 1.0,
        "Crews are (id, capacity) pairs in sequence order.");

    py::class_<CrewRoute>(m, "CrewRoute")
        .def_readonly("crew_id", &CrewRoute::crew_id)
        .def_readonly("sequence", &CrewRoute::sequence)
        .def_readonly("visit_order", &CrewRoute::visit_order)
        .def_readonly("load", &CrewRoute::load)
        .def_readonly("travel_cost", &CrewRoute::travel_cost)
        .def_readonly("order_cost", &CrewRoute::order_cost)
        .def_readonly("objective", &CrewRoute::objective);
    m.def(
        "solve_route",
        [](std::shared_ptr<ReducedGraph> g, const std::string& depot, double capacity,
           const std::map<PowerNodeId, double>& assignments, const std::vector<DamagedNode>& attrs, double alpha,
           double beta, double power_scale) {
            RouteProblem p;
            p.reduced = std::move(g);
            p.crew = {"crew", capacity, 1.0, depot};
            p.assignments = assignments;
            for (const auto& d : attrs) p.attrs[d.id] = {d.power_kw, d.repair_hours};
            p.weights = {alpha, beta};
            p.power_scale = power_scale;
            auto route = solve_route(p);
            std::vector<std::pair<std::string, std::string>> violations;
            for (const auto& v : validate_route(route, p)) violations.emplace_back(to_string(v.family), v.detail);
            return py::make_tuple(route, violations);
        },
        py::arg("graph"), py::arg("depot"), py::arg("capacity"), py::arg("assignments"), py::arg("attrs"),
        py::arg("alpha2") = 1.0, py::arg("beta2") = 1.0, py::arg("power_scale") = 1.0,
        "Returns (route, certificate violations).");

    py::class_<TwoStageConfig>(m, "TwoStageConfig")
        .def(py::init<>())
        .def_property("alpha1", [](const TwoStageConfig& c) { return c.allocation.alpha; },
                      [](TwoStageConfig& c, double v) { c.allocation.alpha = v; })
        .def_property("beta1", [](const TwoStageConfig& c) { return c.allocation.beta; },
                      [](TwoStageConfig& c, double v) { c.allocation.beta = v; })
        .def_property("alpha2", [](const TwoStageConfig& c) { return c.routing.alpha; },
                      [](TwoStageConfig& c, double v) { c.routing.alpha = v; })
        .def_property("beta2", [](const TwoStageConfig& c) { return c.routing.beta; },
                      [](TwoStageConfig& c, double v) { c.routing.beta = v; })
        .def_readwrite("normalize_power", &TwoStageConfig::normalize_power)
        .def_readwrite("exact_cap", &TwoStageConfig::exact_cap);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("index", &IterationRecord::index)
        .def_readonly("forced", &IterationRecord::forced)
        .def_readonly("routes", &IterationRecord::routes)
        .def_readonly("served", &IterationRecord::served)
        .def_readonly("residual", &IterationRecord::residual)
        .def_property_readonly("selected", [](const IterationRecord& r) { return r.allocation.selected; });
    py::class_<ScheduleTotals>(m, "ScheduleTotals")
        .def_readonly("travel_s", &ScheduleTotals::travel_s)
        .def_readonly("order_cost", &ScheduleTotals::order_cost)
        .def_readonly("power_restored_kw", &ScheduleTotals::power_restored_kw)
        .def_readonly("iterations", &ScheduleTotals::iterations);
    py::class_<Schedule>(m, "Schedule")
        .def_readonly("iterations", &Schedule::iterations)
        .def_readonly("totals", &Schedule::totals)
        .def("report", [](const Schedule& s, const TwoStageConfig& c) {
            std::ostringstream o;
            write_schedule_report(o, s, c);
            return o.str();
        });
    m.def("run_two_stage", &run_two_stage, py::arg("scenario"), py::arg("roads"), py::arg("projection"),
          py::arg("config") = TwoStageConfig{});
    m.def("check_schedule", &check_schedule);

    py::class_<GeneratorOptions>(m, "GeneratorOptions")
        .def(py::init<>())
        .def_readwrite("seed", &GeneratorOptions::seed)
        .def_readwrite("road_nodes", &GeneratorOptions::road_nodes)
        .def_readwrite("damaged", &GeneratorOptions::damaged)
        .def_readwrite("depots", &GeneratorOptions::depots)
        .def_readwrite("power_nodes", &GeneratorOptions::power_nodes)
        .def_readwrite("line_crews", &GeneratorOptions::line_crews)
        .def_readwrite("tree_crews", &GeneratorOptions::tree_crews)
        .def_readwrite("capacity", &GeneratorOptions::capacity);
    py::class_<ScenarioBundle>(m, "ScenarioBundle")
        .def_readonly("roads", &ScenarioBundle::roads)
        .def_readonly("power", &ScenarioBundle::power)
        .def_readonly("scenario", &ScenarioBundle::scenario);
    m.def("generate_bundle", &generate_bundle);
    m.def("write_bundle", &write_bundle);
}
