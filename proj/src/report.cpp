#include "gridrestore/report.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "gridrestore/errors.hpp"
#include "gridrestore/netmodel_io.hpp"

namespace gridrestore {

using nlohmann::ordered_json;

namespace {

ordered_json node_units(const std::map<PowerNodeId, double>& m) {
    auto arr = ordered_json::array();
    for (const auto& [id, q] : m) arr.push_back({{"node", raw(id)}, {"units", q}});
    return arr;
}

std::map<PowerNodeId, double> read_node_units(const ordered_json& arr) {
    std::map<PowerNodeId, double> m;
    for (const auto& e : arr) m[PowerNodeId{e.at("node").get<std::int64_t>()}] = e.at("units").get<double>();
    return m;
}

ordered_json coord(GeoPoint p) { return ordered_json::array({p.lon, p.lat}); }

}  // namespace

void write_schedule_report(std::ostream& out, const Schedule& schedule, const TwoStageConfig& config) {
    ordered_json j;
    j["schema"] = kScheduleSchema;
    j["config"] = {
        {"alpha1", config.allocation.alpha},  {"beta1", config.allocation.beta},
        {"alpha2", config.routing.alpha},     {"beta2", config.routing.beta},
        {"normalize_power", config.normalize_power}, {"exact_cap", config.exact_cap},
        {"power_scale", schedule.power_scale},
    };
    auto iterations = ordered_json::array();
    for (const auto& it : schedule.iterations) {
        ordered_json ij;
        ij["index"] = it.index;
        ij["forced"] = it.forced;
        auto selected = ordered_json::array();
        for (auto id : it.allocation.selected) selected.push_back(raw(id));
        auto y = ordered_json::array();
        for (std::size_t i = 0; i < it.allocation.nodes.size(); ++i)
            for (std::size_t k = 0; k < it.allocation.crews.size(); ++k)
                if (it.allocation.at(i, k) > 0.0)
                    y.push_back({{"node", raw(it.allocation.nodes[i])},
                                 {"crew", it.allocation.crews[k]},
                                 {"units", it.allocation.at(i, k)}});
        ij["allocation"] = {{"objective", it.allocation.objective}, {"selected", selected}, {"y", y}};
        ij["served"] = node_units(it.served);
        ij["residual"] = node_units(it.residual);
        auto routes = ordered_json::array();
        for (std::size_t r = 0; r < it.routes.size(); ++r) {
            const auto& route = it.routes[r];
            const auto& prob = it.problems[r];
            auto stops = ordered_json::array();
            for (std::size_t pos = 0; pos < route.sequence.size(); ++pos) {
                const auto& term = it.reduced->terminal(route.sequence[pos]);
                ordered_json s{{"terminal", term.label()}, {"road_node", raw(term.road)}};
                s["t"] = route.visit_order[pos];
                s["u"] = route.load[pos];
                s["q"] = prob.demand_at(route.sequence[pos]);
                stops.push_back(std::move(s));
            }
            routes.push_back({{"crew", route.crew_id},
                              {"depot", prob.crew.depot},
                              {"capacity", prob.crew.capacity},
                              {"stops", stops},
                              {"travel_s", route.travel_cost},
                              {"order_cost", route.order_cost},
                              {"objective", route.objective}});
        }
        ij["routes"] = routes;
        iterations.push_back(std::move(ij));
    }
    j["iterations"] = iterations;
    j["totals"] = {{"iterations", schedule.totals.iterations},
                   {"travel_s", schedule.totals.travel_s},
                   {"order_cost", schedule.totals.order_cost},
                   {"power_restored_kw", schedule.totals.power_restored_kw}};
    out << j.dump(2) << '\n';
}

LoadedSchedule read_schedule_report(std::istream& in, const std::string& source, const RoadNetwork& roads,
                                    const ProjectionMap& projection, const DamageScenario& scenario) {
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const ordered_json::exception& e) {
        throw ParseError(source + ": " + e.what());
    }

    LoadedSchedule out;
    try {
        if (j.at("schema").get<std::string>() != kScheduleSchema)
            throw ParseError(source + ": unsupported schema " + j.at("schema").get<std::string>());
        const auto& c = j.at("config");
        out.config.allocation = {c.at("alpha1").get<double>(), c.at("beta1").get<double>()};
        out.config.routing = {c.at("alpha2").get<double>(), c.at("beta2").get<double>()};
        out.config.normalize_power = c.at("normalize_power").get<bool>();
        out.config.exact_cap = c.at("exact_cap").get<std::size_t>();
        auto& sched = out.schedule;
        sched.power_scale = c.at("power_scale").get<double>();

        const auto crews = scenario.crews_in_sequence();
        const auto home = assign_home_depots(scenario);
        for (const auto& ij : j.at("iterations")) {
            IterationRecord rec;
            rec.index = ij.at("index").get<int>();
            rec.forced = ij.at("forced").get<bool>();
            const auto& alloc = ij.at("allocation");
            rec.allocation.objective = alloc.at("objective").get<double>();
            for (const auto& id : alloc.at("selected")) rec.allocation.selected.push_back(PowerNodeId{id.get<std::int64_t>()});
            rec.served = read_node_units(ij.at("served"));
            rec.residual = read_node_units(ij.at("residual"));

            std::map<std::string, std::map<PowerNodeId, double>> per_crew;
            for (const auto& e : alloc.at("y"))
                per_crew[e.at("crew").get<std::string>()][PowerNodeId{e.at("node").get<std::int64_t>()}] =
                    e.at("units").get<double>();

            rec.reduced = std::make_shared<const ReducedGraph>(
                build_reduced_graph(roads, projection, rec.allocation.selected, scenario.depots));

            for (const auto& rj : ij.at("routes")) {
                const auto crew_id = rj.at("crew").get<std::string>();
                auto crew = std::find_if(crews.begin(), crews.end(), [&](const Crew& k) { return k.id == crew_id; });
                if (crew == crews.end()) throw ParseError(source + ": report references unknown crew " + crew_id);
                RouteProblem rp;
                rp.reduced = rec.reduced;
                rp.crew = {crew->id, crew->capacity, crew->cost_scale, home.at(crew->id)};
                rp.assignments = per_crew[crew_id];
                for (const auto& [id, q] : rp.assignments) {
                    const auto* d = scenario.find(id);
                    if (!d) throw ParseError(source + ": report references unknown node " + std::to_string(raw(id)));
                    rp.attrs[id] = {d->power_kw, d->repair_hours};
                }
                rp.weights = out.config.routing;
                rp.power_scale = sched.power_scale;
                rp.exact_cap = out.config.exact_cap;

                CrewRoute route;
                route.crew_id = crew_id;
                for (const auto& s : rj.at("stops")) {
                    const auto label = s.at("terminal").get<std::string>();
                    std::size_t idx = rec.reduced->size();
                    for (std::size_t t = 0; t < rec.reduced->size(); ++t)
                        if (rec.reduced->terminal(t).label() == label) idx = t;
                    if (idx == rec.reduced->size())
                        throw ParseError(source + ": stop " + label + " is not a terminal of iteration " +
                                         std::to_string(rec.index));
                    route.sequence.push_back(idx);
                    route.visit_order.push_back(s.at("t").get<int>());
                    route.load.push_back(s.at("u").get<double>());
                }
                route.travel_cost = rj.at("travel_s").get<double>();
                route.order_cost = rj.at("order_cost").get<double>();
                route.objective = rj.at("objective").get<double>();
                rec.problems.push_back(std::move(rp));
                rec.routes.push_back(std::move(route));
            }
            sched.iterations.push_back(std::move(rec));
        }
        const auto& t = j.at("totals");
        sched.totals.iterations = t.at("iterations").get<int>();
        sched.totals.travel_s = t.at("travel_s").get<double>();
        sched.totals.order_cost = t.at("order_cost").get<double>();
        sched.totals.power_restored_kw = t.at("power_restored_kw").get<double>();
    } catch (const ordered_json::exception& e) {
        throw ParseError(source + ": " + e.what());
    }
    return out;
}

void write_route_geojson(std::ostream& out, const Schedule& schedule, const RoadNetwork& roads,
                         const PowerNetwork& power, const DamageScenario& scenario) {
    auto features = ordered_json::array();
    for (const auto& it : schedule.iterations) {
        for (std::size_t r = 0; r < it.routes.size(); ++r) {
            const auto& route = it.routes[r];
            auto line = ordered_json::array();
            std::optional<RoadNodeId> last;
            for (std::size_t pos = 0; pos + 1 < route.sequence.size(); ++pos) {
                auto leg = it.reduced->path(route.sequence[pos], route.sequence[pos + 1]);
                if (leg.empty()) leg = {it.reduced->terminal(route.sequence[pos]).road};
                for (auto id : leg) {
                    if (last && *last == id) continue;
                    line.push_back(coord(roads.node(id).coord));
                    last = id;
                }
            }
            if (line.size() == 1) line.push_back(line.front());
            auto stops = ordered_json::array();
            for (auto t : route.sequence) stops.push_back(it.reduced->terminal(t).label());
            features.push_back({{"type", "Feature"},
                                {"geometry", {{"type", "LineString"}, {"coordinates", line}}},
                                {"properties",
                                 {{"iteration", it.index},
                                  {"crew", route.crew_id},
                                  {"stops", stops},
                                  {"travel_s", route.travel_cost}}}});
        }
    }
    for (const auto& d : scenario.depots)
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", coord(roads.node(d.road).coord)}}},
                            {"properties", {{"kind", "depot"}, {"id", d.id}}}});
    for (const auto& d : scenario.damaged) {
        if (!power.contains(d.id)) continue;
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", coord(power.node(d.id).coord)}}},
                            {"properties",
                             {{"kind", "damaged"},
                              {"id", raw(d.id)},
                              {"power_kw", d.power_kw},
                              {"repair_hours", d.repair_hours},
                              {"demand", d.demand}}}});
    }
    ordered_json fc{{"type", "FeatureCollection"}, {"features", features}};
    out << fc.dump(2) << '\n';
}

void write_summary(std::ostream& out, const Schedule& schedule) {
    out << "iterations: " << schedule.totals.iterations << '\n'
        << "travel_s: " << format_double(schedule.totals.travel_s) << '\n'
        << "order_cost: " << format_double(schedule.totals.order_cost) << '\n'
        << "power_restored_kw: " << format_double(schedule.totals.power_restored_kw) << "\n\n"
        << "iteration,routes,served_units,travel_s,nodes_completed\n";
    for (const auto& it : schedule.iterations) {
        double served = 0.0;
        for (const auto& [id, q] : it.served) served += q;
        double travel = 0.0;
        for (const auto& r : it.routes) travel += r.travel_cost;
        int completed = 0;
        for (const auto& [id, q] : it.served)
            if (it.residual.contains(id) && it.residual.at(id) == 0.0) ++completed;
        out << it.index << ',' << it.routes.size() << ',' << format_double(served) << ',' << format_double(travel)
            << ',' << completed << '\n';
    }
}

}  // namespace gridrestore
