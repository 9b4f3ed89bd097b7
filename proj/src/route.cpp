#include "gridrestore/route.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "gridrestore/errors.hpp"

namespace gridrestore {

namespace {

double capacity_tolerance(double capacity) { return 1e-9 * std::max(1.0, capacity); }

}  // namespace

std::size_t RouteProblem::start_terminal() const {
    if (auto s = reduced->start_of(crew.depot)) return *s;
    throw ValidationError("crew " + crew.id + " depot " + crew.depot + " is not a terminal of the reduced graph");
}

std::size_t RouteProblem::end_terminal() const {
    if (auto e = reduced->end_of(crew.depot)) return *e;
    throw ValidationError("crew " + crew.id + " depot " + crew.depot + " is not a terminal of the reduced graph");
}

double RouteProblem::order_weight(PowerNodeId node) const {
    auto it = attrs.find(node);
    if (it == attrs.end()) return 0.0;
    return weights.alpha * it->second.repair_hours - weights.beta * it->second.power_kw / power_scale;
}

double RouteProblem::demand_at(std::size_t terminal) const {
    const auto& t = reduced->terminal(terminal);
    if (t.kind != TerminalKind::damaged) return 0.0;
    auto it = assignments.find(t.power);
    return it == assignments.end() ? 0.0 : it->second;
}

double RouteProblem::total_demand() const {
    double s = 0.0;
    for (const auto& [id, q] : assignments) s += q;
    return s;
}

CostBreakdown route_cost(std::span<const std::size_t> sequence, const RouteProblem& p) {
    if (sequence.size() != p.assignments.size() + 2 || sequence.front() != p.start_terminal() ||
        sequence.back() != p.end_terminal())
        throw ValidationError("route must run from the crew's start depot through each assigned node to its end depot");
    std::set<PowerNodeId> seen;
    for (std::size_t pos = 1; pos + 1 < sequence.size(); ++pos) {
        if (sequence[pos] >= p.reduced->size()) throw ValidationError("route references an unknown terminal");
        const auto& t = p.reduced->terminal(sequence[pos]);
        if (t.kind != TerminalKind::damaged || !p.assignments.contains(t.power) || !seen.insert(t.power).second)
            throw ValidationError("route must visit each assigned node exactly once");
    }

    CostBreakdown c;
    for (std::size_t pos = 0; pos + 1 < sequence.size(); ++pos) c.travel += p.cost(sequence[pos], sequence[pos + 1]);
    for (std::size_t pos = 1; pos + 1 < sequence.size(); ++pos)
        c.order += p.order_weight(p.reduced->terminal(sequence[pos]).power) * static_cast<double>(pos);
    c.total = c.travel + c.order;
    return c;
}

CrewRoute solve_route(const RouteProblem& p) {
    if (!p.reduced) throw ValidationError("route problem has no reduced graph");
    if (p.assignments.empty()) throw ValidationError("route problem for crew " + p.crew.id + " has no assigned nodes");
    for (const auto& [id, q] : p.assignments)
        if (!(q > 0.0)) throw ValidationError("assigned quantity at node " + std::to_string(raw(id)) + " must be positive");
    if (p.total_demand() > p.crew.capacity + capacity_tolerance(p.crew.capacity))
        throw InfeasibleError("assigned demand exceeds the capacity of crew " + p.crew.id);
    const std::size_t m = p.assignments.size();
    if (m > p.exact_cap || m > kHardExactCap)
        throw SizeError(std::to_string(m) + " assigned nodes exceed the exact-solve cap of " +
                        std::to_string(std::min(p.exact_cap, kHardExactCap)));

    const std::size_t start = p.start_terminal();
    const std::size_t end = p.end_terminal();
    std::vector<std::size_t> term(m);
    std::vector<double> w(m);
    {
        std::size_t j = 0;
        for (const auto& [id, q] : p.assignments) {
            const auto idx = p.reduced->index_of(id);
            if (!idx) throw ValidationError("assigned node " + std::to_string(raw(id)) + " is not a terminal");
            term[j] = *idx;
            w[j] = p.order_weight(id);
            ++j;
        }
    }

    // best[mask * m + last]: cheapest start..last path covering mask, with
    // the order term charged at position popcount(mask).
    const std::size_t states = std::size_t{1} << m;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best(states * m, kInf);
    std::vector<std::uint8_t> prev(states * m, 0);
    for (std::size_t j = 0; j < m; ++j) best[(std::size_t{1} << j) * m + j] = p.cost(start, term[j]) + w[j];
    for (std::size_t mask = 1; mask < states; ++mask) {
        const double pos = static_cast<double>(std::popcount(mask) + 1);
        for (std::size_t last = 0; last < m; ++last) {
            const double base = best[mask * m + last];
            if (base == kInf) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (mask & (std::size_t{1} << j)) continue;
                const std::size_t next = mask | (std::size_t{1} << j);
                const double v = base + p.cost(term[last], term[j]) + w[j] * pos;
                if (v < best[next * m + j]) {
                    best[next * m + j] = v;
                    prev[next * m + j] = static_cast<std::uint8_t>(last);
                }
            }
        }
    }
    const std::size_t full = states - 1;
    std::size_t last = 0;
    double best_total = kInf;
    for (std::size_t j = 0; j < m; ++j) {
        const double v = best[full * m + j] + p.cost(term[j], end);
        if (v < best_total) {
            best_total = v;
            last = j;
        }
    }

    std::vector<std::size_t> order;
    for (std::size_t mask = full; mask;) {
        order.push_back(term[last]);
        const std::size_t before = prev[mask * m + last];
        mask &= ~(std::size_t{1} << last);
        last = before;
    }

    CrewRoute r;
    r.crew_id = p.crew.id;
    r.sequence.push_back(start);
    r.sequence.insert(r.sequence.end(), order.rbegin(), order.rend());
    r.sequence.push_back(end);
    double load = 0.0;
    for (std::size_t pos = 0; pos < r.sequence.size(); ++pos) {
        load += p.demand_at(r.sequence[pos]);
        r.visit_order.push_back(static_cast<int>(pos));
        r.load.push_back(load);
    }
    const auto cost = route_cost(r.sequence, p);
    r.travel_cost = cost.travel;
    r.order_cost = cost.order;
    r.objective = cost.total;
    return r;
}

const char* to_string(ConstraintFamily family) noexcept {
    switch (family) {
        case ConstraintFamily::degree: return "degree";
        case ConstraintFamily::flow_conservation: return "flow-conservation";
        case ConstraintFamily::visit_order: return "visit-order";
        case ConstraintFamily::order_monotonicity: return "order-monotonicity";
        case ConstraintFamily::resource_balance: return "resource-balance";
        case ConstraintFamily::capacity_bound: return "capacity-bound";
    }
    return "?";
}

std::vector<Violation> validate_route(const CrewRoute& r, const RouteProblem& p) {
    std::vector<Violation> out;
    auto report = [&](ConstraintFamily f, std::string detail) { out.push_back({f, std::move(detail)}); };
    const auto& seq = r.sequence;
    const std::size_t n = p.reduced ? p.reduced->size() : 0;

    for (auto t : seq)
        if (t >= n) {
            report(ConstraintFamily::flow_conservation, "terminal index " + std::to_string(t) + " out of range");
            return out;
        }
    if (seq.size() < 2) {
        report(ConstraintFamily::flow_conservation, "route needs a start and an end depot");
        return out;
    }
    auto label = [&](std::size_t t) { return p.reduced->terminal(t).label(); };

    // Departure from the start depot, arrival at the end depot, and one
    // in/one out at every interior stop.
    const auto start = p.start_terminal();
    const auto end = p.end_terminal();
    if (seq.front() != start) report(ConstraintFamily::flow_conservation, "route does not leave from " + label(start));
    if (seq.back() != end) report(ConstraintFamily::flow_conservation, "route does not return to " + label(end));
    for (std::size_t pos = 1; pos + 1 < seq.size(); ++pos)
        if (p.reduced->terminal(seq[pos]).kind != TerminalKind::damaged)
            report(ConstraintFamily::flow_conservation, "depot terminal " + label(seq[pos]) + " inside the route");

    std::map<PowerNodeId, int> visits;
    for (std::size_t pos = 1; pos + 1 < seq.size(); ++pos) {
        const auto& t = p.reduced->terminal(seq[pos]);
        if (t.kind == TerminalKind::damaged) ++visits[t.power];
    }
    for (const auto& [id, q] : p.assignments) {
        const int v = visits.contains(id) ? visits[id] : 0;
        if (v != 1)
            report(ConstraintFamily::degree,
                   "node " + std::to_string(raw(id)) + " visited " + std::to_string(v) + " times, expected once");
    }
    for (const auto& [id, v] : visits)
        if (!p.assignments.contains(id))
            report(ConstraintFamily::degree, "node " + std::to_string(raw(id)) + " visited without an assignment");

    if (r.visit_order.size() != seq.size()) {
        report(ConstraintFamily::visit_order, "visit-order vector does not match the route length");
    } else {
        if (r.visit_order.front() != 0) report(ConstraintFamily::visit_order, "start depot must have visit order 0");
        for (std::size_t pos = 0; pos + 1 < seq.size(); ++pos) {
            const int ti = r.visit_order[pos];
            const int tj = r.visit_order[pos + 1];
            if (ti + 1 != tj)
                report(ConstraintFamily::visit_order,
                       "t(" + label(seq[pos + 1]) + ") = " + std::to_string(tj) + ", expected " + std::to_string(ti + 1));
            if (!(tj > ti))
                report(ConstraintFamily::order_monotonicity,
                       "t does not increase from " + label(seq[pos]) + " to " + label(seq[pos + 1]));
        }
    }

    const double tol = capacity_tolerance(p.crew.capacity);
    if (r.load.size() != seq.size()) {
        report(ConstraintFamily::resource_balance, "load vector does not match the route length");
    } else {
        if (std::abs(r.load.front()) > tol) report(ConstraintFamily::resource_balance, "load must start at 0");
        for (std::size_t pos = 0; pos + 1 < seq.size(); ++pos) {
            const double expect = r.load[pos] + p.demand_at(seq[pos + 1]);
            if (std::abs(r.load[pos + 1] - expect) > tol)
                report(ConstraintFamily::resource_balance, "u(" + label(seq[pos + 1]) + ") breaks load accumulation");
        }
        for (std::size_t pos = 0; pos < seq.size(); ++pos) {
            const double q = p.demand_at(seq[pos]);
            if (r.load[pos] < q - tol || r.load[pos] > p.crew.capacity + tol)
                report(ConstraintFamily::capacity_bound,
                       "u(" + label(seq[pos]) + ") outside [q, Q] = [" + std::to_string(q) + ", " +
                           std::to_string(p.crew.capacity) + "]");
        }
    }
    return out;
}

}  // namespace gridrestore
