#include "gridrestore/reduce.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>

#include "gridrestore/errors.hpp"
#include "gridrestore/netmodel_io.hpp"

namespace gridrestore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct DijkstraResult {
    std::vector<double> dist;
    std::vector<std::size_t> pred;
};

DijkstraResult dijkstra(const RoadNetwork& roads, std::size_t source) {
    DijkstraResult r{std::vector<double>(roads.size(), kInf), std::vector<std::size_t>(roads.size(), kNone)};
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    r.dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > r.dist[u]) continue;
        for (const auto& arc : roads.arcs(u)) {
            const double nd = d + arc.time_s;
            if (nd < r.dist[arc.to]) {
                r.dist[arc.to] = nd;
                r.pred[arc.to] = u;
                heap.emplace(nd, arc.to);
            }
        }
    }
    return r;
}

std::vector<RoadNodeId> walk_back(const RoadNetwork& roads, const DijkstraResult& r, std::size_t target) {
    std::vector<RoadNodeId> path;
    for (auto v = target; v != kNone; v = r.pred[v]) path.push_back(roads.node_at(v).id);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

ShortestPathTree shortest_paths_from(const RoadNetwork& roads, RoadNodeId source) {
    const auto src = roads.index_of(source);
    if (!src) throw ValidationError("unknown source road node " + std::to_string(raw(source)));
    const auto r = dijkstra(roads, *src);
    ShortestPathTree tree;
    for (std::size_t v = 0; v < roads.size(); ++v) {
        if (r.dist[v] == kInf) continue;
        ShortestPathLabel label{r.dist[v], std::nullopt};
        if (r.pred[v] != kNone) label.predecessor = roads.node_at(r.pred[v]).id;
        tree.emplace(roads.node_at(v).id, label);
    }
    return tree;
}

std::vector<RoadNodeId> extract_path(const ShortestPathTree& tree, RoadNodeId target) {
    std::vector<RoadNodeId> path;
    auto it = tree.find(target);
    while (it != tree.end()) {
        path.push_back(it->first);
        if (!it->second.predecessor) break;
        it = tree.find(*it->second.predecessor);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

const char* to_string(TerminalKind kind) noexcept {
    switch (kind) {
        case TerminalKind::depot_start: return "start";
        case TerminalKind::damaged: return "damaged";
        case TerminalKind::depot_end: return "end";
    }
    return "?";
}

std::string Terminal::label() const {
    if (kind == TerminalKind::damaged) return std::string("damaged:") + std::to_string(raw(power));
    return std::string(to_string(kind)) + ":" + depot;
}

ReducedGraph::ReducedGraph(std::vector<Terminal> terminals, std::vector<double> weights)
    : terminals_(std::move(terminals)), weights_(std::move(weights)) {
    if (weights_.size() != terminals_.size() * terminals_.size())
        throw ValidationError("reduced graph matrix must be square over its terminals");
}

std::vector<RoadNodeId> ReducedGraph::path(std::size_t i, std::size_t j) const {
    if (paths_.empty() || i == j) return {};
    if (i < j) return paths_[i * size() + j];
    auto p = paths_[j * size() + i];
    std::reverse(p.begin(), p.end());
    return p;
}

std::optional<std::size_t> ReducedGraph::start_of(std::string_view depot) const {
    for (std::size_t i = 0; i < terminals_.size(); ++i)
        if (terminals_[i].kind == TerminalKind::depot_start && terminals_[i].depot == depot) return i;
    return std::nullopt;
}

std::optional<std::size_t> ReducedGraph::end_of(std::string_view depot) const {
    for (std::size_t i = 0; i < terminals_.size(); ++i)
        if (terminals_[i].kind == TerminalKind::depot_end && terminals_[i].depot == depot) return i;
    return std::nullopt;
}

std::optional<std::size_t> ReducedGraph::index_of(PowerNodeId damaged) const {
    for (std::size_t i = 0; i < terminals_.size(); ++i)
        if (terminals_[i].kind == TerminalKind::damaged && terminals_[i].power == damaged) return i;
    return std::nullopt;
}

ReducedGraph build_reduced_graph(const RoadNetwork& roads, const ProjectionMap& projection,
                                 std::span<const PowerNodeId> selected, std::span<const Depot> depots) {
    std::vector<Terminal> terminals;
    for (const auto& d : depots) terminals.push_back({TerminalKind::depot_start, {}, d.id, d.road});
    for (const auto id : selected) terminals.push_back({TerminalKind::damaged, id, {}, projection.at(id).road});
    for (const auto& d : depots) terminals.push_back({TerminalKind::depot_end, {}, d.id, d.road});

    // Distinct road locations, in first-seen order.
    std::vector<std::size_t> locs;
    std::vector<std::size_t> loc_of(terminals.size());
    for (std::size_t t = 0; t < terminals.size(); ++t) {
        const auto idx = roads.index_of(terminals[t].road);
        if (!idx) throw ValidationError("terminal " + terminals[t].label() + " is not on the road network");
        auto it = std::find(locs.begin(), locs.end(), *idx);
        loc_of[t] = static_cast<std::size_t>(it - locs.begin());
        if (it == locs.end()) locs.push_back(*idx);
    }

    const std::size_t L = locs.size();
    std::vector<double> dist(L * L, 0.0);
    std::vector<std::vector<RoadNodeId>> loc_paths(L * L);
    for (std::size_t a = 0; a < L; ++a) {
        if (a + 1 == L) break;
        const auto r = dijkstra(roads, locs[a]);
        for (std::size_t b = a + 1; b < L; ++b) {
            const double d = r.dist[locs[b]];
            if (d == kInf) throw UnreachableError(raw(roads.node_at(locs[a]).id), raw(roads.node_at(locs[b]).id));
            dist[a * L + b] = dist[b * L + a] = d;
            loc_paths[a * L + b] = walk_back(roads, r, locs[b]);
        }
    }

    auto loc_path = [&](std::size_t a, std::size_t b) {
        if (a < b) return loc_paths[a * L + b];
        auto p = loc_paths[b * L + a];
        std::reverse(p.begin(), p.end());
        return p;
    };

    // Metric closure: floating-point summation order can leave a one-ulp
    // triangle violation between independently computed trees.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = 0; k < L; ++k)
            for (std::size_t i = 0; i < L; ++i)
                for (std::size_t j = i + 1; j < L; ++j) {
                    if (k == i || k == j) continue;
                    const double via = dist[i * L + k] + dist[k * L + j];
                    if (via < dist[i * L + j]) {
                        dist[i * L + j] = dist[j * L + i] = via;
                        auto p = loc_path(i, k);
                        auto tail = loc_path(k, j);
                        p.insert(p.end(), tail.begin() + 1, tail.end());
                        loc_paths[i * L + j] = std::move(p);
                        changed = true;
                    }
                }
    }

    const std::size_t n = terminals.size();
    std::vector<double> weights(n * n, 0.0);
    std::vector<std::vector<RoadNodeId>> paths(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            weights[i * n + j] = dist[loc_of[i] * L + loc_of[j]];
            if (i < j)
                paths[i * n + j] = loc_of[i] == loc_of[j] ? std::vector<RoadNodeId>{terminals[i].road}
                                                          : loc_path(loc_of[i], loc_of[j]);
        }
    ReducedGraph g(std::move(terminals), std::move(weights));
    g.paths_ = std::move(paths);
    return g;
}

void write_reduced_graph(std::ostream& out, const ReducedGraph& graph) {
    out << "terminals";
    for (const auto& t : graph.terminals()) out << ',' << t.label();
    out << '\n';
    for (std::size_t i = 0; i < graph.size(); ++i) {
        out << graph.terminal(i).label();
        for (std::size_t j = 0; j < graph.size(); ++j) out << ',' << format_double(graph.weight(i, j));
        out << '\n';
    }
}

}  // namespace gridrestore
