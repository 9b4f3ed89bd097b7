#include "gridrestore/netmodel_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "gridrestore/errors.hpp"

namespace gridrestore {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

struct Row {
    std::size_t line;
    std::vector<std::string> cells;
};

struct Section {
    std::map<std::string, std::size_t> columns;
    std::vector<Row> rows;
};

class TabularFile {
public:
    TabularFile(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line;
        std::size_t lineno = 0;
        Section* current = nullptr;
        bool need_header = false;
        while (std::getline(in, line)) {
            ++lineno;
            const auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw ParseError(source_, lineno, "unterminated section marker");
                const std::string name(trim(t.substr(1, t.size() - 2)));
                if (sections_.contains(name)) throw ParseError(source_, lineno, "duplicate section [" + name + "]");
                current = &sections_[name];
                need_header = true;
                continue;
            }
            if (!current) throw ParseError(source_, lineno, "data outside of a section");
            auto cells = split_csv(t);
            if (need_header) {
                for (std::size_t i = 0; i < cells.size(); ++i)
                    if (!current->columns.emplace(cells[i], i).second)
                        throw ParseError(source_, lineno, "duplicate column " + cells[i]);
                need_header = false;
                continue;
            }
            if (cells.size() != current->columns.size())
                throw ParseError(source_, lineno,
                                 "expected " + std::to_string(current->columns.size()) + " cells, got " +
                                     std::to_string(cells.size()));
            current->rows.push_back({lineno, std::move(cells)});
        }
        if (in.bad()) throw IoError("failed reading " + source_);
    }

    const Section* section(const std::string& name) const {
        auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    const Section& require(const std::string& name) const {
        if (const auto* s = section(name)) return *s;
        throw ParseError(source_ + ": missing section [" + name + "]");
    }

    std::optional<std::size_t> column(const Section& s, const std::string& name) const {
        auto it = s.columns.find(name);
        if (it == s.columns.end()) return std::nullopt;
        return it->second;
    }

    std::size_t require_column(const Section& s, const std::string& section, const std::string& name) const {
        if (auto c = column(s, name)) return *c;
        throw ParseError(source_ + ": section [" + section + "] lacks column " + name);
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, Section> sections_;
};

double parse_double(const std::string& text, const std::string& source, std::size_t line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ParseError(source, line, "not a number: '" + text + "'");
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& source, std::size_t line) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ParseError(source, line, "not an integer id: '" + text + "'");
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

NetworkFormat sniff(std::istream& in) {
    auto c = in.peek();
    while (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == 0xEF || c == 0xBB || c == 0xBF) {
        in.get();
        c = in.peek();
    }
    return c == '<' ? NetworkFormat::graphml : NetworkFormat::tabular;
}

// GraphML ------------------------------------------------------------------

namespace pt = boost::property_tree;

struct GraphMl {
    struct Element {
        std::string id, source, target;
        std::map<std::string, std::string> data;  // attr.name -> text
    };
    std::vector<Element> nodes, edges;
};

GraphMl read_graphml(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(source, e.line(), e.message());
    }
    const auto root = tree.get_child_optional("graphml");
    if (!root) throw ParseError(source + ": missing <graphml> root");
    std::map<std::string, std::string> key_names;
    for (const auto& [tag, child] : *root)
        if (tag == "key")
            key_names[child.get<std::string>("<xmlattr>.id", "")] =
                child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'),
                                      child.get<std::string>("<xmlattr>.id", ""));
    const auto graph = root->get_child_optional("graph");
    if (!graph) throw ParseError(source + ": missing <graph> element");

    GraphMl g;
    for (const auto& [tag, child] : *graph) {
        if (tag != "node" && tag != "edge") continue;
        GraphMl::Element el;
        el.id = child.get<std::string>("<xmlattr>.id", "");
        el.source = child.get<std::string>("<xmlattr>.source", "");
        el.target = child.get<std::string>("<xmlattr>.target", "");
        for (const auto& [dtag, data] : child) {
            if (dtag != "data") continue;
            const auto key = data.get<std::string>("<xmlattr>.key", "");
            auto it = key_names.find(key);
            el.data[it == key_names.end() ? key : it->second] = data.data();
        }
        (tag == "node" ? g.nodes : g.edges).push_back(std::move(el));
    }
    return g;
}

std::optional<std::string> pick(const GraphMl::Element& el, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        auto it = el.data.find(n);
        if (it != el.data.end() && !it->second.empty()) return it->second;
    }
    return std::nullopt;
}

GeoPoint graphml_coord(const GraphMl::Element& el, const std::string& source) {
    const auto lat = pick(el, {"lat", "y"});
    const auto lon = pick(el, {"lon", "x"});
    if (!lat || !lon) throw ParseError(source + ": node " + el.id + " lacks lat/lon data");
    return {parse_double(*lat, source, 0), parse_double(*lon, source, 0)};
}

void write_graphml_header(std::ostream& out, std::initializer_list<std::pair<const char*, const char*>> keys) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    for (const auto& [name, domain] : keys)
        out << "  <key id=\"" << name << "\" for=\"" << domain << "\" attr.name=\"" << name
            << "\" attr.type=\"double\"/>\n";
    out << "  <graph edgedefault=\"undirected\">\n";
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

PowerNetwork parse_power_network(std::istream& in, const std::string& source, NetworkFormat format) {
    if (format == NetworkFormat::automatic) format = sniff(in);
    std::vector<PowerNode> nodes;
    std::vector<PowerLine> edges;
    if (format == NetworkFormat::graphml) {
        const auto g = read_graphml(in, source);
        for (const auto& n : g.nodes)
            nodes.push_back({PowerNodeId{parse_int(n.id, source, 0)}, graphml_coord(n, source)});
        for (const auto& e : g.edges)
            edges.push_back({PowerNodeId{parse_int(e.source, source, 0)}, PowerNodeId{parse_int(e.target, source, 0)}});
        return PowerNetwork(std::move(nodes), std::move(edges));
    }
    TabularFile f(in, source);
    const auto& ns = f.require("nodes");
    const auto cid = f.require_column(ns, "nodes", "id");
    const auto clat = f.require_column(ns, "nodes", "lat");
    const auto clon = f.require_column(ns, "nodes", "lon");
    for (const auto& r : ns.rows)
        nodes.push_back({PowerNodeId{parse_int(r.cells[cid], source, r.line)},
                         {parse_double(r.cells[clat], source, r.line), parse_double(r.cells[clon], source, r.line)}});
    if (const auto* es = f.section("edges")) {
        const auto ca = f.require_column(*es, "edges", "id_a");
        const auto cb = f.require_column(*es, "edges", "id_b");
        for (const auto& r : es->rows)
            edges.push_back({PowerNodeId{parse_int(r.cells[ca], source, r.line)},
                             PowerNodeId{parse_int(r.cells[cb], source, r.line)}});
    }
    return PowerNetwork(std::move(nodes), std::move(edges));
}

RoadNetwork parse_road_network(std::istream& in, const std::string& source, const RoadLoadOptions& options) {
    auto format = options.format == NetworkFormat::automatic ? sniff(in) : options.format;
    std::vector<RoadNode> nodes;
    std::vector<RoadEdge> edges;
    if (format == NetworkFormat::graphml) {
        const auto g = read_graphml(in, source);
        for (const auto& n : g.nodes)
            nodes.push_back({RoadNodeId{parse_int(n.id, source, 0)}, graphml_coord(n, source)});
        for (const auto& e : g.edges) {
            RoadEdge edge{RoadNodeId{parse_int(e.source, source, 0)}, RoadNodeId{parse_int(e.target, source, 0)}};
            const auto len = pick(e, {"length_m", "length"});
            if (!len) throw ParseError(source + ": edge " + e.source + "-" + e.target + " lacks a length");
            edge.length_m = parse_double(*len, source, 0);
            if (auto s = pick(e, {"speed_mps"}))
                edge.speed_mps = parse_double(*s, source, 0);
            else if (auto kph = pick(e, {"speed_kph"}))
                edge.speed_mps = parse_double(*kph, source, 0) / 3.6;
            else
                edge.speed_mps = options.default_speed_mps;
            edges.push_back(edge);
        }
        return RoadNetwork(std::move(nodes), std::move(edges));
    }
    TabularFile f(in, source);
    const auto& ns = f.require("nodes");
    const auto cid = f.require_column(ns, "nodes", "id");
    const auto clat = f.require_column(ns, "nodes", "lat");
    const auto clon = f.require_column(ns, "nodes", "lon");
    for (const auto& r : ns.rows)
        nodes.push_back({RoadNodeId{parse_int(r.cells[cid], source, r.line)},
                         {parse_double(r.cells[clat], source, r.line), parse_double(r.cells[clon], source, r.line)}});
    if (const auto* es = f.section("edges")) {
        const auto ca = f.require_column(*es, "edges", "id_a");
        const auto cb = f.require_column(*es, "edges", "id_b");
        const auto clen = f.require_column(*es, "edges", "length_m");
        const auto cspeed = f.column(*es, "speed_mps");
        for (const auto& r : es->rows) {
            RoadEdge e{RoadNodeId{parse_int(r.cells[ca], source, r.line)},
                       RoadNodeId{parse_int(r.cells[cb], source, r.line)},
                       parse_double(r.cells[clen], source, r.line), options.default_speed_mps};
            if (cspeed && !r.cells[*cspeed].empty()) e.speed_mps = parse_double(r.cells[*cspeed], source, r.line);
            edges.push_back(e);
        }
    }
    return RoadNetwork(std::move(nodes), std::move(edges));
}

DamageScenario parse_damage_scenario(std::istream& in, const std::string& source) {
    TabularFile f(in, source);
    DamageScenario s;
    if (const auto* ds = f.section("damaged")) {
        const auto cid = f.require_column(*ds, "damaged", "node_id");
        const auto cp = f.require_column(*ds, "damaged", "power_kw");
        const auto ct = f.require_column(*ds, "damaged", "repair_hours");
        const auto cq = f.require_column(*ds, "damaged", "demand");
        for (const auto& r : ds->rows)
            s.damaged.push_back({PowerNodeId{parse_int(r.cells[cid], source, r.line)},
                                 parse_double(r.cells[cp], source, r.line), parse_double(r.cells[ct], source, r.line),
                                 parse_double(r.cells[cq], source, r.line)});
    }
    const auto& dep = f.require("depots");
    const auto cdid = f.require_column(dep, "depots", "depot_id");
    const auto croad = f.require_column(dep, "depots", "road_node_id");
    for (const auto& r : dep.rows)
        s.depots.push_back({r.cells[cdid], RoadNodeId{parse_int(r.cells[croad], source, r.line)}});

    if (const auto* cs = f.section("crews")) {
        const auto cid = f.require_column(*cs, "crews", "crew_id");
        const auto ckind = f.require_column(*cs, "crews", "kind");
        const auto ccap = f.require_column(*cs, "crews", "capacity");
        const auto cseq = f.require_column(*cs, "crews", "sequence_index");
        const auto cscale = f.column(*cs, "cost_scale");
        const auto chome = f.column(*cs, "home_depot");
        for (const auto& r : cs->rows) {
            Crew c;
            c.id = r.cells[cid];
            const auto kind = crew_kind_from_string(r.cells[ckind]);
            if (!kind) throw ParseError(source, r.line, "crew kind must be 'tree' or 'line'");
            c.kind = *kind;
            c.capacity = parse_double(r.cells[ccap], source, r.line);
            c.sequence_index = static_cast<int>(parse_int(r.cells[cseq], source, r.line));
            if (cscale && !r.cells[*cscale].empty()) c.cost_scale = parse_double(r.cells[*cscale], source, r.line);
            if (chome) c.home_depot = r.cells[*chome];
            s.crews.push_back(std::move(c));
        }
    }
    s.validate();
    return s;
}

PowerNetwork load_power_network(const std::filesystem::path& path, NetworkFormat format) {
    auto in = open_input(path);
    return parse_power_network(in, path.string(), format);
}

RoadNetwork load_road_network(const std::filesystem::path& path, const RoadLoadOptions& options) {
    auto in = open_input(path);
    return parse_road_network(in, path.string(), options);
}

DamageScenario load_damage_scenario(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_damage_scenario(in, path.string());
}

DamageScenario load_damage_scenario(const std::filesystem::path& path, const RoadNetwork& roads) {
    auto s = load_damage_scenario(path);
    s.validate(roads);
    return s;
}

void write_power_network(std::ostream& out, const PowerNetwork& net, NetworkFormat format) {
    if (format == NetworkFormat::graphml) {
        write_graphml_header(out, {{"lat", "node"}, {"lon", "node"}});
        for (const auto& n : net.nodes())
            out << "    <node id=\"" << raw(n.id) << "\"><data key=\"lat\">" << format_double(n.coord.lat)
                << "</data><data key=\"lon\">" << format_double(n.coord.lon) << "</data></node>\n";
        for (const auto& e : net.edges())
            out << "    <edge source=\"" << raw(e.a) << "\" target=\"" << raw(e.b) << "\"/>\n";
        out << "  </graph>\n</graphml>\n";
        return;
    }
    out << "# gridrestore power network\n[nodes]\nid,lat,lon\n";
    for (const auto& n : net.nodes())
        out << raw(n.id) << ',' << format_double(n.coord.lat) << ',' << format_double(n.coord.lon) << '\n';
    out << "[edges]\nid_a,id_b\n";
    for (const auto& e : net.edges()) out << raw(e.a) << ',' << raw(e.b) << '\n';
}

void write_road_network(std::ostream& out, const RoadNetwork& net, NetworkFormat format) {
    if (format == NetworkFormat::graphml) {
        write_graphml_header(out, {{"lat", "node"}, {"lon", "node"}, {"length_m", "edge"}, {"speed_mps", "edge"}});
        for (const auto& n : net.nodes())
            out << "    <node id=\"" << raw(n.id) << "\"><data key=\"lat\">" << format_double(n.coord.lat)
                << "</data><data key=\"lon\">" << format_double(n.coord.lon) << "</data></node>\n";
        for (const auto& e : net.edges())
            out << "    <edge source=\"" << raw(e.a) << "\" target=\"" << raw(e.b) << "\"><data key=\"length_m\">"
                << format_double(e.length_m) << "</data><data key=\"speed_mps\">" << format_double(e.speed_mps)
                << "</data></edge>\n";
        out << "  </graph>\n</graphml>\n";
        return;
    }
    out << "# gridrestore road network\n[nodes]\nid,lat,lon\n";
    for (const auto& n : net.nodes())
        out << raw(n.id) << ',' << format_double(n.coord.lat) << ',' << format_double(n.coord.lon) << '\n';
    out << "[edges]\nid_a,id_b,length_m,speed_mps\n";
    for (const auto& e : net.edges())
        out << raw(e.a) << ',' << raw(e.b) << ',' << format_double(e.length_m) << ','
            << format_double(e.speed_mps) << '\n';
}

void write_damage_scenario(std::ostream& out, const DamageScenario& s) {
    out << "# gridrestore damage scenario\n[damaged]\nnode_id,power_kw,repair_hours,demand\n";
    for (const auto& d : s.damaged)
        out << raw(d.id) << ',' << format_double(d.power_kw) << ',' << format_double(d.repair_hours) << ','
            << format_double(d.demand) << '\n';
    out << "[depots]\ndepot_id,road_node_id\n";
    for (const auto& d : s.depots) out << d.id << ',' << raw(d.road) << '\n';
    out << "[crews]\ncrew_id,kind,capacity,sequence_index,cost_scale,home_depot\n";
    for (const auto& c : s.crews)
        out << c.id << ',' << to_string(c.kind) << ',' << format_double(c.capacity) << ',' << c.sequence_index
            << ',' << format_double(c.cost_scale) << ',' << c.home_depot << '\n';
}

}  // namespace gridrestore
