#include "gridmdp/grid.hpp"

#include "gridmdp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gridmdp {

using nlohmann::json;

namespace {

// Strict field access: every key must exist with the right type, and no
// unknown keys may be present.
void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

const json& require_key(const json& obj, const std::string& where, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing key '" + key + "'");
    }
    return *it;
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        throw ParseError(field + ": expected a number");
    }
    return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) {
        throw ParseError(field + ": expected an integer");
    }
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& field) {
    if (!v.is_boolean()) {
        throw ParseError(field + ": expected a boolean");
    }
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
    if (!v.is_string()) {
        throw ParseError(field + ": expected a string");
    }
    return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& field) {
    if (!v.is_array()) {
        throw ParseError(field + ": expected an array");
    }
    return v;
}

MeasurementDescriptor parse_measurement(const json& m, const std::string& where) {
    if (!m.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    MeasurementDescriptor desc;
    const std::string kind = as_string(require_key(m, where, "kind"), where + ".kind");
    if (kind == "bus_voltage") {
        reject_unknown_keys(m, where, {"kind", "bus"});
        desc.kind = MeasurementKind::BusVoltage;
        desc.bus = as_int(require_key(m, where, "bus"), where + ".bus");
    } else if (kind == "line_flow") {
        reject_unknown_keys(m, where, {"kind", "line", "end"});
        desc.kind = MeasurementKind::LineFlow;
        desc.line = as_int(require_key(m, where, "line"), where + ".line");
        const std::string end = as_string(require_key(m, where, "end"), where + ".end");
        if (end == "from") {
            desc.end = LineEnd::From;
        } else if (end == "to") {
            desc.end = LineEnd::To;
        } else {
            throw ParseError(where + ".end: expected 'from' or 'to', got '" + end + "'");
        }
    } else if (kind == "bus_injection") {
        reject_unknown_keys(m, where, {"kind", "bus"});
        desc.kind = MeasurementKind::BusInjection;
        desc.bus = as_int(require_key(m, where, "bus"), where + ".bus");
    } else {
        throw ParseError(where + ".kind: unknown measurement kind '" + kind + "'");
    }
    return desc;
}

void resolve_references(const GridModel& grid) {
    std::unordered_set<int> bus_ids;
    for (const auto& b : grid.buses) bus_ids.insert(b.id);
    std::unordered_set<int> line_ids;
    for (const auto& l : grid.lines) line_ids.insert(l.id);

    for (const auto& l : grid.lines) {
        if (!bus_ids.count(l.from_bus)) {
            throw ReferenceError("line " + std::to_string(l.id) + " references unknown bus " +
                                 std::to_string(l.from_bus));
        }
        if (!bus_ids.count(l.to_bus)) {
            throw ReferenceError("line " + std::to_string(l.id) + " references unknown bus " +
                                 std::to_string(l.to_bus));
        }
    }
    for (const auto& g : grid.generators) {
        if (!bus_ids.count(g.bus)) {
            throw ReferenceError("generator " + std::to_string(g.id) +
                                 " references unknown bus " + std::to_string(g.bus));
        }
    }
    for (const auto& d : grid.devices) {
        for (std::size_t k = 0; k < d.measured.size(); ++k) {
            const auto& m = d.measured[k];
            const std::string where =
                "device " + std::to_string(d.id) + " measurement " + std::to_string(k);
            if (m.kind == MeasurementKind::LineFlow) {
                if (!line_ids.count(m.line)) {
                    throw ReferenceError(where + " references unknown line " +
                                         std::to_string(m.line));
                }
            } else if (!bus_ids.count(m.bus)) {
                throw ReferenceError(where + " references unknown bus " + std::to_string(m.bus));
            }
        }
    }
}

}  // namespace

int GridModel::slack_bus() const {
    int found = -1;
    for (const auto& b : buses) {
        if (b.is_slack) {
            if (found >= 0) return -1;
            found = b.id;
        }
    }
    return found;
}

std::vector<int> GridModel::lines_at(int bus) const {
    std::vector<int> out;
    for (const auto& l : lines) {
        if (l.from_bus == bus || l.to_bus == bus) out.push_back(l.id);
    }
    return out;
}

double GridModel::total_base_load() const {
    double sum = 0.0;
    for (const auto& b : buses) sum += b.base_load_mw;
    return sum;
}

GridModel load_grid(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid document: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("top level: expected an object");
    }
    reject_unknown_keys(doc, "top level", {"base_mva", "buses", "lines", "generators", "devices"});

    GridModel grid;
    grid.base_mva = as_number(require_key(doc, "top level", "base_mva"), "base_mva");

    const json& buses = as_array(require_key(doc, "top level", "buses"), "buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::string where = "buses[" + std::to_string(i) + "]";
        const json& b = buses[i];
        if (!b.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(b, where, {"id", "name", "is_slack", "base_load_mw"});
        Bus bus;
        bus.id = as_int(require_key(b, where, "id"), where + ".id");
        bus.name = as_string(require_key(b, where, "name"), where + ".name");
        bus.is_slack = as_bool(require_key(b, where, "is_slack"), where + ".is_slack");
        bus.base_load_mw = as_number(require_key(b, where, "base_load_mw"), where + ".base_load_mw");
        grid.buses.push_back(bus);
    }

    const json& lines = as_array(require_key(doc, "top level", "lines"), "lines");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = "lines[" + std::to_string(i) + "]";
        const json& l = lines[i];
        if (!l.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(l, where, {"id", "from", "to", "r_pu", "x_pu", "limit_mw", "reward_weight"});
        Line line;
        line.id = as_int(require_key(l, where, "id"), where + ".id");
        line.from_bus = as_int(require_key(l, where, "from"), where + ".from");
        line.to_bus = as_int(require_key(l, where, "to"), where + ".to");
        line.resistance_pu = as_number(require_key(l, where, "r_pu"), where + ".r_pu");
        line.reactance_pu = as_number(require_key(l, where, "x_pu"), where + ".x_pu");
        line.flow_limit_mw = as_number(require_key(l, where, "limit_mw"), where + ".limit_mw");
        line.reward_weight = as_number(require_key(l, where, "reward_weight"), where + ".reward_weight");
        grid.lines.push_back(line);
    }

    const json& gens = as_array(require_key(doc, "top level", "generators"), "generators");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string where = "generators[" + std::to_string(i) + "]";
        const json& g = gens[i];
        if (!g.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(g, where, {"id", "bus", "bid", "p_min", "p_max"});
        Generator gen;
        gen.id = as_int(require_key(g, where, "id"), where + ".id");
        gen.bus = as_int(require_key(g, where, "bus"), where + ".bus");
        gen.bid_per_mwh = as_number(require_key(g, where, "bid"), where + ".bid");
        gen.p_min_mw = as_number(require_key(g, where, "p_min"), where + ".p_min");
        gen.p_max_mw = as_number(require_key(g, where, "p_max"), where + ".p_max");
        grid.generators.push_back(gen);
    }

    const json& devices = as_array(require_key(doc, "top level", "devices"), "devices");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const std::string where = "devices[" + std::to_string(i) + "]";
        const json& d = devices[i];
        if (!d.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(d, where, {"id", "name", "measured"});
        Device dev;
        dev.id = as_int(require_key(d, where, "id"), where + ".id");
        dev.name = as_string(require_key(d, where, "name"), where + ".name");
        const json& measured = as_array(require_key(d, where, "measured"), where + ".measured");
        for (std::size_t k = 0; k < measured.size(); ++k) {
            dev.measured.push_back(
                parse_measurement(measured[k], where + ".measured[" + std::to_string(k) + "]"));
        }
        grid.devices.push_back(dev);
    }

    resolve_references(grid);

    auto diagnostics = validate(grid);
    if (!diagnostics.empty()) {
        std::ostringstream msg;
        msg << "grid failed validation:";
        for (const auto& d : diagnostics) msg << " [" << d.code << "] " << d.message << ";";
        throw ValidationError(msg.str());
    }
    return grid;
}

GridModel load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open grid file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_grid(buf.str());
}

std::string serialize_grid(const GridModel& grid) {
    json doc;
    doc["base_mva"] = grid.base_mva;
    doc["buses"] = json::array();
    for (const auto& b : grid.buses) {
        doc["buses"].push_back({{"id", b.id},
                                {"name", b.name},
                                {"is_slack", b.is_slack},
                                {"base_load_mw", b.base_load_mw}});
    }
    doc["lines"] = json::array();
    for (const auto& l : grid.lines) {
        doc["lines"].push_back({{"id", l.id},
                                {"from", l.from_bus},
                                {"to", l.to_bus},
                                {"r_pu", l.resistance_pu},
                                {"x_pu", l.reactance_pu},
                                {"limit_mw", l.flow_limit_mw},
                                {"reward_weight", l.reward_weight}});
    }
    doc["generators"] = json::array();
    for (const auto& g : grid.generators) {
        doc["generators"].push_back({{"id", g.id},
                                     {"bus", g.bus},
                                     {"bid", g.bid_per_mwh},
                                     {"p_min", g.p_min_mw},
                                     {"p_max", g.p_max_mw}});
    }
    doc["devices"] = json::array();
    for (const auto& d : grid.devices) {
        json measured = json::array();
        for (const auto& m : d.measured) {
            switch (m.kind) {
                case MeasurementKind::BusVoltage:
                    measured.push_back({{"kind", "bus_voltage"}, {"bus", m.bus}});
                    break;
                case MeasurementKind::LineFlow:
                    measured.push_back({{"kind", "line_flow"},
                                        {"line", m.line},
                                        {"end", m.end == LineEnd::From ? "from" : "to"}});
                    break;
                case MeasurementKind::BusInjection:
                    measured.push_back({{"kind", "bus_injection"}, {"bus", m.bus}});
                    break;
            }
        }
        doc["devices"].push_back({{"id", d.id}, {"name", d.name}, {"measured", measured}});
    }
    return doc.dump(2) + "\n";
}

std::vector<Diagnostic> validate(const GridModel& grid) {
    std::vector<Diagnostic> out;
    auto report = [&out](const std::string& code, const std::string& msg) {
        out.push_back({code, msg});
    };

    if (!(grid.base_mva > 0.0)) {
        report("NonPositiveBaseMva", "base_mva must be > 0");
    }

    // Bus invariants: unique contiguous ids from 0, exactly one slack.
    std::unordered_set<int> bus_ids;
    int slack_count = 0;
    for (const auto& b : grid.buses) {
        if (!bus_ids.insert(b.id).second) {
            report("DuplicateBusId", "bus id " + std::to_string(b.id) + " appears twice");
        }
        if (b.is_slack) ++slack_count;
        if (b.base_load_mw < 0.0) {
            report("NegativeBaseLoad", "bus " + std::to_string(b.id) + " has negative base load");
        }
    }
    const int n = grid.num_buses();
    bool contiguous = static_cast<int>(bus_ids.size()) == n;
    for (int i = 0; i < n && contiguous; ++i) contiguous = bus_ids.count(i) > 0;
    if (!contiguous) {
        report("NonContiguousBusIds", "bus ids must be 0.." + std::to_string(n - 1));
    }
    if (slack_count == 0) {
        report("NoSlack", "no slack bus defined");
    } else if (slack_count > 1) {
        report("MultipleSlack", std::to_string(slack_count) + " slack buses defined");
    }

    std::unordered_set<int> line_ids;
    for (const auto& l : grid.lines) {
        const std::string tag = "line " + std::to_string(l.id);
        if (!line_ids.insert(l.id).second) {
            report("DuplicateLineId", tag + " id appears twice");
        }
        if (l.from_bus == l.to_bus) {
            report("SelfLoopLine", tag + " connects a bus to itself");
        }
        if (l.reactance_pu == 0.0) {
            report("ZeroReactance", tag + " has zero reactance");
        }
        if (!(l.flow_limit_mw > 0.0)) {
            report("NonPositiveFlowLimit", tag + " needs flow_limit_mw > 0");
        }
        if (l.reward_weight < 0.0) {
            report("NegativeRewardWeight", tag + " has negative reward weight");
        }
        if (!bus_ids.count(l.from_bus) || !bus_ids.count(l.to_bus)) {
            report("DanglingBusRef", tag + " references a nonexistent bus");
        }
    }

    std::unordered_set<int> gen_ids;
    for (const auto& g : grid.generators) {
        const std::string tag = "generator " + std::to_string(g.id);
        if (!gen_ids.insert(g.id).second) {
            report("DuplicateGeneratorId", tag + " id appears twice");
        }
        if (g.p_min_mw > g.p_max_mw) {
            report("GenLimitsInverted", tag + " has p_min > p_max");
        }
        if (g.bid_per_mwh < 0.0) {
            report("NegativeBid", tag + " has negative bid");
        }
        if (!bus_ids.count(g.bus)) {
            report("DanglingBusRef", tag + " references a nonexistent bus");
        }
    }

    std::unordered_set<int> device_ids;
    for (const auto& d : grid.devices) {
        const std::string tag = "device " + std::to_string(d.id);
        if (!device_ids.insert(d.id).second) {
            report("DuplicateDeviceId", tag + " id appears twice");
        }
        for (const auto& m : d.measured) {
            if (m.kind == MeasurementKind::LineFlow) {
                if (!line_ids.count(m.line)) {
                    report("DanglingLineRef", tag + " measures a nonexistent line");
                }
            } else if (!bus_ids.count(m.bus)) {
                report("DanglingBusRef", tag + " measures a nonexistent bus");
            }
        }
    }

    // Connectivity over in-service lines (all lines are in service).
    if (n > 0 && contiguous) {
        std::vector<std::vector<int>> adj(n);
        for (const auto& l : grid.lines) {
            if (l.from_bus != l.to_bus && bus_ids.count(l.from_bus) && bus_ids.count(l.to_bus)) {
                adj[l.from_bus].push_back(l.to_bus);
                adj[l.to_bus].push_back(l.from_bus);
            }
        }
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int visited = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++visited;
                    q.push(v);
                }
            }
        }
        if (visited != n) {
            report("Disconnected", "grid is not a connected graph");
        }
    }

    return out;
}

Eigen::MatrixXd susceptance_matrix(const GridModel& grid) {
    const int n = grid.num_buses();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (const auto& l : grid.lines) {
        if (l.reactance_pu == 0.0) {
            throw ValidationError("line " + std::to_string(l.id) + " has zero reactance");
        }
        const double y = 1.0 / l.reactance_pu;
        b(l.from_bus, l.to_bus) -= y;
        b(l.to_bus, l.from_bus) -= y;
        b(l.from_bus, l.from_bus) += y;
        b(l.to_bus, l.to_bus) += y;
    }
    return b;
}

bool operator==(const Bus& a, const Bus& b) {
    return a.id == b.id && a.name == b.name && a.is_slack == b.is_slack &&
           a.base_load_mw == b.base_load_mw;
}

bool operator==(const Line& a, const Line& b) {
    return a.id == b.id && a.from_bus == b.from_bus && a.to_bus == b.to_bus &&
           a.resistance_pu == b.resistance_pu && a.reactance_pu == b.reactance_pu &&
           a.flow_limit_mw == b.flow_limit_mw && a.reward_weight == b.reward_weight;
}

bool operator==(const Generator& a, const Generator& b) {
    return a.id == b.id && a.bus == b.bus && a.bid_per_mwh == b.bid_per_mwh &&
           a.p_min_mw == b.p_min_mw && a.p_max_mw == b.p_max_mw;
}

bool operator==(const MeasurementDescriptor& a, const MeasurementDescriptor& b) {
    return a.kind == b.kind && a.bus == b.bus && a.line == b.line &&
           (a.kind != MeasurementKind::LineFlow || a.end == b.end);
}

bool operator==(const Device& a, const Device& b) {
    return a.id == b.id && a.name == b.name && a.measured == b.measured;
}

bool operator==(const GridModel& a, const GridModel& b) {
    return a.base_mva == b.base_mva && a.buses == b.buses && a.lines == b.lines &&
           a.generators == b.generators && a.devices == b.devices;
}

}  // namespace gridmdp
