#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gridmdp {

struct Bus {
    int id = 0;
    std::string name;
    bool is_slack = false;
    double base_load_mw = 0.0;
};

struct Line {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double resistance_pu = 0.0;
    double reactance_pu = 0.0;
    double flow_limit_mw = 0.0;   // P^M
    double reward_weight = 0.0;   // K
};

struct Generator {
    int id = 0;
    int bus = 0;
    double bid_per_mwh = 0.0;
    double p_min_mw = 0.0;
    double p_max_mw = 0.0;
};

enum class MeasurementKind { BusVoltage, LineFlow, BusInjection };
enum class LineEnd { From, To };

struct MeasurementDescriptor {
    MeasurementKind kind = MeasurementKind::BusVoltage;
    int bus = -1;               // BusVoltage / BusInjection
    int line = -1;              // LineFlow
    LineEnd end = LineEnd::From;
};

struct Device {
    int id = 0;
    std::string name;
    std::vector<MeasurementDescriptor> measured;
};

// The physical network plus measuring-device placement. Immutable once
// loaded; all operations below are pure functions of their inputs.
struct GridModel {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    std::vector<Device> devices;

    int num_buses() const { return static_cast<int>(buses.size()); }
    int num_lines() const { return static_cast<int>(lines.size()); }
    int num_devices() const { return static_cast<int>(devices.size()); }

    int slack_bus() const;                       // -1 if none/ambiguous
    std::vector<int> lines_at(int bus) const;    // incident line ids
    double total_base_load() const;
};

struct Diagnostic {
    std::string code;     // machine-readable, e.g. "MultipleSlack"
    std::string message;  // human-readable detail
};

// Parses and fully validates a grid document. Throws ParseError on schema
// violations (naming the offending field), ReferenceError on dangling
// bus/line ids and ValidationError when validate() would report anything.
GridModel load_grid(const std::string& document);
GridModel load_grid_file(const std::string& path);

// Inverse of load_grid for round-tripping grids to disk.
std::string serialize_grid(const GridModel& grid);

// Checks every model invariant; returns one diagnostic per violation.
// An empty result means the grid is valid.
std::vector<Diagnostic> validate(const GridModel& grid);

// DC power-flow B matrix in per-unit: off-diagonal B(i,j) is the negated
// sum of 1/x over lines i-j, the diagonal makes each row sum to zero.
Eigen::MatrixXd susceptance_matrix(const GridModel& grid);

bool operator==(const Bus& a, const Bus& b);
bool operator==(const Line& a, const Line& b);
bool operator==(const Generator& a, const Generator& b);
bool operator==(const MeasurementDescriptor& a, const MeasurementDescriptor& b);
bool operator==(const Device& a, const Device& b);
bool operator==(const GridModel& a, const GridModel& b);

}  // namespace gridmdp
