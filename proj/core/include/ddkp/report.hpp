#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ddkp {

// One row of a machine-readable report: a named check with its residual (or
// measured ratio), the bound(s) it must satisfy, and a short anchor naming
// the identity it exercises.
struct CheckResult {
    std::string name;
    std::string anchor;
    std::string statement;
    int samples = 0;
    double value = 0.0;
    double tolerance = 0.0;
    std::optional<double> lower_bound; // set for two-sided (ratio) checks
    bool pass = false;
};

inline CheckResult make_check(std::string name, std::string anchor, std::string statement,
                              int samples, double value, double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.statement = std::move(statement);
    c.samples = samples;
    c.value = value;
    c.tolerance = tolerance;
    c.pass = value < tolerance;
    return c;
}

inline CheckResult make_range_check(std::string name, std::string anchor,
                                    std::string statement, int samples, double value,
                                    double lo, double hi) {
    CheckResult c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.statement = std::move(statement);
    c.samples = samples;
    c.value = value;
    c.tolerance = hi;
    c.lower_bound = lo;
    c.pass = (value >= lo && value <= hi);
    return c;
}

struct Report {
    std::string command;
    int schema_version = 1;
    std::string config_json; // resolved configuration, serialized JSON
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> artifacts; // name -> path

    bool pass() const;
    void sort_checks(); // deterministic order by name
};

// Serialized report (sorted keys, 2-space indent). The timestamp field is
// informational and excluded when with_timestamp is false.
std::string report_to_json(const Report& rep, bool with_timestamp = true);

// Full round-trip precision (17 significant digits, scientific).
std::string csv_number(double v);

void write_text_file(const std::string& path, const std::string& content);

} // namespace ddkp
