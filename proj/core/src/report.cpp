#include "ddkp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "ddkp/errors.hpp"

namespace ddkp {

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

void Report::sort_checks() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

std::string report_to_json(const Report& rep, bool with_timestamp) {
    nlohmann::json j;
    j["schema_version"] = rep.schema_version;
    j["command"] = rep.command;
    if (!rep.config_json.empty())
        j["config"] = nlohmann::json::parse(rep.config_json);
    j["environment"] = {{"compiler", __VERSION__}, {"toolkit", "ddkp 0.1.0"}};
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp"] =
            static_cast<long long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                       now.time_since_epoch())
                                       .count());
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const CheckResult& c : rep.checks) {
        nlohmann::json r;
        r["name"] = c.name;
        r["anchor"] = c.anchor;
        r["statement"] = c.statement;
        r["samples"] = c.samples;
        r["value"] = c.value;
        r["tolerance"] = c.tolerance;
        if (c.lower_bound) r["lower_bound"] = *c.lower_bound;
        r["pass"] = c.pass;
        rows.push_back(std::move(r));
    }
    j["checks"] = std::move(rows);
    nlohmann::json arts = nlohmann::json::object();
    for (const auto& [name, path] : rep.artifacts) arts[name] = path;
    j["artifacts"] = std::move(arts);
    j["pass"] = rep.pass();
    return j.dump(2) + "\n";
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

} // namespace ddkp
