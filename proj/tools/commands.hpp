#pragma once

#include <string>

#include "json.hpp"

#include "ddkp/report.hpp"

namespace ddkp::cli {

// Flag overrides applied on top of the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
    std::optional<double> tol_scale;
};

// Built-in defaults; the shipped config files mirror these.
nlohmann::json default_config(const std::string& command);

// Runs one subcommand on a resolved config, writing artifacts under out_dir.
// Throws InvalidArgument/OutOfRange for bad configs (exit code 2); returns a
// report whose pass() decides between exit codes 0 and 1.
Report run_command(const std::string& command, nlohmann::json config,
                   const Overrides& overrides, const std::string& out_dir);

} // namespace ddkp::cli
