#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "ddkp/errors.hpp"

namespace {

int run(const std::string& command, const std::string& config_path,
        const ddkp::cli::Overrides& overrides, const std::string& out_dir, bool quiet) {
    nlohmann::json config;
    if (config_path.empty()) {
        config = ddkp::cli::default_config(command);
    } else {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return 2;
        }
        try {
            config = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 2;
        }
    }

    ddkp::Report rep;
    try {
        rep = ddkp::cli::run_command(command, std::move(config), overrides, out_dir);
    } catch (const ddkp::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ddkp::OutOfRange& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ddkp::Error& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }

    const std::string report_path =
        (std::filesystem::path(out_dir) / (command + "_report.json")).string();
    ddkp::write_text_file(report_path, ddkp::report_to_json(rep));

    if (!quiet) {
        for (const ddkp::CheckResult& c : rep.checks) {
            if (c.lower_bound)
                std::printf("[%s] %-36s value %.3e in [%g, %g]\n", c.pass ? "PASS" : "FAIL",
                            c.name.c_str(), c.value, *c.lower_bound, c.tolerance);
            else
                std::printf("[%s] %-36s max residual %.3e (tol %.1e, %d samples)\n",
                            c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance,
                            c.samples);
        }
        std::printf("%s: %s -> %s\n", command.c_str(),
                    rep.pass() ? "all checks passed" : "CHECKS FAILED", report_path.c_str());
    }
    return rep.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ddkp: numerical toolkit for the elliptic form of the dispersionless DKP "
                 "hierarchy (theta functions, elliptic Loewner flows, hodograph solver)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ddkp 0.1.0");

    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    ddkp::cli::Overrides overrides;
    std::uint64_t seed_flag = 0;
    int steps_flag = 0;
    double tol_scale_flag = 0.0;

    if (const char* env = std::getenv("DDKP_OUT_DIR")) out_dir = env;
    if (out_dir.empty()) out_dir = ".";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--seed", seed_flag, "override the RNG seed")
            ->each([&](const std::string&) { overrides.seed = seed_flag; });
        cmd->add_option("--steps", steps_flag, "override the integrator step count")
            ->each([&](const std::string&) { overrides.steps = steps_flag; });
        cmd->add_option("--tol-scale", tol_scale_flag, "scale all tolerances")
            ->each([&](const std::string&) { overrides.tol_scale = tol_scale_flag; });
        cmd->add_option("--out", out_dir, "output directory (default $DDKP_OUT_DIR or .)");
        cmd->add_flag("--quiet", quiet, "suppress per-check output");
    };

    for (const char* name : {"identities", "curve", "evolve", "painleve", "hodograph"})
        add_common(app.add_subcommand(
            name, std::string("run the ") + name + " checks and write a JSON report"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    return run(app.get_subcommands().front()->get_name(), config_path, overrides, out_dir,
               quiet);
}
