// Command-line front end: derive | check | tabulate | simulate.
//
// Reports go to stdout (or --out); diagnostics go to stderr. Exit codes:
// 0 success/feasible, 1 usage or config error, 2 infeasible/unsuitable,
// 3 simulation confidence bound violated.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "locreq/commands.hpp"
#include "locreq/config.hpp"
#include "locreq/report.hpp"
#include "locreq/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string format = "json";
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the project config (JSON)")
        ->required();
    cmd->add_option("--format", args.format, "Report format: json, csv, or markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown"}));
    cmd->add_option("--out", args.out_path, "Write the report to this file instead of stdout");
    cmd->add_option("--seed", args.seed, "Override simulation.seed");
    cmd->add_option("--trials", args.trials, "Override simulation.trials");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) locreq::fail(locreq::Errc::config, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

locreq::ProjectConfig load_config(const CommonArgs& args) {
    locreq::ProjectConfig cfg = locreq::parse_config(read_file(args.config_path));
    if (args.seed || args.trials) {
        if (!cfg.simulation) cfg.simulation = locreq::SimulationFragment{};
        if (args.seed) cfg.simulation->seed = *args.seed;
        if (args.trials) {
            if (*args.trials < 1)
                locreq::fail(locreq::Errc::config, "--trials: at least one trial required");
            cfg.simulation->trials = *args.trials;
        }
    }
    return cfg;
}

int emit(const locreq::Report& report, const CommonArgs& args, int exit_code) {
    const std::string rendered =
        locreq::render_report(report, locreq::report_format_from_name(args.format));
    if (args.out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out)
            locreq::fail(locreq::Errc::config, "cannot write output file '" + args.out_path + "'");
        out << rendered;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location-data requirements: derivation, suitability checking, and "
                 "Monte-Carlo validation for presence-detection functions"};
    app.set_version_flag("--version", std::string(locreq::kToolName) + " " + locreq::kToolVersion);
    app.require_subcommand(1);

    CommonArgs derive_args, check_args, tabulate_args, simulate_args;
    add_common(app.add_subcommand("derive", "Derive accuracy/update-rate/latency budgets"),
               derive_args);
    add_common(app.add_subcommand("check", "Prove or refute the suitability of candidate systems"),
               check_args);
    add_common(app.add_subcommand("tabulate", "Budgets over a grid of time gaps"), tabulate_args);
    add_common(app.add_subcommand("simulate",
                                  "Boundary Monte-Carlo experiment against the derived budgets"),
               simulate_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // CLI11 prints usage; nonzero on error
    }

    try {
        if (app.got_subcommand("derive"))
            return emit(locreq::cmd_derive(load_config(derive_args)), derive_args, 0);
        if (app.got_subcommand("check")) {
            auto result = locreq::cmd_check(load_config(check_args));
            return emit(result.report, check_args, result.exit_code);
        }
        if (app.got_subcommand("tabulate"))
            return emit(locreq::cmd_tabulate(load_config(tabulate_args)), tabulate_args, 0);
        if (app.got_subcommand("simulate")) {
            auto result = locreq::cmd_simulate(load_config(simulate_args));
            return emit(result.report, simulate_args, result.exit_code);
        }
    } catch (const locreq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.infeasible() ? locreq::kExitInfeasible : locreq::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return locreq::kExitConfigError;
    }
    return locreq::kExitConfigError;
}
