// bistctl — command-line front end for the invasion-control toolkit.
//
// One subcommand per experiment kind; a JSON config file plus dotted
// key=value overrides select everything else. Outputs land in --out as
// CSV tables and a summary.json embedding the fully-resolved configuration.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bistctl/errors.hpp"
#include "bistctl/experiment.hpp"

namespace cli = bistctl::cli;

namespace {

struct SharedOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    std::optional<double> mu;
    std::optional<double> horizon;
    std::vector<double> omega;
};

void add_common_options(CLI::App* cmd, SharedOptions& shared) {
    cmd->add_option("--config", shared.config_path, "JSON config file");
    cmd->add_option("--out", shared.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--mu", shared.mu, "feedback gain (overrides control.mu)");
    cmd->add_option("--horizon", shared.horizon,
                    "control horizon T (overrides control.horizon)");
    cmd->add_option("--omega", shared.omega,
                    "release interval endpoints a b (overrides control.omega)")
        ->expected(2);
    cmd->add_option("--set", shared.sets,
                    "dotted key=value config override, repeatable "
                    "(e.g. --set solver.t_max=300)");
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and planning toolkit for controlled bistable "
                 "reaction-diffusion invasion"};
    app.require_subcommand(1);

    SharedOptions shared;
    std::vector<std::pair<CLI::App*, cli::Kind>> commands = {
        {app.add_subcommand("simulate", "integrate one controlled run"),
         cli::Kind::simulate},
        {app.add_subcommand("plan", "derive a sufficient (gain, horizon, radius)"),
         cli::Kind::plan},
        {app.add_subcommand("threshold",
                            "bisect for the critical control parameter"),
         cli::Kind::threshold},
        {app.add_subcommand("sweep", "run a family of simulations in parallel"),
         cli::Kind::sweep},
        {app.add_subcommand("energy", "uncontrolled run with its energy trace"),
         cli::Kind::energy},
        {app.add_subcommand("figures", "the four canonical control scenarios"),
         cli::Kind::figures},
    };
    for (auto& [cmd, kind] : commands)
        add_common_options(cmd, shared);

    CLI11_PARSE(app, argc, argv);

    cli::Kind kind = cli::Kind::simulate;
    for (const auto& [cmd, k] : commands)
        if (cmd->parsed())
            kind = k;

    try {
        // Dedicated flags are applied after --set entries, so they win.
        // For the plan kind, --mu / --horizon name the planned quantity;
        // everywhere else they override the control block.
        std::vector<std::string> overrides = shared.sets;
        if (shared.mu) {
            if (kind == cli::Kind::plan) {
                overrides.push_back("plan.given=mu");
                overrides.push_back("plan.value=" + fmt_full(*shared.mu));
            } else {
                overrides.push_back("control.mu=" + fmt_full(*shared.mu));
            }
        }
        if (shared.horizon) {
            if (kind == cli::Kind::plan) {
                overrides.push_back("plan.given=horizon");
                overrides.push_back("plan.value=" + fmt_full(*shared.horizon));
            } else {
                overrides.push_back("control.horizon=" + fmt_full(*shared.horizon));
            }
        }
        if (!shared.omega.empty())
            overrides.push_back("control.omega=[" + fmt_full(shared.omega[0]) +
                                "," + fmt_full(shared.omega[1]) + "]");

        std::optional<std::string> config_path;
        if (!shared.config_path.empty())
            config_path = shared.config_path;

        const auto cfg = cli::load_config(config_path, overrides, kind);
        const auto outcome = cli::run_experiment(cfg, shared.out_dir);

        std::cout << cli::to_string(outcome.kind) << ": " << outcome.headline
                  << "\n";
        std::cout << "outputs: " << outcome.out_dir << "\n";
        return 0;
    } catch (const bistctl::Error& e) {
        const nlohmann::ordered_json err{{"error", e.code()},
                                         {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        const nlohmann::ordered_json err{{"error", "Internal"},
                                         {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
