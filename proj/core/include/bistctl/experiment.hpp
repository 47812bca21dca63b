// Experiment orchestration behind the command-line tool: a typed experiment
// configuration, its JSON loading pipeline (built-in defaults <- config file
// <- key=value overrides, unknown keys rejected), the six experiment kinds,
// and the CSV/JSON output emitters.
//
// JSON stays an implementation detail of this module; the public surface is
// the typed structs below plus strings.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bistctl/analysis.hpp"
#include "bistctl/control.hpp"
#include "bistctl/geometry.hpp"
#include "bistctl/kinetics.hpp"
#include "bistctl/solver.hpp"

namespace bistctl::cli {

enum class Kind { simulate, plan, threshold, sweep, energy, figures };

const char* to_string(Kind kind);

// Parses a kind name ("simulate", ...). Throws ConfigError on anything else.
Kind parse_kind(const std::string& name);

// Initial profile selector. `alpha` and `radius` left unset mean "derive
// from the kinetics": the default plateau level and its sufficient support
// radius.
struct InitialSpec {
    enum class Shape { zero, constant, trapezoid, plateau };

    Shape shape = Shape::zero;
    double value = 0.0;            // level of the `constant` shape
    std::optional<double> alpha;   // plateau level of trapezoid/plateau shapes
    std::optional<double> radius;  // plateau radius of trapezoid/plateau shapes
    double epsilon = 0.25;         // ramp width factor of the plateau shape
};

// What the `plan` kind is given and what it should derive.
struct PlanRequest {
    enum class Given { mu, horizon, radius };

    Given given = Given::mu;
    double value = 0.5;
    std::optional<double> alpha;
    std::optional<double> alpha_bar;
    bool conservative = false; // radius-given plans: use the 3x safe gain
};

struct ThresholdSpec {
    analysis::Axis axis = analysis::Axis::mu;
    double lo = 0.05;
    double hi = 1.0;
    double tol = 1e-2;
    analysis::Policy policy = analysis::Policy::strict;
};

struct SweepSpec {
    analysis::Axis axis = analysis::Axis::mu;
    std::vector<double> values;
    int threads = 0; // 0: one per hardware thread (capped at the value count)
};

// The fully-resolved experiment description. Default-constructed, it equals
// the built-in defaults document (the same values `load_config` starts
// from): Wolbachia kinetics with s_f=0.1, s_h=0.3, delta=1, death_rate=1,
// sigma=1 on the line [-20,20] with h=dt=0.05, t_max=50, and the feedback
// control mu=0.5, T=10 on Omega=[-1,1].
struct ExperimentConfig {
    Kind kind = Kind::simulate;
    kinetics::BiologicalParams bio = kinetics::BiologicalParams::defaults();
    Geometry geom = Geometry::cartesian();
    Grid grid = Grid::with_spacing(-20.0, 20.0, 0.05);
    solver::SolverConfig solver_cfg;
    std::optional<control::ControlConfig> control =
        control::ControlConfig(0.5, 10.0, -1.0, 1.0);
    InitialSpec initial;
    PlanRequest plan;
    ThresholdSpec threshold;
    SweepSpec sweep;
    double front_level = 0.5;
    double speed_window = 20.0; // trailing window for the wave-speed fit
};

// Loads a configuration: built-in defaults, overlaid with the JSON config
// file (when given), overlaid with dotted key=value overrides in order
// ("control.mu=0.7", "solver.t_max=300", "control=null"; values are parsed
// as JSON, bare words as strings). The subcommand's kind, when given, beats
// both. Unknown keys anywhere raise ConfigError naming the dotted path.
ExperimentConfig load_config(const std::optional<std::string>& config_path,
                             const std::vector<std::string>& overrides,
                             std::optional<Kind> kind_override = std::nullopt);

// The resolved configuration as a JSON document (the object summary.json
// embeds under "config"). Saved to a file and re-loaded, it reproduces the
// same configuration.
std::string resolved_config_json(const ExperimentConfig& cfg);

// Builds the initial profile selected by cfg.initial on cfg.grid.
Field build_initial(const ExperimentConfig& cfg, const kinetics::Kinetics& k);

struct RunOutcome {
    Kind kind;
    std::string out_dir;
    std::string headline; // one line for the terminal: verdict, plan, ...
};

// Runs one experiment and writes its outputs under out_dir (created if
// missing): snapshots.csv / control.csv / front.csv / energy.csv as
// applicable, and always summary.json embedding the resolved config.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Writes the snapshot table: header `x,t0,t1,...`, then one row per grid
// node, every value with 9 significant digits. The times behind the t0...
// labels are recorded in summary.json. Throws InvalidParams when there is
// nothing to write.
void emit_snapshots(const solver::SimResult& result, const std::string& path);

// Same table format for an arbitrary snapshot family (used for control.csv).
void emit_field_table(const std::vector<Field>& snapshots, const Grid& grid,
                      const std::string& path);

// Two-column CSV (header `col0,col1`) for front and energy traces.
void emit_pairs(const std::vector<std::pair<double, double>>& rows,
                const std::string& col0, const std::string& col1,
                const std::string& path);

} // namespace bistctl::cli
