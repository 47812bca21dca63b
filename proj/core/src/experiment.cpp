#include "bistctl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <thread>
#include <utility>

#include "json.hpp"

#include "bistctl/propagule.hpp"

namespace fs = std::filesystem;

namespace bistctl::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- strings

const char* mode_name(Geometry::Mode m) {
    return m == Geometry::Mode::radial ? "radial" : "cartesian";
}

const char* boundary_name(solver::Boundary b) {
    return b == solver::Boundary::dirichlet0 ? "dirichlet0" : "neumann";
}

const char* shape_name(InitialSpec::Shape s) {
    switch (s) {
    case InitialSpec::Shape::zero: return "zero";
    case InitialSpec::Shape::constant: return "constant";
    case InitialSpec::Shape::trapezoid: return "trapezoid";
    case InitialSpec::Shape::plateau: return "plateau";
    }
    return "zero";
}

const char* given_name(PlanRequest::Given g) {
    switch (g) {
    case PlanRequest::Given::mu: return "mu";
    case PlanRequest::Given::horizon: return "horizon";
    case PlanRequest::Given::radius: return "radius";
    }
    return "mu";
}

const char* policy_name(analysis::Policy p) {
    return p == analysis::Policy::pessimistic ? "pessimistic" : "strict";
}

const char* rule_name(control::PlanRule r) {
    switch (r) {
    case control::PlanRule::gain: return "gain";
    case control::PlanRule::time: return "time";
    case control::PlanRule::domain_literal: return "domain_literal";
    case control::PlanRule::domain_conservative: return "domain_conservative";
    }
    return "gain";
}

template <class E>
E parse_choice(const ordered_json& j, const std::string& path,
               std::initializer_list<std::pair<const char*, E>> options) {
    std::string valid;
    for (const auto& [name, value] : options) {
        if (j.is_string() && j.get<std::string>() == name)
            return value;
        if (!valid.empty())
            valid += ", ";
        valid += name;
    }
    throw ConfigError("config: " + path + " must be one of: " + valid);
}

// ------------------------------------------------------ typed extraction

std::string join_path(const std::string& scope, const std::string& key) {
    return scope.empty() ? key : scope + "." + key;
}

const ordered_json& section(const ordered_json& doc, const char* key) {
    const auto& j = doc.at(key);
    if (!j.is_object())
        throw ConfigError(std::string("config: ") + key + " must be an object");
    return j;
}

double num_at(const ordered_json& obj, const char* key, const std::string& scope) {
    const auto& j = obj.at(key);
    if (!j.is_number())
        throw ConfigError("config: " + join_path(scope, key) + " must be a number");
    return j.get<double>();
}

int int_at(const ordered_json& obj, const char* key, const std::string& scope) {
    const auto& j = obj.at(key);
    if (!j.is_number_integer())
        throw ConfigError("config: " + join_path(scope, key) + " must be an integer");
    return j.get<int>();
}

bool bool_at(const ordered_json& obj, const char* key, const std::string& scope) {
    const auto& j = obj.at(key);
    if (!j.is_boolean())
        throw ConfigError("config: " + join_path(scope, key) + " must be true or false");
    return j.get<bool>();
}

std::optional<double> opt_num_at(const ordered_json& obj, const char* key,
                                 const std::string& scope) {
    const auto& j = obj.at(key);
    if (j.is_null())
        return std::nullopt;
    if (!j.is_number())
        throw ConfigError("config: " + join_path(scope, key) +
                          " must be a number or null");
    return j.get<double>();
}

ordered_json opt_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

// ------------------------------------------------- document <-> typed cfg

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json doc;
    doc["kind"] = to_string(cfg.kind);
    doc["bio"] = {{"s_f", cfg.bio.s_f},
                  {"s_h", cfg.bio.s_h},
                  {"delta", cfg.bio.delta},
                  {"death_rate", cfg.bio.death_rate},
                  {"sigma", cfg.bio.sigma}};
    doc["geometry"] = {{"mode", mode_name(cfg.geom.mode)}, {"dim", cfg.geom.dim}};
    doc["grid"] = {{"x_min", cfg.grid.x_min},
                   {"x_max", cfg.grid.x_max},
                   {"h", cfg.grid.h()}};
    doc["solver"] = {{"dt", cfg.solver_cfg.dt},
                     {"t_max", cfg.solver_cfg.t_max},
                     {"snapshot_stride", cfg.solver_cfg.snapshot_stride},
                     {"boundary", boundary_name(cfg.solver_cfg.boundary)},
                     {"record_energy", cfg.solver_cfg.record_energy}};
    if (cfg.control) {
        ordered_json c;
        c["mu"] = cfg.control->mu;
        c["horizon"] = cfg.control->horizon;
        if (cfg.geom.is_radial()) {
            c["omega"] = nullptr;
            c["omega_radius"] = cfg.control->omega_hi;
        } else {
            c["omega"] = ordered_json::array(
                {cfg.control->omega_lo, cfg.control->omega_hi});
            c["omega_radius"] = nullptr;
        }
        doc["control"] = std::move(c);
    } else {
        doc["control"] = nullptr;
    }
    doc["initial"] = {{"shape", shape_name(cfg.initial.shape)},
                      {"value", cfg.initial.value},
                      {"alpha", opt_json(cfg.initial.alpha)},
                      {"radius", opt_json(cfg.initial.radius)},
                      {"epsilon", cfg.initial.epsilon}};
    doc["plan"] = {{"given", given_name(cfg.plan.given)},
                   {"value", cfg.plan.value},
                   {"alpha", opt_json(cfg.plan.alpha)},
                   {"alpha_bar", opt_json(cfg.plan.alpha_bar)},
                   {"conservative", cfg.plan.conservative}};
    doc["threshold"] = {{"axis", analysis::to_string(cfg.threshold.axis)},
                        {"lo", cfg.threshold.lo},
                        {"hi", cfg.threshold.hi},
                        {"tol", cfg.threshold.tol},
                        {"policy", policy_name(cfg.threshold.policy)}};
    doc["sweep"] = {{"axis", analysis::to_string(cfg.sweep.axis)},
                    {"values", cfg.sweep.values},
                    {"threads", cfg.sweep.threads}};
    doc["front_level"] = cfg.front_level;
    doc["speed_window"] = cfg.speed_window;
    return doc;
}

ordered_json default_config() { return config_to_json(ExperimentConfig{}); }

// Every key in `user` must exist at the same place in `defaults`; objects
// recurse, anything else (scalars, arrays, null) replaces the subtree.
void check_keys(const ordered_json& user, const ordered_json& defaults,
                const std::string& scope) {
    if (!user.is_object())
        return;
    if (!defaults.is_object())
        throw ConfigError("config: " + scope + " does not take nested keys");
    for (const auto& [key, value] : user.items()) {
        if (!defaults.contains(key))
            throw ConfigError("unknown config key: " + join_path(scope, key));
        check_keys(value, defaults.at(key), join_path(scope, key));
    }
}

void deep_merge(ordered_json& base, const ordered_json& overlay) {
    if (!overlay.is_object() || !base.is_object()) {
        base = overlay;
        return;
    }
    for (const auto& [key, value] : overlay.items()) {
        if (base.contains(key))
            deep_merge(base[key], value);
        else
            base[key] = value;
    }
}

// One "a.b.c=value" override, merged into the user document. The value is
// parsed as JSON so numbers, booleans, arrays and null work; anything that
// does not parse is taken as a bare string (enum names, paths).
void apply_override(ordered_json& user, const std::string& entry) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value, got \"" + entry + "\"");
    const std::string key = entry.substr(0, eq);
    const std::string raw = entry.substr(eq + 1);

    ordered_json value;
    try {
        value = ordered_json::parse(raw);
    } catch (const ordered_json::parse_error&) {
        value = raw;
    }

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(key.substr(start));
            break;
        }
        parts.push_back(key.substr(start, dot - start));
        start = dot + 1;
    }
    ordered_json nested = std::move(value);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (it->empty())
            throw ConfigError("override key has an empty path segment: \"" + key +
                              "\"");
        ordered_json wrap;
        wrap[*it] = std::move(nested);
        nested = std::move(wrap);
    }
    deep_merge(user, nested);
}

ExperimentConfig extract_config(const ordered_json& doc) {
    ExperimentConfig cfg;

    const auto& kind_j = doc.at("kind");
    if (!kind_j.is_string())
        throw ConfigError("config: kind must be a string");
    cfg.kind = parse_kind(kind_j.get<std::string>());

    const auto& bio = section(doc, "bio");
    cfg.bio = kinetics::BiologicalParams(
        num_at(bio, "s_f", "bio"), num_at(bio, "s_h", "bio"),
        num_at(bio, "delta", "bio"), num_at(bio, "death_rate", "bio"),
        num_at(bio, "sigma", "bio"));

    const auto& geo = section(doc, "geometry");
    const auto mode = parse_choice<Geometry::Mode>(
        geo.at("mode"), "geometry.mode",
        {{"cartesian", Geometry::Mode::cartesian1d},
         {"radial", Geometry::Mode::radial}});
    const int dim = int_at(geo, "dim", "geometry");
    if (mode == Geometry::Mode::radial) {
        cfg.geom = Geometry::radial(dim);
    } else {
        if (dim != 1)
            throw ConfigError("config: geometry.dim must be 1 in cartesian mode");
        cfg.geom = Geometry::cartesian();
    }

    const auto& grid = section(doc, "grid");
    cfg.grid = Grid::with_spacing(num_at(grid, "x_min", "grid"),
                                  num_at(grid, "x_max", "grid"),
                                  num_at(grid, "h", "grid"));

    const auto& sol = section(doc, "solver");
    cfg.solver_cfg.dt = num_at(sol, "dt", "solver");
    cfg.solver_cfg.t_max = num_at(sol, "t_max", "solver");
    cfg.solver_cfg.snapshot_stride = int_at(sol, "snapshot_stride", "solver");
    cfg.solver_cfg.boundary = parse_choice<solver::Boundary>(
        sol.at("boundary"), "solver.boundary",
        {{"neumann", solver::Boundary::neumann},
         {"dirichlet0", solver::Boundary::dirichlet0}});
    cfg.solver_cfg.record_energy = bool_at(sol, "record_energy", "solver");

    const auto& ctl = doc.at("control");
    if (ctl.is_null()) {
        cfg.control.reset();
    } else if (ctl.is_object()) {
        const double mu = num_at(ctl, "mu", "control");
        const double horizon = num_at(ctl, "horizon", "control");
        const auto& radius = ctl.at("omega_radius");
        if (cfg.geom.is_radial()) {
            if (!radius.is_number())
                throw ConfigError(
                    "config: control.omega_radius (a number) is required in "
                    "radial mode");
            cfg.control =
                control::ControlConfig::ball(mu, horizon, radius.get<double>());
        } else {
            if (!radius.is_null())
                throw ConfigError("config: control.omega_radius only applies in "
                                  "radial mode; use control.omega = [lo, hi]");
            const auto& omega = ctl.at("omega");
            if (!omega.is_array() || omega.size() != 2 || !omega[0].is_number() ||
                !omega[1].is_number())
                throw ConfigError("config: control.omega must be an array [lo, hi]");
            cfg.control = control::ControlConfig(mu, horizon, omega[0].get<double>(),
                                                 omega[1].get<double>());
        }
    } else {
        throw ConfigError("config: control must be an object or null");
    }

    const auto& init = section(doc, "initial");
    cfg.initial.shape = parse_choice<InitialSpec::Shape>(
        init.at("shape"), "initial.shape",
        {{"zero", InitialSpec::Shape::zero},
         {"constant", InitialSpec::Shape::constant},
         {"trapezoid", InitialSpec::Shape::trapezoid},
         {"plateau", InitialSpec::Shape::plateau}});
    cfg.initial.value = num_at(init, "value", "initial");
    cfg.initial.alpha = opt_num_at(init, "alpha", "initial");
    cfg.initial.radius = opt_num_at(init, "radius", "initial");
    cfg.initial.epsilon = num_at(init, "epsilon", "initial");

    const auto& plan = section(doc, "plan");
    cfg.plan.given = parse_choice<PlanRequest::Given>(
        plan.at("given"), "plan.given",
        {{"mu", PlanRequest::Given::mu},
         {"horizon", PlanRequest::Given::horizon},
         {"radius", PlanRequest::Given::radius}});
    cfg.plan.value = num_at(plan, "value", "plan");
    cfg.plan.alpha = opt_num_at(plan, "alpha", "plan");
    cfg.plan.alpha_bar = opt_num_at(plan, "alpha_bar", "plan");
    cfg.plan.conservative = bool_at(plan, "conservative", "plan");

    const auto axis_options = std::initializer_list<std::pair<const char*, analysis::Axis>>{
        {"mu", analysis::Axis::mu},
        {"omega_halfwidth", analysis::Axis::omega_halfwidth},
        {"horizon", analysis::Axis::horizon}};

    const auto& thr = section(doc, "threshold");
    cfg.threshold.axis = parse_choice<analysis::Axis>(thr.at("axis"),
                                                      "threshold.axis", axis_options);
    cfg.threshold.lo = num_at(thr, "lo", "threshold");
    cfg.threshold.hi = num_at(thr, "hi", "threshold");
    cfg.threshold.tol = num_at(thr, "tol", "threshold");
    cfg.threshold.policy = parse_choice<analysis::Policy>(
        thr.at("policy"), "threshold.policy",
        {{"strict", analysis::Policy::strict},
         {"pessimistic", analysis::Policy::pessimistic}});

    const auto& sw = section(doc, "sweep");
    cfg.sweep.axis = parse_choice<analysis::Axis>(sw.at("axis"), "sweep.axis",
                                                  axis_options);
    const auto& vals = sw.at("values");
    if (!vals.is_array())
        throw ConfigError("config: sweep.values must be an array of numbers");
    cfg.sweep.values.clear();
    for (const auto& v : vals) {
        if (!v.is_number())
            throw ConfigError("config: sweep.values must be an array of numbers");
        cfg.sweep.values.push_back(v.get<double>());
    }
    cfg.sweep.threads = int_at(sw, "threads", "sweep");
    if (cfg.sweep.threads < 0)
        throw ConfigError("config: sweep.threads must be >= 0");

    cfg.front_level = num_at(doc, "front_level", "");
    cfg.speed_window = num_at(doc, "speed_window", "");
    return cfg;
}

// ------------------------------------------------------------- file output

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    return out;
}

void write_json(const ordered_json& doc, const std::string& path) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

// One simulation's files plus the bits other kinds aggregate.
struct RunDigest {
    solver::Verdict verdict = solver::Verdict::undecided;
    std::optional<double> front_final;
    std::optional<double> wave_speed;
};

RunDigest emit_simulation_outputs(const ExperimentConfig& cfg,
                                  const kinetics::Kinetics& k,
                                  const solver::SimResult& result,
                                  const std::string& dir, ordered_json extras) {
    fs::create_directories(dir);

    RunDigest digest;
    digest.verdict = result.verdict;

    emit_snapshots(result, dir + "/snapshots.csv");
    if (!result.control_snapshots.empty())
        emit_field_table(result.control_snapshots, result.grid, dir + "/control.csv");

    analysis::FrontTrace front;
    for (const auto& s : result.snapshots)
        if (auto p = analysis::front_position(s, result.grid, result.geom,
                                              cfg.front_level))
            front.emplace_back(s.time, *p);
    emit_pairs(front, "time", "position", dir + "/front.csv");
    if (!front.empty())
        digest.front_final = front.back().second;
    try {
        // Fit only past the control horizon: the free wave, not the ramp-up.
        const double min_time = cfg.control ? cfg.control->horizon : 0.0;
        digest.wave_speed = analysis::wave_speed(front, cfg.speed_window, min_time);
    } catch (const InsufficientData&) {
    }

    if (cfg.solver_cfg.record_energy)
        emit_pairs(result.energy, "time", "E", dir + "/energy.csv");

    ordered_json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["verdict"] = solver::to_string(result.verdict);
    ordered_json times = ordered_json::array();
    for (const auto& s : result.snapshots)
        times.push_back(s.time);
    summary["snapshot_times"] = std::move(times);

    ordered_json diag;
    diag["max_overshoot"] = result.max_overshoot;
    diag["theta"] = k.theta();
    try {
        diag["theta_c"] = k.theta_c();
        diag["invadable"] = true;
    } catch (const NotInvadable&) {
        diag["theta_c"] = nullptr;
        diag["invadable"] = false;
    }
    diag["front_level"] = cfg.front_level;
    diag["front_final"] = opt_json(digest.front_final);
    diag["wave_speed"] = opt_json(digest.wave_speed);
    summary["diagnostics"] = std::move(diag);

    for (auto& [key, value] : extras.items())
        summary[key] = value;

    summary["config"] = config_to_json(cfg);
    write_json(summary, dir + "/summary.json");
    return digest;
}

// Reinterprets one scalar as the control parameter a threshold/sweep varies.
// Degenerate values (zero gain, zero horizon, zero half-width) deliberately
// mean "effectively no control" rather than an error, so assignment bypasses
// the validating constructor.
void apply_axis(ExperimentConfig& c, analysis::Axis axis, double v) {
    switch (axis) {
    case analysis::Axis::mu:
        c.control->mu = v;
        break;
    case analysis::Axis::omega_halfwidth:
        if (c.geom.is_radial()) {
            c.control->omega_lo = 0.0;
            c.control->omega_hi = v;
        } else {
            const double center = 0.5 * (c.control->omega_lo + c.control->omega_hi);
            c.control->omega_lo = center - v;
            c.control->omega_hi = center + v;
        }
        break;
    case analysis::Axis::horizon:
        c.control->horizon = v;
        break;
    }
}

// -------------------------------------------------------- experiment kinds

RunOutcome run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    Field u0 = build_initial(cfg, k);
    auto result = solver::simulate(k, cfg.bio.sigma, cfg.control, cfg.geom, cfg.grid,
                                   cfg.solver_cfg, std::move(u0));
    auto digest = emit_simulation_outputs(cfg, k, result, out_dir,
                                          ordered_json::object());
    return {cfg.kind, out_dir,
            std::string("verdict: ") + solver::to_string(digest.verdict)};
}

RunOutcome run_energy(const ExperimentConfig& cfg_in, const std::string& out_dir) {
    ExperimentConfig cfg = cfg_in;
    cfg.control.reset(); // the decay property concerns the free flow
    cfg.solver_cfg.record_energy = true;
    if (cfg.initial.shape == InitialSpec::Shape::zero ||
        (cfg.initial.shape == InitialSpec::Shape::constant &&
         cfg.initial.value == 0.0))
        throw ConfigError("config: the energy kind needs a nonzero initial profile; "
                          "set initial.shape to constant, trapezoid or plateau");

    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    Field u0 = build_initial(cfg, k);
    auto result = solver::simulate(k, cfg.bio.sigma, cfg.control, cfg.geom, cfg.grid,
                                   cfg.solver_cfg, std::move(u0));

    const auto& e = result.energy; // uncontrolled run: one entry per snapshot
    double max_uphill = 0.0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        max_uphill = std::max(max_uphill, e[i + 1].second - e[i].second);
    const double slack = 1e-6 * std::abs(e.front().second);
    const bool nonincreasing = max_uphill <= slack;

    ordered_json extras;
    extras["energy"] = {{"initial", e.front().second},
                        {"final", e.back().second},
                        {"max_uphill", max_uphill},
                        {"slack", slack},
                        {"nonincreasing", nonincreasing}};
    auto digest = emit_simulation_outputs(cfg, k, result, out_dir, std::move(extras));

    std::string headline = nonincreasing
                               ? std::string("energy nonincreasing")
                               : "energy INCREASES (max uphill step " +
                                     fmt9(max_uphill) + ")";
    headline += std::string("; verdict: ") + solver::to_string(digest.verdict);
    return {cfg_in.kind, out_dir, headline};
}

RunOutcome run_plan(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    const double sigma = cfg.bio.sigma;
    const auto& req = cfg.plan;

    control::Plan plan{};
    ordered_json extra = ordered_json::object();
    switch (req.given) {
    case PlanRequest::Given::mu:
        plan = control::plan_from_gain(k, sigma, cfg.geom, req.value, req.alpha,
                                       req.alpha_bar);
        break;
    case PlanRequest::Given::horizon:
        plan = control::plan_from_time(k, sigma, cfg.geom, req.value, req.alpha,
                                       req.alpha_bar);
        break;
    case PlanRequest::Given::radius: {
        plan = control::plan_from_domain(k, sigma, cfg.geom, req.value, req.alpha,
                                         req.alpha_bar, req.conservative);
        const auto other = control::plan_from_domain(
            k, sigma, cfg.geom, req.value, req.alpha, req.alpha_bar,
            !req.conservative);
        extra["mu_literal"] = req.conservative ? other.mu : plan.mu;
        extra["mu_conservative"] = req.conservative ? plan.mu : other.mu;
        break;
    }
    }

    ordered_json summary;
    summary["kind"] = to_string(cfg.kind);
    ordered_json pj;
    pj["rule"] = rule_name(plan.rule);
    pj["theta"] = k.theta();
    pj["theta_c"] = k.theta_c();
    pj["alpha"] = plan.alpha;
    pj["alpha_bar"] = plan.alpha_bar;
    pj["r_alpha"] = plan.r_alpha;
    pj["epsilon"] = plan.epsilon;
    pj["epsilon_star"] = propagule::epsilon_star(plan.alpha, plan.alpha_bar,
                                                 plan.r_alpha, plan.mu, sigma,
                                                 cfg.geom);
    pj["mu"] = plan.mu;
    pj["t_min"] = plan.t_min;
    pj["radius"] = plan.radius;
    for (auto& [key, value] : extra.items())
        pj[key] = value;
    summary["plan"] = std::move(pj);
    summary["config"] = config_to_json(cfg);
    write_json(summary, out_dir + "/summary.json");

    char line[160];
    std::snprintf(line, sizeof line, "mu=%.6g, t_min=%.6g, radius=%.6g (%s)",
                  plan.mu, plan.t_min, plan.radius, rule_name(plan.rule));
    return {cfg.kind, out_dir, line};
}

RunOutcome run_threshold(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    if (!cfg.control)
        throw ConfigError("config: a threshold search varies the control block; "
                          "control must not be null");

    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    Field u0 = build_initial(cfg, k);

    ExperimentConfig base = cfg;
    base.solver_cfg.record_energy = false; // probes only need the verdict

    auto probe = [&](double v) {
        ExperimentConfig c = base;
        apply_axis(c, cfg.threshold.axis, v);
        const auto r = solver::simulate(k, c.bio.sigma, c.control, c.geom, c.grid,
                                        c.solver_cfg, u0);
        return r.verdict;
    };
    const auto res = analysis::threshold_search(probe, cfg.threshold.axis,
                                                cfg.threshold.lo, cfg.threshold.hi,
                                                cfg.threshold.tol,
                                                cfg.threshold.policy);

    ordered_json probes = ordered_json::array();
    for (const auto& [v, verdict] : res.probes)
        probes.push_back({{"value", v}, {"verdict", solver::to_string(verdict)}});

    ordered_json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["threshold"] = {{"axis", analysis::to_string(res.axis)},
                            {"critical", res.critical},
                            {"confirmed_extinct_below", res.lo},
                            {"confirmed_invading_above", res.hi},
                            {"tol", res.tol},
                            {"policy", policy_name(cfg.threshold.policy)},
                            {"undecided_count", res.undecided_count},
                            {"probes", std::move(probes)}};
    summary["config"] = config_to_json(cfg);
    write_json(summary, out_dir + "/summary.json");

    char line[160];
    std::snprintf(line, sizeof line, "critical %s = %.6g (bracket [%.6g, %.6g])",
                  analysis::to_string(res.axis), res.critical, res.lo, res.hi);
    return {cfg.kind, out_dir, line};
}

RunOutcome run_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto& sw = cfg.sweep;
    if (sw.values.empty())
        throw ConfigError("config: sweep.values must list at least one value");
    if (!cfg.control)
        throw ConfigError("config: a sweep varies the control block; control must "
                          "not be null");

    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    // Warm the lazily computed caches once, before threads share `k`.
    k.lipschitz_bound();
    try {
        k.theta_c();
    } catch (const NotInvadable&) {
    }
    Field u0 = build_initial(cfg, k);

    struct Member {
        std::string dir;
        RunDigest digest;
    };
    std::vector<Member> members(sw.values.size());
    std::vector<std::exception_ptr> failures(sw.values.size());

    unsigned workers = sw.threads > 0 ? static_cast<unsigned>(sw.threads)
                                      : std::thread::hardware_concurrency();
    if (workers == 0)
        workers = 1;
    workers = std::min(workers, static_cast<unsigned>(sw.values.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sw.values.size())
                return;
            try {
                char tag[32];
                std::snprintf(tag, sizeof tag, "run_%03d", static_cast<int>(i));
                ExperimentConfig c = cfg;
                c.kind = Kind::simulate;
                apply_axis(c, sw.axis, sw.values[i]);
                auto r = solver::simulate(k, c.bio.sigma, c.control, c.geom, c.grid,
                                          c.solver_cfg, u0);
                ordered_json extras;
                extras["sweep_axis"] = analysis::to_string(sw.axis);
                extras["sweep_value"] = sw.values[i];
                const std::string dir = out_dir + "/" + tag;
                members[i] = {dir, emit_simulation_outputs(c, k, r, dir,
                                                           std::move(extras))};
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (auto& th : pool)
        th.join();
    for (const auto& failure : failures)
        if (failure)
            std::rethrow_exception(failure);

    ordered_json runs = ordered_json::array();
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
        const auto& m = members[i];
        runs.push_back({{"value", sw.values[i]},
                        {"dir", fs::path(m.dir).filename().string()},
                        {"verdict", solver::to_string(m.digest.verdict)},
                        {"front_final", opt_json(m.digest.front_final)},
                        {"wave_speed", opt_json(m.digest.wave_speed)}});
    }
    ordered_json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["sweep"] = {{"axis", analysis::to_string(sw.axis)},
                        {"threads_used", workers},
                        {"runs", std::move(runs)}};
    summary["config"] = config_to_json(cfg);
    write_json(summary, out_dir + "/summary.json");

    return {cfg.kind, out_dir,
            std::to_string(sw.values.size()) + " runs along " +
                analysis::to_string(sw.axis)};
}

RunOutcome run_figures(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.geom.is_radial())
        throw ConfigError("config: the figures kind runs line-domain scenarios; "
                          "geometry.mode must be cartesian");
    fs::create_directories(out_dir);

    // The four canonical ignition-from-zero scenarios: gains 0.5 / 0.15
    // crossed with release intervals of half-width 1, 0.5, 1, 2; horizon 10.
    struct FigureCase {
        const char* name;
        double mu, lo, hi;
    };
    const FigureCase cases[] = {{"fig1", 0.5, -1.0, 1.0},
                                {"fig2", 0.5, -0.5, 0.5},
                                {"fig3", 0.15, -1.0, 1.0},
                                {"fig5", 0.15, -2.0, 2.0}};

    auto k = kinetics::make_wolbachia_kinetics(cfg.bio);
    ordered_json verdicts;
    std::string headline;
    for (const auto& fc : cases) {
        ExperimentConfig c = cfg;
        c.kind = Kind::simulate;
        c.control = control::ControlConfig(fc.mu, 10.0, fc.lo, fc.hi);
        c.initial = InitialSpec{}; // ignition from u0 = 0
        Field u0 = build_initial(c, k);
        auto r = solver::simulate(k, c.bio.sigma, c.control, c.geom, c.grid,
                                  c.solver_cfg, std::move(u0));
        auto digest = emit_simulation_outputs(c, k, r, out_dir + "/" + fc.name,
                                              ordered_json::object());
        verdicts[fc.name] = solver::to_string(digest.verdict);
        if (!headline.empty())
            headline += ", ";
        headline += std::string(fc.name) + "=" + solver::to_string(digest.verdict);
    }

    ordered_json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["verdicts"] = std::move(verdicts);
    summary["config"] = config_to_json(cfg);
    write_json(summary, out_dir + "/summary.json");
    return {cfg.kind, out_dir, headline};
}

} // namespace

// ---------------------------------------------------------- public surface

const char* to_string(Kind kind) {
    switch (kind) {
    case Kind::simulate: return "simulate";
    case Kind::plan: return "plan";
    case Kind::threshold: return "threshold";
    case Kind::sweep: return "sweep";
    case Kind::energy: return "energy";
    case Kind::figures: return "figures";
    }
    return "simulate";
}

Kind parse_kind(const std::string& name) {
    for (Kind k : {Kind::simulate, Kind::plan, Kind::threshold, Kind::sweep,
                   Kind::energy, Kind::figures})
        if (name == to_string(k))
            return k;
    throw ConfigError("config: kind = \"" + name +
                      "\"; expected one of: simulate, plan, threshold, sweep, "
                      "energy, figures");
}

ExperimentConfig load_config(const std::optional<std::string>& config_path,
                             const std::vector<std::string>& overrides,
                             std::optional<Kind> kind_override) {
    ordered_json user = ordered_json::object();
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in)
            throw ConfigError("cannot open config file: " + *config_path);
        try {
            user = ordered_json::parse(in);
        } catch (const ordered_json::parse_error& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        if (!user.is_object())
            throw ConfigError("config file must hold a JSON object");
    }
    for (const auto& entry : overrides)
        apply_override(user, entry);

    ordered_json merged = default_config();
    check_keys(user, merged, "");
    deep_merge(merged, user);
    if (kind_override)
        merged["kind"] = to_string(*kind_override);
    return extract_config(merged);
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2);
}

Field build_initial(const ExperimentConfig& cfg, const kinetics::Kinetics& k) {
    Field u0;
    u0.values.assign(cfg.grid.n, 0.0);
    switch (cfg.initial.shape) {
    case InitialSpec::Shape::zero:
        return u0;
    case InitialSpec::Shape::constant:
        if (!(cfg.initial.value >= 0.0 && cfg.initial.value <= 1.0))
            throw ConfigError("config: initial.value must lie in [0,1]");
        std::fill(u0.values.begin(), u0.values.end(), cfg.initial.value);
        return u0;
    case InitialSpec::Shape::trapezoid: {
        const double alpha = cfg.initial.alpha ? *cfg.initial.alpha
                                               : control::default_levels(k).alpha;
        const double radius =
            cfg.initial.radius
                ? *cfg.initial.radius
                : propagule::propagule_radius(k, cfg.bio.sigma, alpha, cfg.geom);
        return propagule::sample_profile(propagule::trapezoid_profile(alpha, radius),
                                         cfg.grid, cfg.geom);
    }
    case InitialSpec::Shape::plateau: {
        const double level = cfg.initial.alpha
                                 ? *cfg.initial.alpha
                                 : control::default_levels(k).alpha_bar;
        const double radius =
            cfg.initial.radius
                ? *cfg.initial.radius
                : propagule::propagule_radius(k, cfg.bio.sigma, level, cfg.geom);
        return propagule::sample_profile(
            propagule::plateau_profile(level, radius, cfg.initial.epsilon), cfg.grid,
            cfg.geom);
    }
    }
    return u0;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    switch (cfg.kind) {
    case Kind::simulate: return run_simulate(cfg, out_dir);
    case Kind::plan: return run_plan(cfg, out_dir);
    case Kind::threshold: return run_threshold(cfg, out_dir);
    case Kind::sweep: return run_sweep(cfg, out_dir);
    case Kind::energy: return run_energy(cfg, out_dir);
    case Kind::figures: return run_figures(cfg, out_dir);
    }
    throw ConfigError("config: unhandled experiment kind");
}

void emit_snapshots(const solver::SimResult& result, const std::string& path) {
    if (result.snapshots.empty())
        throw InvalidParams("emit_snapshots: result holds no snapshots");
    emit_field_table(result.snapshots, result.grid, path);
}

void emit_field_table(const std::vector<Field>& snapshots, const Grid& grid,
                      const std::string& path) {
    if (snapshots.empty())
        throw InvalidParams("emit_field_table: no snapshots to write");
    for (const auto& s : snapshots)
        if (static_cast<int>(s.values.size()) != grid.n)
            throw GridMismatch("emit_field_table: snapshot size does not match the "
                               "grid");

    auto out = open_out(path);
    std::string line = "x";
    for (std::size_t j = 0; j < snapshots.size(); ++j)
        line += ",t" + std::to_string(j);
    out << line << '\n';
    for (int i = 0; i < grid.n; ++i) {
        line = fmt9(grid.node(i));
        for (const auto& s : snapshots) {
            line += ',';
            line += fmt9(s.values[i]);
        }
        out << line << '\n';
    }
}

void emit_pairs(const std::vector<std::pair<double, double>>& rows,
                const std::string& col0, const std::string& col1,
                const std::string& path) {
    auto out = open_out(path);
    out << col0 << ',' << col1 << '\n';
    for (const auto& [a, b] : rows)
        out << fmt9(a) << ',' << fmt9(b) << '\n';
}

} // namespace bistctl::cli
