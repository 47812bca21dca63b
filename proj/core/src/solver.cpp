#include "bistctl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bistctl/analysis.hpp"
#include "bistctl/numerics.hpp"

namespace bistctl::solver {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::invasion: return "invasion";
    case Verdict::extinction: return "extinction";
    case Verdict::undecided: return "undecided";
    }
    return "undecided";
}

Stepper::Stepper(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                 const Grid& grid, std::optional<control::ControlConfig> ctl,
                 double dt, Boundary boundary)
    : k_(k), sigma_(sigma), geom_(geom), grid_(grid), ctl_(std::move(ctl)), dt_(dt),
      boundary_(boundary) {
    if (!(sigma_ > 0.0))
        throw InvalidParams("Stepper: sigma must be positive");
    if (!(dt_ > 0.0))
        throw InvalidParams("Stepper: dt must be positive");
    if (geom_.is_radial() && std::abs(grid_.x_min) > 1e-12)
        throw InvalidParams("Stepper: radial grids must start at r = 0");

    // Explicit-reaction stability margin. The reaction plus the feedback
    // term have one-sided slopes bounded by Lip(f) + mu; keeping
    // dt*(Lip f + mu) <= 1/2 keeps the explicit part contractive and the
    // [0,1] invariant intact.
    const double mu = ctl_ ? ctl_->mu : 0.0;
    const double stiffness = k_.lipschitz_bound() + mu;
    if (dt_ * stiffness > 0.5 + 1e-12)
        throw StabilityViolation(
            "Stepper: dt*(Lip f + mu) = " + std::to_string(dt_ * stiffness) +
            " exceeds the stability margin 0.5; reduce dt below " +
            std::to_string(0.5 / stiffness));

    const int n = grid_.n;
    const double h = grid_.h();
    const double lambda = sigma_ * dt_ / (h * h);
    const int d = geom_.dim;

    lower_.assign(n, 0.0);
    diag_.assign(n, 1.0);
    upper_.assign(n, 0.0);

    // Assemble I - dt*sigma*L row by row; the rows match apply_laplacian
    // algebraically (that routine groups its terms as differences).
    if (geom_.is_radial()) {
        // r = 0: symmetry row, Lap u(0) = 2d (u1 - u0)/h^2.
        diag_[0] = 1.0 + 2.0 * d * lambda;
        upper_[0] = -2.0 * d * lambda;
        for (int i = 1; i + 1 < n; ++i) {
            const double kappa = (d - 1) * h / (2.0 * grid_.node(i));
            lower_[i] = -lambda * (1.0 - kappa);
            diag_[i] = 1.0 + 2.0 * lambda;
            upper_[i] = -lambda * (1.0 + kappa);
        }
    } else {
        diag_[0] = 1.0 + 2.0 * lambda;
        upper_[0] = -2.0 * lambda;
        for (int i = 1; i + 1 < n; ++i) {
            lower_[i] = -lambda;
            diag_[i] = 1.0 + 2.0 * lambda;
            upper_[i] = -lambda;
        }
    }
    // Outer boundary: mirror (Neumann) or pinned value (Dirichlet).
    diag_[n - 1] = 1.0 + 2.0 * lambda;
    lower_[n - 1] = -2.0 * lambda;
    if (boundary_ == Boundary::dirichlet0) {
        diag_[n - 1] = 1.0;
        lower_[n - 1] = 0.0;
        if (!geom_.is_radial()) {
            diag_[0] = 1.0;
            upper_[0] = 0.0;
        }
    }

    in_omega_.assign(n, 0);
    if (ctl_)
        for (int i = 0; i < n; ++i)
            in_omega_[i] = ctl_->contains(grid_.node(i)) ? 1 : 0;

    lu_.resize(n);
    rhs_.resize(n);
    scratch_.resize(n);
}

void Stepper::apply_laplacian(const std::vector<double>& u,
                              std::vector<double>& lu) const {
    const int n = grid_.n;
    const double h = grid_.h();
    const double inv_h2 = 1.0 / (h * h);
    const int d = geom_.dim;

    if (geom_.is_radial()) {
        lu[0] = 2.0 * d * (u[1] - u[0]) * inv_h2;
        for (int i = 1; i + 1 < n; ++i) {
            const double kappa = (d - 1) * h / (2.0 * grid_.node(i));
            // Grouped as second difference + kappa * first difference so a
            // constant field maps to exactly zero (keeps homogeneous steady
            // states bitwise fixed points of the increment form).
            lu[i] = ((u[i - 1] - 2.0 * u[i] + u[i + 1]) +
                     kappa * (u[i + 1] - u[i - 1])) *
                    inv_h2;
        }
    } else {
        lu[0] = 2.0 * (u[1] - u[0]) * inv_h2;
        for (int i = 1; i + 1 < n; ++i)
            lu[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
    }
    lu[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv_h2;

    if (boundary_ == Boundary::dirichlet0) {
        lu[n - 1] = 0.0;
        if (!geom_.is_radial())
            lu[0] = 0.0;
    }
}

void Stepper::step(Field& u) {
    const int n = grid_.n;
    auto& v = u.values;
    if (static_cast<int>(v.size()) != n)
        throw GridMismatch("step: field size does not match the grid");

    const bool gate = ctl_ && u.time < ctl_->horizon;
    const double mu = ctl_ ? ctl_->mu : 0.0;

    apply_laplacian(v, lu_);
    for (int i = 0; i < n; ++i) {
        double r = k_.reaction(v[i]);
        if (gate && in_omega_[i]) {
            const double g = mu * (1.0 - v[i]) - r;
            if (g > 0.0)
                r += g;
        }
        rhs_[i] = dt_ * (sigma_ * lu_[i] + r);
    }
    if (boundary_ == Boundary::dirichlet0) {
        rhs_[n - 1] = 0.0;
        if (!geom_.is_radial())
            rhs_[0] = 0.0;
    }

    num::thomas_solve(lower_, diag_, upper_, rhs_, scratch_);

    double over = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = v[i] + rhs_[i];
        if (w < 0.0) {
            over = std::max(over, -w);
            w = 0.0;
        } else if (w > 1.0) {
            over = std::max(over, w - 1.0);
            w = 1.0;
        }
        v[i] = w;
    }
    max_overshoot_ = std::max(max_overshoot_, over);
    u.time += dt_;
}

std::vector<double> Stepper::control_field(const Field& u) const {
    std::vector<double> g(grid_.n, 0.0);
    if (!ctl_ || !(u.time < ctl_->horizon))
        return g;
    for (int i = 0; i < grid_.n; ++i) {
        if (!in_omega_[i])
            continue;
        const double gi = ctl_->mu * (1.0 - u.values[i]) - k_.reaction(u.values[i]);
        g[i] = gi > 0.0 ? gi : 0.0;
    }
    return g;
}

Verdict classify(const Field& final_field, const Grid& grid, const Geometry& geom,
                 double theta) {
    const auto& u = final_field.values;
    const int n = grid.n;

    double central_min = 1.0;
    double global_max = 0.0;
    const double mid = 0.5 * (grid.x_min + grid.x_max);
    const double quarter = 0.25 * grid.length();
    for (int i = 0; i < n; ++i) {
        global_max = std::max(global_max, u[i]);
        const double x = grid.node(i);
        const bool central = geom.is_radial() ? (x <= 0.5 * grid.x_max)
                                              : (std::abs(x - mid) <= quarter);
        if (central)
            central_min = std::min(central_min, u[i]);
    }

    if (central_min >= 0.99)
        return Verdict::invasion;
    if (global_max <= theta)
        return Verdict::extinction;
    return Verdict::undecided;
}

SimResult simulate(const kinetics::Kinetics& k, double sigma,
                   const std::optional<control::ControlConfig>& ctl,
                   const Geometry& geom, const Grid& grid, const SolverConfig& cfg,
                   Field u0) {
    if (!(cfg.t_max > 0.0))
        throw InvalidParams("simulate: t_max must be positive");
    if (cfg.snapshot_stride < 1)
        throw InvalidParams("simulate: snapshot_stride must be >= 1");
    if (static_cast<int>(u0.values.size()) != grid.n)
        throw GridMismatch("simulate: u0 has " + std::to_string(u0.values.size()) +
                           " values for a grid of " + std::to_string(grid.n) +
                           " nodes");
    for (double& v : u0.values) {
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw DomainError("simulate: u0 values must lie in [0,1]");
        v = std::clamp(v, 0.0, 1.0);
    }
    if (cfg.boundary == Boundary::dirichlet0) {
        u0.values.back() = 0.0;
        if (!geom.is_radial())
            u0.values.front() = 0.0;
    }

    Stepper stepper(k, sigma, geom, grid, ctl, cfg.dt, cfg.boundary);

    const int steps = static_cast<int>(std::ceil(cfg.t_max / cfg.dt - 1e-9));

    SimResult result;
    result.geom = geom;
    result.grid = grid;

    Field u = std::move(u0);
    u.time = 0.0;

    auto record = [&](const Field& field) {
        result.snapshots.push_back(field);
        if (ctl) {
            Field g;
            g.time = field.time;
            g.values = stepper.control_field(field);
            result.control_snapshots.push_back(std::move(g));
        }
        if (auto pos = analysis::front_position(field, grid, geom))
            result.front.emplace_back(field.time, *pos);
        const bool control_off = !ctl || field.time >= ctl->horizon - 1e-12;
        if (cfg.record_energy && control_off) {
            const auto e = propagule::energy(field, k, sigma, geom, grid);
            result.energy.emplace_back(field.time, e.value);
        }
    };

    record(u);
    for (int i = 0; i < steps; ++i) {
        stepper.step(u);
        u.time = (i + 1) * cfg.dt; // avoid accumulated drift in the time stamp
        if ((i + 1) % cfg.snapshot_stride == 0 || i + 1 == steps)
            record(u);
    }

    result.max_overshoot = stepper.max_overshoot();
    result.verdict = classify(result.snapshots.back(), grid, geom, k.theta());
    return result;
}

SimResult simulate_linear_ball(double mu, double sigma, const Geometry& geom,
                               const Grid& grid, const SolverConfig& cfg) {
    if (!geom.is_radial())
        throw InvalidParams("simulate_linear_ball: requires radial geometry");
    if (!(mu > 0.0))
        throw InvalidParams("simulate_linear_ball: mu must be positive");

    // The closed-loop reaction inside the ball where the feedback is active:
    // f(u) + g(u) = mu(1-u). Modeled directly as an (unvalidated) reaction
    // function with no separate control term.
    auto lin = kinetics::from_function([mu](double u) { return mu * (1.0 - u); }, 0.5);

    SolverConfig ball_cfg = cfg;
    ball_cfg.boundary = Boundary::dirichlet0;

    Field u0;
    u0.values.assign(grid.n, 0.0);
    return simulate(lin, sigma, std::nullopt, geom, grid, ball_cfg, std::move(u0));
}

double closed_form_subsub(double mu, const propagule::RadialProfile& gamma,
                          double t, double r) {
    if (!(t >= 0.0))
        throw DomainError("closed_form_subsub: t must be nonnegative");
    return (1.0 - std::exp(-mu * t)) * gamma(r);
}

} // namespace bistctl::solver
