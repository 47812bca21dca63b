#pragma once

#include <optional>

#include "bistctl/geometry.hpp"
#include "bistctl/kinetics.hpp"

// The distributed feedback law g(u) = (mu(1-u) - f(u))_+ and the sufficient
// planners that size (T, gain, release radius) so a release on a ball
// guarantees invasion.

namespace bistctl::control {

// Feedback gain mu, control horizon T, and release region Omega.
// Omega is the closed interval [omega_lo, omega_hi] in cartesian mode and
// the closed ball of radius omega_hi (omega_lo = 0) in radial mode.
struct ControlConfig {
    double mu;
    double horizon;
    double omega_lo;
    double omega_hi;

    ControlConfig(double mu_, double horizon_, double omega_lo_, double omega_hi_)
        : mu(mu_), horizon(horizon_), omega_lo(omega_lo_), omega_hi(omega_hi_) {
        if (!(mu > 0.0))
            throw InvalidParams("ControlConfig: mu must be positive");
        if (!(horizon > 0.0))
            throw InvalidParams("ControlConfig: horizon must be positive");
        if (!(omega_hi > omega_lo))
            throw InvalidParams("ControlConfig: Omega = [" + std::to_string(omega_lo) +
                                "," + std::to_string(omega_hi) + "] is empty");
    }

    static ControlConfig ball(double mu, double horizon, double radius) {
        if (!(radius > 0.0))
            throw InvalidParams("ControlConfig: ball radius must be positive");
        return ControlConfig(mu, horizon, 0.0, radius);
    }

    bool contains(double x) const { return x >= omega_lo && x <= omega_hi; }
};

// Which sizing rule produced a Plan. The ramp-curvature route
// (plan_from_gain / plan_from_time, and plan_from_domain in conservative
// mode) satisfies the eps*-equality exactly; the lighter domain route for a
// prescribed radius uses the constants 2/eps^2 + (d-1)/(2 eps), whose gain
// is exactly 1/3 of the ramp-curvature route's.
enum class PlanRule { gain, time, domain_literal, domain_conservative };

// A sufficient tuple guaranteeing invasion: run gain mu on a ball of the
// given radius for at least t_min.
struct Plan {
    double alpha;      // plateau level reached at switch-off, > theta_c
    double alpha_bar;  // asymptotic plateau level of the feedback, in (alpha,1)
    double r_alpha;    // sufficient propagule support radius for alpha
    double epsilon;    // buffer-ring width factor; release radius = (1+eps)R_alpha
    double mu;         // feedback gain
    double t_min;      // minimal control horizon (1/mu) ln(alpha_bar/(alpha_bar-alpha))
    double radius;     // release-ball radius
    PlanRule rule;
};

// The feedback law g(u) = max(mu(1-u) - f(u), 0). The Omega indicator and
// the time gate are applied by the solver, not here.
// Throws DomainError if u is outside [0,1].
double feedback(const kinetics::Kinetics& k, double mu, double u);

// Minimal control horizon (1/mu) * ln(alpha_bar / (alpha_bar - alpha)):
// the time the closed-loop plateau needs to climb from 0 past alpha.
// Throws OrderingError if alpha >= alpha_bar.
double min_control_time(double mu, double alpha, double alpha_bar);

// Default plateau levels when the caller does not choose:
// alpha = theta_c + 0.25(1-theta_c), alpha_bar = alpha + 0.5(1-alpha).
// Surfaced (rather than buried in the planners) so outputs can record them.
struct PlateauLevels {
    double alpha;
    double alpha_bar;
};
PlateauLevels default_levels(const kinetics::Kinetics& k);

// Plan for a prescribed gain mu: t_min at equality, eps = eps*, radius
// (1+eps*) R_alpha. alpha/alpha_bar default per default_levels.
Plan plan_from_gain(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                    double mu, std::optional<double> alpha = std::nullopt,
                    std::optional<double> alpha_bar = std::nullopt);

// Plan for a prescribed maximal horizon T: mu = (1/T) ln(alpha_bar/(alpha_bar-alpha)),
// then as plan_from_gain.
Plan plan_from_time(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                    double T, std::optional<double> alpha = std::nullopt,
                    std::optional<double> alpha_bar = std::nullopt);

// Plan for a prescribed release radius: eps = radius/R_alpha - 1 (must be
// positive, else DomainTooSmall), then the gain
//   mu = sigma*alpha_bar / ((1-alpha_bar) R_alpha^2) * (2/eps^2 + (d-1)/(2 eps)),
// or exactly 3x that with conservative = true (matching the ramp-curvature
// constants 6/eps^2 + (3/2)(d-1)/eps the other planners are built on).
Plan plan_from_domain(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                      double radius_available,
                      std::optional<double> alpha = std::nullopt,
                      std::optional<double> alpha_bar = std::nullopt,
                      bool conservative = false);

} // namespace bistctl::control
