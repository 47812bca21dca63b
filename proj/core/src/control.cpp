#include "bistctl/control.hpp"

#include <cmath>
#include <string>

#include "bistctl/propagule.hpp"

namespace bistctl::control {

namespace {

// Resolves optional plateau levels and validates theta_c < alpha < alpha_bar < 1.
PlateauLevels resolve_levels(const kinetics::Kinetics& k,
                             std::optional<double> alpha,
                             std::optional<double> alpha_bar) {
    PlateauLevels lv{};
    if (alpha && alpha_bar) {
        lv = {*alpha, *alpha_bar};
    } else if (!alpha && !alpha_bar) {
        lv = default_levels(k);
    } else if (alpha) {
        lv.alpha = *alpha;
        lv.alpha_bar = lv.alpha + 0.5 * (1.0 - lv.alpha);
    } else {
        lv.alpha_bar = *alpha_bar;
        const double theta_c = k.theta_c();
        lv.alpha = theta_c + 0.5 * (lv.alpha_bar - theta_c);
    }

    if (!(lv.alpha > 0.0 && lv.alpha < 1.0) ||
        !(lv.alpha_bar > 0.0 && lv.alpha_bar < 1.0))
        throw DomainError("plan: alpha and alpha_bar must lie in (0,1)");
    if (!(lv.alpha < lv.alpha_bar))
        throw OrderingError("plan: requires alpha < alpha_bar, got alpha = " +
                            std::to_string(lv.alpha) + ", alpha_bar = " +
                            std::to_string(lv.alpha_bar));
    if (!(lv.alpha > k.theta_c()))
        throw AlphaBelowThreshold("plan: alpha = " + std::to_string(lv.alpha) +
                                  " does not exceed theta_c = " +
                                  std::to_string(k.theta_c()));
    return lv;
}

} // namespace

double feedback(const kinetics::Kinetics& k, double mu, double u) {
    if (!(mu > 0.0))
        throw InvalidParams("feedback: mu must be positive");
    const double g = mu * (1.0 - u) - k.reaction(u);
    return g > 0.0 ? g : 0.0;
}

double min_control_time(double mu, double alpha, double alpha_bar) {
    if (!(mu > 0.0))
        throw InvalidParams("min_control_time: mu must be positive");
    if (!(alpha > 0.0 && alpha_bar < 1.0))
        throw DomainError("min_control_time: levels must lie in (0,1)");
    if (!(alpha < alpha_bar))
        throw OrderingError("min_control_time: requires alpha < alpha_bar, got alpha = " +
                            std::to_string(alpha) + ", alpha_bar = " +
                            std::to_string(alpha_bar));
    return std::log(alpha_bar / (alpha_bar - alpha)) / mu;
}

PlateauLevels default_levels(const kinetics::Kinetics& k) {
    const double theta_c = k.theta_c();
    const double alpha = theta_c + 0.25 * (1.0 - theta_c);
    return {alpha, alpha + 0.5 * (1.0 - alpha)};
}

Plan plan_from_gain(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                    double mu, std::optional<double> alpha,
                    std::optional<double> alpha_bar) {
    if (!(mu > 0.0))
        throw InvalidParams("plan_from_gain: mu must be positive");
    const PlateauLevels lv = resolve_levels(k, alpha, alpha_bar);
    const double r_alpha = propagule::propagule_radius(k, sigma, lv.alpha, geom);
    const double eps =
        propagule::epsilon_star(lv.alpha, lv.alpha_bar, r_alpha, mu, sigma, geom);
    Plan plan{};
    plan.alpha = lv.alpha;
    plan.alpha_bar = lv.alpha_bar;
    plan.r_alpha = r_alpha;
    plan.epsilon = eps;
    plan.mu = mu;
    plan.t_min = min_control_time(mu, lv.alpha, lv.alpha_bar);
    plan.radius = (1.0 + eps) * r_alpha;
    plan.rule = PlanRule::gain;
    return plan;
}

Plan plan_from_time(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                    double T, std::optional<double> alpha,
                    std::optional<double> alpha_bar) {
    if (!(T > 0.0))
        throw InvalidParams("plan_from_time: T must be positive");
    const PlateauLevels lv = resolve_levels(k, alpha, alpha_bar);
    const double mu = std::log(lv.alpha_bar / (lv.alpha_bar - lv.alpha)) / T;
    Plan plan = plan_from_gain(k, sigma, geom, mu, lv.alpha, lv.alpha_bar);
    plan.rule = PlanRule::time;
    return plan;
}

Plan plan_from_domain(const kinetics::Kinetics& k, double sigma, const Geometry& geom,
                      double radius_available, std::optional<double> alpha,
                      std::optional<double> alpha_bar, bool conservative) {
    if (!(radius_available > 0.0))
        throw InvalidParams("plan_from_domain: radius must be positive");
    const PlateauLevels lv = resolve_levels(k, alpha, alpha_bar);
    const double r_alpha = propagule::propagule_radius(k, sigma, lv.alpha, geom);
    if (!(radius_available > r_alpha))
        throw DomainTooSmall(
            "plan_from_domain: available radius " + std::to_string(radius_available) +
            " does not exceed the required propagule radius R_alpha = " +
            std::to_string(r_alpha));
    const double eps = radius_available / r_alpha - 1.0;
    const double a = geom.dim - 1.0;
    double mu = sigma * lv.alpha_bar / ((1.0 - lv.alpha_bar) * r_alpha * r_alpha) *
                (2.0 / (eps * eps) + 0.5 * a / eps);
    // The ramp-curvature condition carries constants (6, 3/2), exactly 3x
    // the (2, 1/2) above, in every dimension.
    if (conservative)
        mu *= 3.0;
    Plan plan{};
    plan.alpha = lv.alpha;
    plan.alpha_bar = lv.alpha_bar;
    plan.r_alpha = r_alpha;
    plan.epsilon = eps;
    plan.mu = mu;
    plan.t_min = min_control_time(mu, lv.alpha, lv.alpha_bar);
    plan.radius = radius_available;
    plan.rule = conservative ? PlanRule::domain_conservative : PlanRule::domain_literal;
    return plan;
}

} // namespace bistctl::control
