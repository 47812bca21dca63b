#include "bistctl/propagule.hpp"

#include <cmath>
#include <string>

#include "bistctl/numerics.hpp"

namespace bistctl::propagule {

double smoothstep(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("smoothstep: argument must lie in [0,1], got " +
                          std::to_string(x));
    const double y = 1.0 - x;
    return (3.0 - 2.0 * y) * y * y;
}

double propagule_radius(const kinetics::Kinetics& k, double sigma, double alpha,
                        const Geometry& geom) {
    if (!(sigma > 0.0))
        throw InvalidParams("propagule_radius: sigma must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("propagule_radius: alpha must lie in (0,1], got " +
                          std::to_string(alpha));
    if (!(alpha > k.theta_c()))
        throw AlphaBelowThreshold(
            "propagule_radius: alpha = " + std::to_string(alpha) +
            " does not exceed theta_c = " + std::to_string(k.theta_c()) +
            "; no finite plateau of this level ignites invasion");

    // alpha > theta_c makes F(alpha) > 0, and F(theta) < 0 always, so both
    // the ratio and the d-th root below are well defined.
    const double f_alpha = k.potential(alpha);
    const double f_theta = k.potential(k.theta());
    const double ratio = 2.0 * f_alpha / (sigma * alpha * alpha - 2.0 * f_theta);
    const double root = std::pow(1.0 + ratio, 1.0 / geom.dim);
    return 1.0 / (root - 1.0) + 1.0;
}

RadialProfile trapezoid_profile(double alpha, double R) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("trapezoid_profile: alpha must lie in (0,1], got " +
                          std::to_string(alpha));
    if (!(R > 0.0))
        throw InvalidParams("trapezoid_profile: R must be positive");
    RadialProfile p;
    p.support_radius = R + 1.0;
    p.value = [alpha, R](double r) {
        if (r <= R)
            return alpha;
        if (r >= R + 1.0)
            return 0.0;
        return alpha * (R + 1.0 - r);
    };
    return p;
}

RadialProfile plateau_profile(double alpha_bar, double R_alpha, double epsilon) {
    if (!(alpha_bar > 0.0 && alpha_bar < 1.0))
        throw DomainError("plateau_profile: alpha_bar must lie in (0,1), got " +
                          std::to_string(alpha_bar));
    if (!(R_alpha > 0.0))
        throw InvalidParams("plateau_profile: R_alpha must be positive");
    if (!(epsilon > 0.0))
        throw InvalidParams("plateau_profile: epsilon must be positive");
    RadialProfile p;
    p.support_radius = (1.0 + epsilon) * R_alpha;
    p.value = [alpha_bar, R_alpha, epsilon](double r) {
        if (r <= R_alpha)
            return alpha_bar;
        const double end = (1.0 + epsilon) * R_alpha;
        if (r >= end)
            return 0.0;
        return alpha_bar * smoothstep((r - R_alpha) / (epsilon * R_alpha));
    };
    return p;
}

double epsilon_star(double alpha, double alpha_bar, double R_alpha, double mu,
                    double sigma, const Geometry& geom) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(alpha_bar > 0.0 && alpha_bar < 1.0))
        throw DomainError("epsilon_star: alpha and alpha_bar must lie in (0,1)");
    if (!(alpha < alpha_bar))
        throw OrderingError("epsilon_star: requires alpha < alpha_bar, got alpha = " +
                            std::to_string(alpha) + ", alpha_bar = " +
                            std::to_string(alpha_bar));
    if (!(R_alpha > 0.0) || !(mu > 0.0) || !(sigma > 0.0))
        throw InvalidParams("epsilon_star: R_alpha, mu and sigma must be positive");

    const double a = geom.dim - 1.0;
    const double k = R_alpha * R_alpha * mu * (1.0 - alpha_bar) / (sigma * alpha_bar);
    return 8.0 / (std::sqrt(a * a + (32.0 / 3.0) * k) - a);
}

Field sample_profile(const RadialProfile& profile, const Grid& grid,
                     const Geometry& geom) {
    Field f;
    f.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.node(i);
        const double r = geom.is_radial() ? x : std::abs(x);
        f.values[i] = profile(r);
    }
    return f;
}

EnergyResult energy(const Field& field, const kinetics::Kinetics& k, double sigma,
                    const Geometry& geom, const Grid& grid) {
    if (static_cast<int>(field.values.size()) != grid.n)
        throw GridMismatch("energy: field has " + std::to_string(field.values.size()) +
                           " values for a grid of " + std::to_string(grid.n) +
                           " nodes");

    const double h = grid.h();
    const auto& u = field.values;

    // Volume weight at coordinate x. Radial integrals carry the full
    // d-dimensional shell measure |S^{d-1}| r^{d-1}.
    const double sphere =
        geom.is_radial() ? num::unit_sphere_area(geom.dim) : 1.0;
    auto weight = [&](double x) {
        if (!geom.is_radial())
            return 1.0;
        return sphere * std::pow(x, geom.dim - 1);
    };

    std::vector<double> pot(grid.n);
    for (int i = 0; i < grid.n; ++i)
        pot[i] = k.potential(u[i]);

    double e = 0.0;
    for (int i = 0; i + 1 < grid.n; ++i) {
        const double x0 = grid.node(i);
        const double x1 = grid.node(i + 1);
        const double slope = (u[i + 1] - u[i]) / h;
        const double grad_term =
            0.5 * sigma * slope * slope * weight(0.5 * (x0 + x1));
        const double pot_term = 0.5 * (pot[i] * weight(x0) + pot[i + 1] * weight(x1));
        e += h * (grad_term - pot_term);
    }

    EnergyResult result;
    result.value = e;
    const double edge = geom.is_radial()
                            ? std::abs(u.back())
                            : std::max(std::abs(u.front()), std::abs(u.back()));
    result.support_truncated = edge > 1e-12;
    return result;
}

EnergyResult energy(const RadialProfile& profile, const kinetics::Kinetics& k,
                    double sigma, const Geometry& geom, const Grid& grid) {
    return energy(sample_profile(profile, grid, geom), k, sigma, geom, grid);
}

} // namespace bistctl::propagule
