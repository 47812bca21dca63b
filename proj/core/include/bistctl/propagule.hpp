#pragma once

#include <functional>

#include "bistctl/geometry.hpp"
#include "bistctl/kinetics.hpp"

// Explicit radial profiles that ignite invasion, the sufficient support
// radius R_alpha, the buffer-ring width factor epsilon*, and the energy
// functional E[p] = int (sigma/2 |grad p|^2 - F(p)) dx.

namespace bistctl::propagule {

// A compactly supported, nonincreasing, continuous radial profile
// r >= 0 -> value in [0,1]; identically 0 beyond support_radius.
struct RadialProfile {
    std::function<double(double)> value;
    double support_radius = 0.0;

    double operator()(double r) const {
        return (r >= support_radius) ? 0.0 : value(r);
    }
};

// The C^1 ramp polynomial phi(x) = -2(1-x)^3 + 3(1-x)^2 on [0,1]:
// phi(0) = 1, phi(1) = 0, phi'(0) = phi'(1) = 0, nonincreasing
// (sup |phi'| = 3/2 at x = 1/2, sup |phi''| = 6 at the ends).
// Throws DomainError outside [0,1].
double smoothstep(double x);

// Sufficient propagule support radius for plateau level alpha > theta_c:
//   R_alpha = ((1 + 2F(alpha)/(sigma*alpha^2 - 2F(theta)))^{1/d} - 1)^{-1} + 1.
// Throws AlphaBelowThreshold if alpha <= theta_c (F(alpha) <= 0 there) and
// DomainError if alpha is outside (0,1].
double propagule_radius(const kinetics::Kinetics& k, double sigma, double alpha,
                        const Geometry& geom);

// Trapezoid profile: plateau alpha on [0,R], linear ramp to 0 over [R, R+1];
// support radius R+1.
RadialProfile trapezoid_profile(double alpha, double R);

// Plateau profile with a C^1 smoothstep ramp: alpha_bar on [0, R_alpha],
// alpha_bar * phi((r-R_alpha)/(eps*R_alpha)) on (R_alpha, (1+eps)R_alpha],
// 0 beyond; support radius (1+eps)*R_alpha.
RadialProfile plateau_profile(double alpha_bar, double R_alpha, double epsilon);

// Minimal buffer-ring width factor making the plateau profile's ramp
// diffusion affordable at gain mu:
//   eps* = 8 / (sqrt((d-1)^2 + (32/3) * R_alpha^2 mu (1-alpha_bar)/(sigma*alpha_bar)) - d + 1).
// Equivalently, eps* is the positive root of
//   6/eps^2 + (3/2)(d-1)/eps = R_alpha^2 mu (1-alpha_bar)/(sigma*alpha_bar),
// the ramp-curvature sufficiency condition at equality with the smoothstep's
// sup|phi''| = 6 and sup|phi'| = 3/2.
// Validates 0 < alpha < alpha_bar < 1 (OrderingError / DomainError) and
// mu, sigma, R_alpha > 0 (InvalidParams).
double epsilon_star(double alpha, double alpha_bar, double R_alpha, double mu,
                    double sigma, const Geometry& geom);

struct EnergyResult {
    double value = 0.0;
    // True when the field is not (numerically) zero at the outer grid
    // boundary, i.e. the integral misses part of the support.
    bool support_truncated = false;
};

// Discrete energy of a nodal field on the grid:
//   E[p] = int (sigma/2 |grad p|^2 - F(p)) w dx,
// with w = 1 in cartesian mode and w = |S^{d-1}| r^{d-1} in radial mode.
// The F-term uses the trapezoid rule on the nodes; the gradient term uses
// per-cell differences weighted at cell midpoints (exact for the piecewise
// linear interpolant, robust across profile kinks).
EnergyResult energy(const Field& field, const kinetics::Kinetics& k, double sigma,
                    const Geometry& geom, const Grid& grid);

// Energy of a radial profile sampled on the grid (cartesian grids sample the
// profile at |x|).
EnergyResult energy(const RadialProfile& profile, const kinetics::Kinetics& k,
                    double sigma, const Geometry& geom, const Grid& grid);

// Samples a radial profile onto a grid: radial grids use r directly,
// cartesian grids use |x|.
Field sample_profile(const RadialProfile& profile, const Grid& grid,
                     const Geometry& geom);

} // namespace bistctl::propagule
