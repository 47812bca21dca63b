#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "bistctl/errors.hpp"

// Bistable reaction kinetics: the infection reaction term f, its potential
// F(z) = int_0^z f, and the invasion threshold theta_c (the unique zero of F
// in (theta, 1), which exists iff F(1) > 0).

namespace bistctl::kinetics {

// Model constants of the infection kinetics plus the diffusivity. All rates
// are per unit time; lengths are nondimensional (the formulas mix F-values
// and sigma*alpha^2 terms, so inputs are assumed nondimensionalized).
struct BiologicalParams {
    double s_f;        // fecundity reduction, in [0,1)
    double s_h;        // cross-infection incompatibility strength, in (0,1]
    double delta;      // death-rate ratio infected/uninfected, >= 1
    double death_rate; // uninfected death rate, > 0
    double sigma;      // diffusivity, > 0

    // Validates every range plus the consistency condition
    // s_f + delta - 1 < delta*s_h (which keeps theta below 1).
    BiologicalParams(double s_f, double s_h, double delta, double death_rate,
                     double sigma);

    // The parameter set used throughout for defaults:
    // s_f=0.1, s_h=0.3, delta=1, death_rate=1, sigma=1 (gives theta = 1/3).
    static BiologicalParams defaults();
};

// A validated bistable reaction function together with its unstable zero
// theta and lazily computed derived quantities. Values are immutable after
// construction (the theta_c and Lipschitz caches are write-once), so a
// Kinetics may be shared freely across threads.
class Kinetics {
public:
    // Reaction rate f(p). Throws DomainError if p is outside [0,1].
    double reaction(double p) const;

    // The unstable zero theta in (0,1).
    double theta() const;

    // Potential F(z) = int_0^z f, adaptive quadrature with absolute
    // tolerance 1e-12. Throws DomainError if z is outside [0,1].
    double potential(double z) const;

    // The unique zero of F in (theta, 1), computed once by bisection to
    // |F(theta_c)| <= 1e-12 and cached. Throws NotInvadable if F(1) <= 0.
    double theta_c() const;

    // Upper bound on sup_{[0,1]} |f'|, from 1e4 finite differences inflated
    // by 10%; cached. Used for explicit-reaction time-step control.
    double lipschitz_bound() const;

    // The biological parameter pack, when this kinetics was built from one
    // (synthetic kinetics carry none).
    const std::optional<BiologicalParams>& params() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit Kinetics(std::shared_ptr<const Impl> impl);

    friend Kinetics make_wolbachia_kinetics(const BiologicalParams&);
    friend Kinetics make_cubic_kinetics(double);
    friend Kinetics from_function(std::function<double(double)>, double);
};

// The infection kinetics
//   f(p) = delta*d*s_h * p(1-p)(p-theta) / (s_h p^2 - (s_f+s_h) p + 1),
//   theta = (s_f + delta - 1) / (delta*s_h).
// Throws ThetaOutOfRange if theta is not strictly inside (0,1) and
// DenominatorVanishes if the denominator has a root in [0,1] (impossible for
// validated params; see the positivity argument in kinetics.cpp).
Kinetics make_wolbachia_kinetics(const BiologicalParams& p);

// Synthetic cubic f(p) = p(1-p)(p-theta): same bistable contract, with
// closed-form potential and theta_c for test oracles.
// Throws ThetaOutOfRange if theta is not in (0,1).
Kinetics make_cubic_kinetics(double theta);

// Wraps an arbitrary reaction function without bistability validation.
// For test stubs and auxiliary linear problems; the caller is responsible
// for the contract.
Kinetics from_function(std::function<double(double)> f, double theta);

} // namespace bistctl::kinetics
