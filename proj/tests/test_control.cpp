#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bistctl/control.hpp>
#include <bistctl/errors.hpp>
#include <bistctl/geometry.hpp>
#include <bistctl/kinetics.hpp>
#include <bistctl/propagule.hpp>

#include <cmath>

using namespace bistctl;
using namespace bistctl::control;

namespace {
kinetics::Kinetics default_kinetics() {
    return kinetics::make_wolbachia_kinetics(
        kinetics::BiologicalParams::defaults());
}
} // namespace

TEST_CASE("feedback law clamps at zero and fills toward fixation") {
    auto k = default_kinetics();
    // At u = 0 the reaction is zero, so the feedback is the full gain.
    CHECK(feedback(k, 0.5, 0.0) == 0.5);
    // At fixation there is nothing left to add.
    CHECK(feedback(k, 0.5, 1.0) == 0.0);
    // Mid-range: g = mu(1-u) - f(u); at the defaults f(0.5) = 1/70.
    CHECK(feedback(k, 0.5, 0.5) ==
          doctest::Approx(0.25 - 1.0 / 70.0).epsilon(1e-14));
    // A weak gain loses to the reaction and the positive part gates to 0.
    CHECK(feedback(k, 0.01, 0.5) == 0.0);

    CHECK_THROWS_AS(feedback(k, 0.0, 0.5), InvalidParams);
    CHECK_THROWS_AS(feedback(k, -1.0, 0.5), InvalidParams);
    CHECK_THROWS_AS(feedback(k, 0.5, 1.5), DomainError);
}

TEST_CASE("minimal horizon anchor and closed-loop identity") {
    auto k = default_kinetics();
    const PlateauLevels lv = default_levels(k);
    const double T = min_control_time(0.5, lv.alpha, lv.alpha_bar);
    CHECK(T == doctest::Approx(3.0859521496308275).epsilon(1e-12));
    // By construction the closed-loop plateau (1 - e^{-mu t}) * alpha_bar
    // reaches exactly alpha at t = T.
    CHECK((1.0 - std::exp(-0.5 * T)) * lv.alpha_bar ==
          doctest::Approx(lv.alpha).epsilon(1e-14));
}

TEST_CASE("minimal horizon input validation") {
    CHECK_THROWS_AS(min_control_time(0.0, 0.6, 0.8), InvalidParams);
    CHECK_THROWS_AS(min_control_time(0.5, 0.0, 0.8), DomainError);
    CHECK_THROWS_AS(min_control_time(0.5, 0.6, 1.0), DomainError);
    CHECK_THROWS_AS(min_control_time(0.5, 0.8, 0.8), OrderingError);
    CHECK_THROWS_AS(min_control_time(0.5, 0.9, 0.8), OrderingError);
}

TEST_CASE("default plateau levels interpolate above theta_c") {
    auto k = default_kinetics();
    const PlateauLevels lv = default_levels(k);
    const double tc = k.theta_c();
    CHECK(lv.alpha == tc + 0.25 * (1.0 - tc));
    CHECK(lv.alpha_bar == lv.alpha + 0.5 * (1.0 - lv.alpha));
    CHECK(lv.alpha > tc);
    CHECK(lv.alpha_bar < 1.0);
}

TEST_CASE("gain plan reproduces the frozen default anchors") {
    auto k = default_kinetics();
    const Plan p = plan_from_gain(k, 1.0, Geometry::cartesian(), 0.5);
    CHECK(p.alpha == doctest::Approx(0.6477938850449669).epsilon(1e-12));
    CHECK(p.alpha_bar == doctest::Approx(0.8238969425224835).epsilon(1e-12));
    CHECK(p.r_alpha == doctest::Approx(85.91938913413901).epsilon(1e-12));
    CHECK(p.epsilon == doctest::Approx(0.08720721952918191).epsilon(1e-12));
    CHECK(p.mu == 0.5);
    CHECK(p.t_min == doctest::Approx(3.0859521496308275).epsilon(1e-12));
    CHECK(p.radius == doctest::Approx(93.41218016417308).epsilon(1e-12));
    CHECK(p.rule == PlanRule::gain);
}

TEST_CASE("gain plan is internally consistent") {
    auto k = default_kinetics();
    const Geometry g = Geometry::radial(2);
    const Plan p = plan_from_gain(k, 1.3, g, 0.8);
    CHECK(p.t_min == min_control_time(p.mu, p.alpha, p.alpha_bar));
    CHECK(p.epsilon == propagule::epsilon_star(p.alpha, p.alpha_bar, p.r_alpha,
                                               p.mu, 1.3, g));
    CHECK(p.radius == (1.0 + p.epsilon) * p.r_alpha);
    CHECK(p.r_alpha == propagule::propagule_radius(k, 1.3, p.alpha, g));
    CHECK_THROWS_AS(plan_from_gain(k, 1.0, g, 0.0), InvalidParams);
}

TEST_CASE("time plan inverts the gain plan") {
    auto k = default_kinetics();
    const Geometry g = Geometry::cartesian();
    const Plan p = plan_from_gain(k, 1.0, g, 0.5);
    const Plan q = plan_from_time(k, 1.0, g, p.t_min);
    CHECK(q.mu == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q.rule == PlanRule::time);
    CHECK(q.radius == doctest::Approx(p.radius).epsilon(1e-14));
    CHECK_THROWS_AS(plan_from_time(k, 1.0, g, 0.0), InvalidParams);
}

TEST_CASE("domain plan: conservative rule is exactly three times the literal") {
    auto k = default_kinetics();
    const Geometry g = Geometry::cartesian();
    const Plan p = plan_from_gain(k, 1.0, g, 0.5);

    const Plan lit =
        plan_from_domain(k, 1.0, g, p.radius);
    const Plan cons =
        plan_from_domain(k, 1.0, g, p.radius, std::nullopt, std::nullopt, true);
    CHECK(lit.rule == PlanRule::domain_literal);
    CHECK(cons.rule == PlanRule::domain_conservative);
    CHECK(cons.mu == 3.0 * lit.mu);
    // The conservative rule closes the loop on plan_from_gain (up to the
    // eps = radius/R_alpha - 1 rounding).
    CHECK(cons.mu == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(cons.epsilon == doctest::Approx(p.epsilon).epsilon(1e-12));
}

TEST_CASE("domain plan rejects radii that cannot hold the propagule") {
    auto k = default_kinetics();
    const Geometry g = Geometry::cartesian();
    CHECK_THROWS_AS(plan_from_domain(k, 1.0, g, -3.0), InvalidParams);
    // R_alpha at the defaults is ~85.9; anything at or below is too small.
    CHECK_THROWS_AS(plan_from_domain(k, 1.0, g, 50.0), DomainTooSmall);
    CHECK_THROWS_AS(plan_from_domain(k, 1.0, g, 85.91938913413901),
                    DomainTooSmall);
}

TEST_CASE("planners accept one-sided level choices") {
    auto k = default_kinetics();
    const Geometry g = Geometry::cartesian();
    // alpha given alone: alpha_bar defaults to the midpoint toward 1.
    const Plan p = plan_from_gain(k, 1.0, g, 0.5, 0.7);
    CHECK(p.alpha == 0.7);
    CHECK(p.alpha_bar == 0.7 + 0.5 * (1.0 - 0.7));
    // Both given: taken as-is.
    const Plan q = plan_from_gain(k, 1.0, g, 0.5, 0.7, 0.9);
    CHECK(q.alpha == 0.7);
    CHECK(q.alpha_bar == 0.9);
}

TEST_CASE("planners validate the plateau levels") {
    auto k = default_kinetics();
    const Geometry g = Geometry::cartesian();
    CHECK_THROWS_AS(plan_from_gain(k, 1.0, g, 0.5, 0.0, 0.8), DomainError);
    CHECK_THROWS_AS(plan_from_gain(k, 1.0, g, 0.5, 0.7, 1.0), DomainError);
    CHECK_THROWS_AS(plan_from_gain(k, 1.0, g, 0.5, 0.9, 0.8), OrderingError);
    // alpha must exceed theta_c for a finite propagule radius.
    CHECK_THROWS_AS(plan_from_gain(k, 1.0, g, 0.5, 0.4, 0.8),
                    AlphaBelowThreshold);
}

TEST_CASE("control region construction and membership") {
    ControlConfig c(0.5, 10.0, -1.0, 1.0);
    CHECK(c.contains(-1.0)); // the region is closed
    CHECK(c.contains(0.0));
    CHECK(c.contains(1.0));
    CHECK_FALSE(c.contains(1.0 + 1e-12));
    CHECK_FALSE(c.contains(-1.0 - 1e-12));

    ControlConfig b = ControlConfig::ball(0.5, 10.0, 2.0);
    CHECK(b.omega_lo == 0.0);
    CHECK(b.omega_hi == 2.0);
    CHECK(b.contains(0.0));
    CHECK(b.contains(2.0));
    CHECK_FALSE(b.contains(2.5));

    CHECK_THROWS_AS(ControlConfig(0.0, 10.0, -1.0, 1.0), InvalidParams);
    CHECK_THROWS_AS(ControlConfig(0.5, 0.0, -1.0, 1.0), InvalidParams);
    CHECK_THROWS_AS(ControlConfig(0.5, 10.0, 1.0, 1.0), InvalidParams);
    CHECK_THROWS_AS(ControlConfig::ball(0.5, 10.0, 0.0), InvalidParams);
}
