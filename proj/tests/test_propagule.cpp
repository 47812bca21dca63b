#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bistctl/errors.hpp>
#include <bistctl/geometry.hpp>
#include <bistctl/kinetics.hpp>
#include <bistctl/propagule.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace bistctl;
using namespace bistctl::propagule;

TEST_CASE("smoothstep endpoints, midpoint, and monotonicity") {
    CHECK(smoothstep(0.0) == 1.0);
    CHECK(smoothstep(1.0) == 0.0);
    CHECK(smoothstep(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = smoothstep(0.0);
    for (int i = 1; i <= 50; ++i) {
        const double cur = smoothstep(i / 50.0);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(smoothstep(-0.01), DomainError);
    CHECK_THROWS_AS(smoothstep(1.01), DomainError);
}

TEST_CASE("propagule radius anchor and growth with dimension") {
    auto k = kinetics::make_wolbachia_kinetics(
        kinetics::BiologicalParams::defaults());
    const double tc = k.theta_c();
    const double alpha = tc + 0.25 * (1.0 - tc);

    const double r1 = propagule_radius(k, 1.0, alpha, Geometry::cartesian());
    CHECK(r1 == doctest::Approx(85.91938913413901).epsilon(1e-12));

    const double r2 = propagule_radius(k, 1.0, alpha, Geometry::radial(2));
    const double r3 = propagule_radius(k, 1.0, alpha, Geometry::radial(3));
    CHECK(r1 < r2);
    CHECK(r2 < r3);

    // More diffusion asks for a larger propagule.
    CHECK(propagule_radius(k, 2.0, alpha, Geometry::cartesian()) > r1);
}

TEST_CASE("propagule radius input validation") {
    auto k = kinetics::make_wolbachia_kinetics(
        kinetics::BiologicalParams::defaults());
    CHECK_THROWS_AS(propagule_radius(k, 0.0, 0.8, Geometry::cartesian()),
                    InvalidParams);
    CHECK_THROWS_AS(propagule_radius(k, 1.0, 0.0, Geometry::cartesian()),
                    DomainError);
    CHECK_THROWS_AS(propagule_radius(k, 1.0, 1.2, Geometry::cartesian()),
                    DomainError);
    // Below or at theta_c the potential is nonpositive: no finite radius.
    CHECK_THROWS_AS(propagule_radius(k, 1.0, 0.4, Geometry::cartesian()),
                    AlphaBelowThreshold);
    CHECK_THROWS_AS(propagule_radius(k, 1.0, k.theta_c(), Geometry::cartesian()),
                    AlphaBelowThreshold);
}

TEST_CASE("trapezoid profile shape and support") {
    auto p = trapezoid_profile(0.8, 4.0);
    CHECK(p.support_radius == 5.0);
    CHECK(p(0.0) == 0.8);
    CHECK(p(4.0) == 0.8);
    CHECK(p(4.5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p(5.0) == 0.0);
    CHECK(p(100.0) == 0.0);
    CHECK_THROWS_AS(trapezoid_profile(1.5, 4.0), DomainError);
    CHECK_THROWS_AS(trapezoid_profile(0.8, 0.0), InvalidParams);
}

TEST_CASE("plateau profile shape and support") {
    const double ab = 0.82, R = 10.0, eps = 0.2;
    auto p = plateau_profile(ab, R, eps);
    CHECK(p.support_radius == doctest::Approx((1.0 + eps) * R).epsilon(1e-15));
    CHECK(p(0.0) == ab);
    CHECK(p(R) == ab);
    // Halfway across the ring the smoothstep is at 1/2.
    CHECK(p(R + 0.5 * eps * R) == doctest::Approx(0.5 * ab).epsilon(1e-14));
    CHECK(p((1.0 + eps) * R) == 0.0);
    CHECK_THROWS_AS(plateau_profile(1.0, R, eps), DomainError);
    CHECK_THROWS_AS(plateau_profile(ab, -1.0, eps), InvalidParams);
    CHECK_THROWS_AS(plateau_profile(ab, R, 0.0), InvalidParams);
}

TEST_CASE("ring width factor anchor at the default plan point") {
    const double alpha = 0.6477938850449669;
    const double alpha_bar = 0.8238969425224835;
    const double r_alpha = 85.91938913413901;
    const double eps = epsilon_star(alpha, alpha_bar, r_alpha, 0.5, 1.0,
                                    Geometry::cartesian());
    CHECK(eps == doctest::Approx(0.08720721952918191).epsilon(1e-12));
}

TEST_CASE("ring width factor solves its defining quadratic for random inputs") {
    std::mt19937 rng(77031u);
    std::uniform_real_distribution<double> ua(0.45, 0.7);
    std::uniform_real_distribution<double> gap(0.05, 0.25);
    std::uniform_real_distribution<double> um(0.05, 2.0);
    std::uniform_real_distribution<double> ur(5.0, 200.0);
    std::uniform_real_distribution<double> us(0.2, 3.0);

    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = ua(rng);
        const double alpha_bar = alpha + gap(rng);
        const double mu = um(rng);
        const double R = ur(rng);
        const double sigma = us(rng);
        const int d = 1 + static_cast<int>(rng() % 3);
        const Geometry geom = (d == 1) ? Geometry::cartesian() : Geometry::radial(d);

        const double K = R * R * mu * (1.0 - alpha_bar) / (sigma * alpha_bar);
        const double expect = oracles::epsilon_star_oracle(K, d);
        const double got = epsilon_star(alpha, alpha_bar, R, mu, sigma, geom);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        // And the root actually satisfies the sufficiency identity.
        const double lhs = 6.0 / (got * got) + 1.5 * (d - 1) / got;
        CHECK(lhs == doctest::Approx(K).epsilon(1e-9));
    }
}

TEST_CASE("ring width factor input validation") {
    const Geometry g = Geometry::cartesian();
    CHECK_THROWS_AS(epsilon_star(0.0, 0.8, 10.0, 0.5, 1.0, g), DomainError);
    CHECK_THROWS_AS(epsilon_star(0.6, 1.0, 10.0, 0.5, 1.0, g), DomainError);
    CHECK_THROWS_AS(epsilon_star(0.8, 0.6, 10.0, 0.5, 1.0, g), OrderingError);
    CHECK_THROWS_AS(epsilon_star(0.6, 0.8, 0.0, 0.5, 1.0, g), InvalidParams);
    CHECK_THROWS_AS(epsilon_star(0.6, 0.8, 10.0, 0.0, 1.0, g), InvalidParams);
    CHECK_THROWS_AS(epsilon_star(0.6, 0.8, 10.0, 0.5, -1.0, g), InvalidParams);
}

TEST_CASE("discrete energy matches the closed form for a cubic trapezoid") {
    const double theta = 0.3, sigma = 1.0, alpha = 0.8, R = 4.0;
    auto k = kinetics::make_cubic_kinetics(theta);
    // h = 0.002 puts the profile kinks at +-4 and +-5 exactly on nodes, so
    // the piecewise-linear gradient term is exact and only the trapezoid
    // F-term carries O(h^2) error on the two ramps.
    Grid grid = Grid::with_spacing(-9.0, 9.0, 0.002);
    auto res = energy(trapezoid_profile(alpha, R), k, sigma,
                      Geometry::cartesian(), grid);
    const double expect =
        oracles::cubic_trapezoid_energy_1d(sigma, alpha, R, theta);
    CHECK_FALSE(res.support_truncated);
    CHECK(std::abs(res.value - expect) <= 1e-5);
}

TEST_CASE("cartesian energy equals one-dimensional radial energy") {
    auto k = kinetics::make_cubic_kinetics(0.3);
    auto prof = trapezoid_profile(0.8, 4.0);
    Grid cart = Grid::with_spacing(-9.0, 9.0, 0.01);
    Grid rad = Grid::with_spacing(0.0, 9.0, 0.01);
    const auto ec = energy(prof, k, 1.0, Geometry::cartesian(), cart);
    const auto er = energy(prof, k, 1.0, Geometry::radial(1), rad);
    CHECK(ec.value == doctest::Approx(er.value).epsilon(1e-12));
}

TEST_CASE("energy flags profiles whose support leaves the grid") {
    auto k = kinetics::make_cubic_kinetics(0.3);
    auto prof = trapezoid_profile(0.8, 4.0); // support radius 5
    Grid tight = Grid::with_spacing(-3.0, 3.0, 0.01);
    CHECK(energy(prof, k, 1.0, Geometry::cartesian(), tight).support_truncated);
    Grid wide = Grid::with_spacing(-6.0, 6.0, 0.01);
    CHECK_FALSE(energy(prof, k, 1.0, Geometry::cartesian(), wide).support_truncated);
}

TEST_CASE("field-based and profile-based energy agree") {
    auto k = kinetics::make_cubic_kinetics(0.3);
    auto prof = trapezoid_profile(0.8, 4.0);
    Grid grid = Grid::with_spacing(0.0, 9.0, 0.01);
    const Geometry geom = Geometry::radial(2);
    Field f = sample_profile(prof, grid, geom);
    CHECK(energy(f, k, 1.0, geom, grid).value ==
          energy(prof, k, 1.0, geom, grid).value);
}

TEST_CASE("cartesian sampling is even in x") {
    auto prof = trapezoid_profile(0.8, 4.0);
    Grid grid = Grid::with_spacing(-6.0, 6.0, 0.5);
    Field f = sample_profile(prof, grid, Geometry::cartesian());
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        CHECK(f.values[static_cast<std::size_t>(i)] ==
              f.values[static_cast<std::size_t>(n - 1 - i)]);
    // Radial grids use r directly.
    Grid rg = Grid::with_spacing(0.0, 6.0, 0.5);
    Field fr = sample_profile(prof, rg, Geometry::radial(1));
    CHECK(fr.values[0] == 0.8);
    CHECK(fr.values.back() == 0.0);
}
