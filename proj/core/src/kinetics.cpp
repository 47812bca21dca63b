#include "bistctl/kinetics.hpp"

#include <cmath>
#include <mutex>
#include <string>
#include <utility>

#include "bistctl/numerics.hpp"

namespace bistctl::kinetics {

namespace {

void require_fraction(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(who) + ": argument must lie in [0,1], got " +
                          std::to_string(p));
}

} // namespace

BiologicalParams::BiologicalParams(double s_f_, double s_h_, double delta_,
                                   double death_rate_, double sigma_)
    : s_f(s_f_), s_h(s_h_), delta(delta_), death_rate(death_rate_), sigma(sigma_) {
    if (!(s_f >= 0.0 && s_f < 1.0))
        throw InvalidParams("BiologicalParams: s_f must lie in [0,1), got " +
                            std::to_string(s_f));
    if (!(s_h > 0.0 && s_h <= 1.0))
        throw InvalidParams("BiologicalParams: s_h must lie in (0,1], got " +
                            std::to_string(s_h));
    if (!(delta >= 1.0))
        throw InvalidParams("BiologicalParams: delta must be >= 1, got " +
                            std::to_string(delta));
    if (!(death_rate > 0.0))
        throw InvalidParams("BiologicalParams: death_rate must be positive, got " +
                            std::to_string(death_rate));
    if (!(sigma > 0.0))
        throw InvalidParams("BiologicalParams: sigma must be positive, got " +
                            std::to_string(sigma));
    if (!(s_f + delta - 1.0 < delta * s_h))
        throw InvalidParams(
            "BiologicalParams: requires s_f + delta - 1 < delta*s_h "
            "(otherwise the unstable zero theta leaves (0,1))");
}

BiologicalParams BiologicalParams::defaults() {
    return BiologicalParams(0.1, 0.3, 1.0, 1.0, 1.0);
}

struct Kinetics::Impl {
    std::function<double(double)> f;
    double theta = 0.0;
    std::optional<BiologicalParams> params;

    mutable std::once_flag theta_c_once;
    mutable double theta_c_value = 0.0;
    mutable std::once_flag lipschitz_once;
    mutable double lipschitz_value = 0.0;
};

Kinetics::Kinetics(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double Kinetics::reaction(double p) const {
    require_fraction(p, "reaction");
    return impl_->f(p);
}

double Kinetics::theta() const { return impl_->theta; }

double Kinetics::potential(double z) const {
    require_fraction(z, "potential");
    return num::integrate(impl_->f, 0.0, z, 1e-12);
}

double Kinetics::theta_c() const {
    // std::call_once re-runs the initializer if it throws, so a NotInvadable
    // kinetics keeps throwing on every call and an invadable one computes
    // exactly once.
    std::call_once(impl_->theta_c_once, [this] {
        if (potential(1.0) <= 0.0)
            throw NotInvadable(
                "theta_c: F(1) <= 0, the infected state cannot invade");
        const double lo = impl_->theta + 1e-9;
        const double hi = 1.0 - 1e-9;
        impl_->theta_c_value =
            num::bisect([this](double z) { return potential(z); }, lo, hi, 1e-12, 200);
    });
    return impl_->theta_c_value;
}

double Kinetics::lipschitz_bound() const {
    std::call_once(impl_->lipschitz_once, [this] {
        constexpr int kIntervals = 10000;
        const double h = 1.0 / kIntervals;
        double max_slope = 0.0;
        double prev = impl_->f(0.0);
        for (int i = 1; i <= kIntervals; ++i) {
            const double cur = impl_->f(i * h);
            max_slope = std::max(max_slope, std::abs(cur - prev) / h);
            prev = cur;
        }
        impl_->lipschitz_value = 1.1 * max_slope;
    });
    return impl_->lipschitz_value;
}

const std::optional<BiologicalParams>& Kinetics::params() const {
    return impl_->params;
}

Kinetics make_wolbachia_kinetics(const BiologicalParams& p) {
    const double theta = (p.s_f + p.delta - 1.0) / (p.delta * p.s_h);
    if (!(theta > 0.0 && theta < 1.0))
        throw ThetaOutOfRange("make_wolbachia_kinetics: theta = " +
                              std::to_string(theta) + " is not inside (0,1)");

    // Denominator D(p) = s_h p^2 - (s_f+s_h) p + 1. Its minimum over [0,1]
    // is at the parabola vertex if that lies inside, else at an endpoint.
    // For validated params the minimum is always positive: D(0) = 1,
    // D(1) = 1 - s_f > 0, and an interior vertex with D <= 0 would need
    // (s_f+s_h)^2 >= 4 s_h, impossible with s_f < 1 and s_h <= 1 under the
    // theta < 1 condition. The guard stays as defense in depth.
    const double b = p.s_f + p.s_h;
    const double vertex = b / (2.0 * p.s_h);
    double den_min = std::min(1.0, 1.0 - b + p.s_h); // D(0), D(1)
    if (vertex > 0.0 && vertex < 1.0)
        den_min = std::min(den_min, 1.0 - 0.25 * b * b / p.s_h); // D(vertex)
    if (!(den_min > 0.0))
        throw DenominatorVanishes(
            "make_wolbachia_kinetics: kinetics denominator reaches " +
            std::to_string(den_min) + " on [0,1]");

    auto impl = std::make_shared<Kinetics::Impl>();
    const double scale = p.delta * p.death_rate * p.s_h;
    const double s_f = p.s_f;
    const double s_h = p.s_h;
    impl->f = [scale, s_f, s_h, theta](double u) {
        return scale * u * (1.0 - u) * (u - theta) /
               (s_h * u * u - (s_f + s_h) * u + 1.0);
    };
    impl->theta = theta;
    impl->params = p;
    return Kinetics(std::move(impl));
}

Kinetics make_cubic_kinetics(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ThetaOutOfRange("make_cubic_kinetics: theta = " + std::to_string(theta) +
                              " is not inside (0,1)");
    auto impl = std::make_shared<Kinetics::Impl>();
    impl->f = [theta](double u) { return u * (1.0 - u) * (u - theta); };
    impl->theta = theta;
    return Kinetics(std::move(impl));
}

Kinetics from_function(std::function<double(double)> f, double theta) {
    auto impl = std::make_shared<Kinetics::Impl>();
    impl->f = std::move(f);
    impl->theta = theta;
    return Kinetics(std::move(impl));
}

} // namespace bistctl::kinetics
