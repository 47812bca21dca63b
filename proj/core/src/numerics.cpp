#include "bistctl/numerics.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bistctl::num {

namespace {

// 15-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr int kGlOrder = 15;
constexpr double kGlNodes[kGlOrder][2] = {
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {0.00000000000000000e+00, 2.02578241925560898e-01},
    {2.01194093997434514e-01, 1.98431485327111246e-01},
    {3.94151347077563385e-01, 1.86161000015561878e-01},
    {5.70972172608538830e-01, 1.66269205816993781e-01},
    {7.24417731360170070e-01, 1.39570677926153908e-01},
    {8.48206583410427206e-01, 1.07159220467171773e-01},
    {9.37273392400705951e-01, 7.03660474881080689e-02},
    {9.87992518020485377e-01, 3.07532419961186465e-02},
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& nw : kGlNodes)
        sum += nw[1] * f(mid + half * nw[0]);
    return half * sum;
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol || depth >= 48)
        return refined;
    return integrate_rec(f, a, mid, left, 0.5 * tol, depth + 1) +
           integrate_rec(f, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(b >= a))
        throw std::invalid_argument("integrate: requires a <= b");
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("integrate: tolerance must be positive");
    if (a == b)
        return 0.0;
    return integrate_rec(f, a, b, gl15(f, a, b), abs_tol, 0);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_tol, int max_iter) {
    if (!(lo < hi))
        throw std::invalid_argument("bisect: requires lo < hi");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: f(lo) and f(hi) have the same sign");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= f_tol)
            return mid;
        if ((fm > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return mid;
}

void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<double> rhs,
                  std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || scratch.size() < n)
        throw std::invalid_argument("thomas_solve: inconsistent span sizes");
    if (n == 0)
        return;

    // Forward elimination; scratch holds the modified superdiagonal.
    double denom = diag[0];
    if (denom == 0.0)
        throw std::logic_error("thomas_solve: zero pivot (internal fault)");
    scratch[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * scratch[i - 1];
        if (denom == 0.0)
            throw std::logic_error("thomas_solve: zero pivot (internal fault)");
        scratch[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    // Back substitution.
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= scratch[i] * rhs[i + 1];
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n)
        throw std::invalid_argument("ls_slope: size mismatch");
    if (n < 2)
        throw std::invalid_argument("ls_slope: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("ls_slope: zero variance in x");
    return sxy / sxx;
}

double unit_sphere_area(int dim) {
    if (dim < 1)
        throw std::invalid_argument("unit_sphere_area: dim must be >= 1, got " +
                                    std::to_string(dim));
    // Gamma(dim/2) by the recurrence Gamma(z+1) = z*Gamma(z) from the exact
    // half-integer base cases Gamma(1/2) = sqrt(pi), Gamma(1) = 1.
    double gamma = (dim % 2 == 1) ? std::sqrt(std::numbers::pi) : 1.0;
    for (int twice_z = dim; twice_z >= 3; twice_z -= 2)
        gamma *= 0.5 * (twice_z - 2);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / gamma;
}

} // namespace bistctl::num
