#pragma once

// Reference implementations used by the tests. Everything in this header is
// written directly from the defining formulas (or as a deliberately different
// algorithm, e.g. trapezoid sums instead of adaptive quadrature), so agreement
// with the library is a meaningful check rather than a tautology.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// Reaction term and derivative, straight from the population model.

// f(p) = delta*death*s_h * p(1-p)(p-theta) / (s_h p^2 - (s_f+s_h) p + 1),
// theta = (s_f + delta - 1) / (delta * s_h).
inline double wolbachia_theta(double s_f, double s_h, double delta) {
    return (s_f + delta - 1.0) / (delta * s_h);
}

inline double wolbachia_f(double p, double s_f, double s_h, double delta,
                          double death) {
    const double theta = wolbachia_theta(s_f, s_h, delta);
    const double num = delta * death * s_h * p * (1.0 - p) * (p - theta);
    const double den = s_h * p * p - (s_f + s_h) * p + 1.0;
    return num / den;
}

// Quotient rule: f = N/D, N = c*p(1-p)(p-theta), D = s_h p^2 - (s_f+s_h)p + 1.
inline double wolbachia_fprime(double p, double s_f, double s_h, double delta,
                               double death) {
    const double theta = wolbachia_theta(s_f, s_h, delta);
    const double c = delta * death * s_h;
    const double N = c * p * (1.0 - p) * (p - theta);
    const double Np = c * ((1.0 - 2.0 * p) * (p - theta) + p * (1.0 - p));
    const double D = s_h * p * p - (s_f + s_h) * p + 1.0;
    const double Dp = 2.0 * s_h * p - (s_f + s_h);
    return (Np * D - N * Dp) / (D * D);
}

// ---------------------------------------------------------------------------
// Potential by composite trapezoid rule with a dense fixed mesh.
//
// Prefix sums over `panels` equal panels of [0,1] give O(1) evaluation of
// F(z) = int_0^z f for any z in [0,1] (the final partial panel is itself a
// trapezoid). With 1e6 panels the error is O(h^2) ~ 1e-12 * |f''|.

class TrapezoidPotential {
  public:
    TrapezoidPotential(std::function<double(double)> f, std::size_t panels = 1000000)
        : f_(std::move(f)), h_(1.0 / static_cast<double>(panels)) {
        prefix_.resize(panels + 1);
        fvals_.resize(panels + 1);
        prefix_[0] = 0.0;
        fvals_[0] = f_(0.0);
        for (std::size_t i = 1; i <= panels; ++i) {
            const double x = static_cast<double>(i) * h_;
            fvals_[i] = f_(x <= 1.0 ? x : 1.0);
            prefix_[i] = prefix_[i - 1] + 0.5 * (fvals_[i - 1] + fvals_[i]) * h_;
        }
    }

    double operator()(double z) const {
        if (!(z >= 0.0 && z <= 1.0))
            throw std::invalid_argument("TrapezoidPotential: z outside [0,1]");
        const auto i = static_cast<std::size_t>(z / h_);
        if (i >= prefix_.size() - 1)
            return prefix_.back();
        const double x_i = static_cast<double>(i) * h_;
        return prefix_[i] + 0.5 * (fvals_[i] + f_(z)) * (z - x_i);
    }

  private:
    std::function<double(double)> f_;
    double h_;
    std::vector<double> prefix_;
    std::vector<double> fvals_;
};

// ---------------------------------------------------------------------------
// Bracketed secant (regula falsi with a bisection safeguard). Keeps a sign
// change between lo and hi; falls back to the midpoint whenever the secant
// step degenerates or leaves the bracket.

inline double bracketed_secant(const std::function<double(double)>& f, double lo,
                               double hi, double x_tol = 1e-14,
                               int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bracketed_secant: no sign change");
    double x = lo;
    for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
        const double denom = fhi - flo;
        x = (std::abs(denom) > 0.0) ? (lo * fhi - hi * flo) / denom
                                    : 0.5 * (lo + hi);
        if (!(x > lo && x < hi))
            x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0)
            return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Closed forms for the cubic nonlinearity f(p) = p(1-p)(p-theta). These are
// exact antiderivatives/roots worked out by hand, used to validate the
// numerical potential, theta_c, and energy machinery on a case where no
// quadrature is needed.

inline double cubic_f(double p, double theta) {
    return p * (1.0 - p) * (p - theta);
}

// F(z) = int_0^z p(1-p)(p-theta) dp = -theta z^2/2 + (1+theta) z^3/3 - z^4/4.
inline double cubic_potential(double z, double theta) {
    return z * z * (-theta / 2.0 + (1.0 + theta) * z / 3.0 - z * z / 4.0);
}

// Positive root of F in (theta, 1): F(z) = z^2 * q(z) with
// q(z) = -theta/2 + (1+theta) z/3 - z^2/4; the relevant quadratic root is
// z = (2(1+theta) - sqrt(4(1+theta)^2 - 18 theta)) / 3.
inline double cubic_theta_c(double theta) {
    const double b = 1.0 + theta;
    return (2.0 * b - std::sqrt(4.0 * b * b - 18.0 * theta)) / 3.0;
}

// int_0^1 F(alpha * s) ds for the cubic potential (used by the closed-form
// trapezoid-profile energy below): integrate term by term.
inline double cubic_ramp_mean_potential(double alpha, double theta) {
    return -theta * alpha * alpha / 6.0 +
           (1.0 + theta) * alpha * alpha * alpha / 12.0 -
           alpha * alpha * alpha * alpha / 20.0;
}

// Exact 1-d energy of the trapezoid profile (plateau alpha on [-R, R], linear
// ramps of width 1) on a domain that contains the support:
//   E = 2 * [ sigma*alpha^2/2 - R*F(alpha) - int_0^1 F(alpha s) ds ].
inline double cubic_trapezoid_energy_1d(double sigma, double alpha, double R,
                                        double theta) {
    return 2.0 * (0.5 * sigma * alpha * alpha -
                  R * cubic_potential(alpha, theta) -
                  cubic_ramp_mean_potential(alpha, theta));
}

// ---------------------------------------------------------------------------
// Profile-margin root: the margin condition
//   6/eps^2 + (3/2)(d-1)/eps = K,  K = R^2 mu (1-ab) / (sigma ab),
// is a quadratic in eps once multiplied through by eps^2:
//   K eps^2 - c eps - 6 = 0, c = (3/2)(d-1),
// whose positive root is (c + sqrt(c^2 + 24K)) / (2K).

inline double epsilon_star_oracle(double K, int dim) {
    const double c = 1.5 * (static_cast<double>(dim) - 1.0);
    return (c + std::sqrt(c * c + 24.0 * K)) / (2.0 * K);
}

// ---------------------------------------------------------------------------
// Unit-sphere surface areas |S^{d-1}| for small d, from the standard table.

inline double sphere_area_table(int dim) {
    constexpr double pi = 3.14159265358979323846;
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    case 4: return 2.0 * pi * pi;
    case 5: return 8.0 * pi * pi / 3.0;
    default: throw std::invalid_argument("sphere_area_table: dim out of table");
    }
}

// ---------------------------------------------------------------------------
// Tiny CSV reader and whole-file slurp for checking emitted artifacts.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_csv: empty file " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("slurp: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace oracles
