#pragma once

#include <functional>
#include <span>

// Small numerical kernels shared by the domain modules: adaptive
// Gauss-Legendre quadrature, sign-change bisection, a prefactored tridiagonal
// solver, a least-squares slope, and unit-sphere areas.

namespace bistctl::num {

// Integral of f over [a, b] (a <= b) by adaptive 15-point Gauss-Legendre
// panels, bisecting until the panel-vs-children discrepancy is below the
// absolute tolerance. Intended for smooth integrands.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Bisection root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs
// (else std::invalid_argument). Returns the first midpoint with
// |f(mid)| <= f_tol, or the final midpoint after max_iter halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_tol = 1e-12, int max_iter = 200);

// Solves the tridiagonal system with the Thomas algorithm:
//   lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i]
// (lower[0] and upper[n-1] are ignored). The system must not require
// pivoting (all ours are strictly diagonally dominant). On return rhs holds
// the solution; scratch needs n doubles.
void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<double> rhs,
                  std::span<double> scratch);

// Least-squares slope of y against x. Requires >= 2 points with nonzero
// x-variance (else std::invalid_argument).
double ls_slope(std::span<const double> x, std::span<const double> y);

// Surface area of the unit sphere S^{d-1} in R^d: 2*pi^{d/2} / Gamma(d/2),
// with the half-integer Gamma evaluated by recurrence (d=1 -> 2, d=2 -> 2*pi,
// d=3 -> 4*pi).
double unit_sphere_area(int dim);

} // namespace bistctl::num
