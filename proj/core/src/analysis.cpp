#include "bistctl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bistctl/numerics.hpp"
#include "bistctl/propagule.hpp"

namespace bistctl::analysis {

const char* to_string(Axis axis) {
    switch (axis) {
    case Axis::mu: return "mu";
    case Axis::omega_halfwidth: return "omega_halfwidth";
    case Axis::horizon: return "horizon";
    }
    return "mu";
}

std::optional<double> front_position(const Field& field, const Grid& grid,
                                     const Geometry& geom, double level) {
    (void)geom; // the scan is the same in both geometries: outermost crossing
    const auto& u = field.values;
    if (static_cast<int>(u.size()) != grid.n)
        throw GridMismatch("front_position: field size does not match the grid");

    for (int i = grid.n - 2; i >= 0; --i) {
        if (u[i] >= level && u[i + 1] < level) {
            const double frac = (u[i] - level) / (u[i] - u[i + 1]);
            return grid.node(i) + frac * grid.h();
        }
    }
    return std::nullopt;
}

double wave_speed(const FrontTrace& trace, double window, double min_time) {
    if (trace.empty())
        throw InsufficientData("wave_speed: empty front trace");
    const double t_last = trace.back().first;
    const double t_from = std::max(t_last - window, min_time);

    std::vector<double> t, x;
    for (const auto& [ti, xi] : trace) {
        if (ti >= t_from) {
            t.push_back(ti);
            x.push_back(xi);
        }
    }
    if (t.size() < 10)
        throw InsufficientData("wave_speed: only " + std::to_string(t.size()) +
                               " front samples in the fitting window; need 10");
    return num::ls_slope(t, x);
}

ThresholdResult threshold_search(const std::function<solver::Verdict(double)>& probe,
                                 Axis axis, double lo, double hi, double tol,
                                 Policy policy) {
    if (!(lo < hi))
        throw InvalidParams("threshold_search: need lo < hi");
    if (!(tol > 0.0))
        throw InvalidParams("threshold_search: tol must be positive");

    ThresholdResult res;
    res.axis = axis;
    res.tol = tol;

    auto run = [&](double v) {
        const auto verdict = probe(v);
        res.probes.emplace_back(v, verdict);
        return verdict;
    };

    const auto v_lo = run(lo);
    if (v_lo != solver::Verdict::extinction)
        throw BadBracket("threshold_search: probe at lo = " + std::to_string(lo) +
                         " is not extinct");
    const auto v_hi = run(hi);
    if (v_hi != solver::Verdict::invasion)
        throw BadBracket("threshold_search: probe at hi = " + std::to_string(hi) +
                         " does not invade");

    // Confirmed bracket endpoints are only moved onto probes with a definite
    // verdict; under the pessimistic policy an undecided probe narrows the
    // search interval from below without being claimed as extinct.
    double search_lo = lo, search_hi = hi;
    res.lo = lo;
    res.hi = hi;
    while (search_hi - search_lo > tol) {
        const double mid = 0.5 * (search_lo + search_hi);
        const auto v = run(mid);
        if (v == solver::Verdict::invasion) {
            search_hi = mid;
            res.hi = mid;
        } else if (v == solver::Verdict::extinction) {
            search_lo = mid;
            res.lo = mid;
        } else {
            ++res.undecided_count;
            if (policy == Policy::strict)
                throw NonMonotone(std::string("threshold_search: undecided verdict "
                                              "at ") +
                                  to_string(axis) + " = " + std::to_string(mid));
            search_lo = mid;
        }
    }
    res.critical = 0.5 * (search_lo + search_hi);
    return res;
}

EnergyTrace energy_trace(const solver::SimResult& result,
                         const kinetics::Kinetics& k, double sigma) {
    EnergyTrace trace;
    trace.points.reserve(result.snapshots.size());
    for (const auto& snap : result.snapshots) {
        const auto e = propagule::energy(snap, k, sigma, result.geom, result.grid);
        trace.points.emplace_back(snap.time, e.value);
        trace.any_support_truncated |= e.support_truncated;
    }
    return trace;
}

CompareReport compare_runs(const solver::SimResult& a, const solver::SimResult& b,
                           double tol) {
    if (a.grid.n != b.grid.n || std::abs(a.grid.x_min - b.grid.x_min) > 1e-9 ||
        std::abs(a.grid.x_max - b.grid.x_max) > 1e-9)
        throw GridMismatch("compare_runs: runs use different grids");
    if (a.geom.mode != b.geom.mode || a.geom.dim != b.geom.dim)
        throw GridMismatch("compare_runs: runs use different geometries");
    if (a.snapshots.size() != b.snapshots.size())
        throw GridMismatch("compare_runs: runs have different snapshot counts");

    CompareReport rep;
    for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
        const auto& fa = a.snapshots[s];
        const auto& fb = b.snapshots[s];
        if (std::abs(fa.time - fb.time) > 1e-9)
            throw GridMismatch("compare_runs: snapshot times diverge at index " +
                               std::to_string(s));
        for (int i = 0; i < a.grid.n; ++i) {
            const double excess = fa.values[i] - fb.values[i];
            if (excess > rep.max_violation) {
                rep.max_violation = excess;
                rep.at_time = fa.time;
                rep.at_x = a.grid.node(i);
            }
        }
        ++rep.snapshots_checked;
    }
    rep.ordered = rep.max_violation <= tol;
    return rep;
}

} // namespace bistctl::analysis
