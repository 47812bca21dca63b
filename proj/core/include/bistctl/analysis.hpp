// Post-processing of simulation output: front tracking, wave-speed
// estimation, threshold searches along a control parameter, energy traces,
// and pointwise comparison of two runs.
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bistctl/errors.hpp"
#include "bistctl/geometry.hpp"
#include "bistctl/kinetics.hpp"
#include "bistctl/solver.hpp"

namespace bistctl::analysis {

/// (time, front position) samples, one per snapshot that has a front.
using FrontTrace = std::vector<std::pair<double, double>>;

/// Position of the rightmost (cartesian) / outermost (radial) down-crossing
/// of `level`: the largest x where the field passes from >= level to < level,
/// located by linear interpolation between the bracketing nodes. Returns
/// nullopt when the field never crosses the level from above (all high, all
/// low, or monotone increasing toward the boundary).
std::optional<double> front_position(const Field& field, const Grid& grid,
                                     const Geometry& geom, double level = 0.5);

/// Least-squares slope of position vs. time over the trailing part of a
/// front trace: samples with t >= max(t_last - window, min_time). The floor
/// lets callers exclude the transient while the control is still shaping the
/// profile. Throws InsufficientData when fewer than 10 samples qualify.
double wave_speed(const FrontTrace& trace, double window, double min_time = 0.0);

/// Which scalar a threshold search varies.
enum class Axis { mu, omega_halfwidth, horizon };

const char* to_string(Axis axis);

/// How to handle probes that come back undecided. `strict` treats them as a
/// broken bracket and throws; `pessimistic` treats them like extinction
/// (the invasion claim is only made for confirmed invasions), so the search
/// still converges but the returned bracket may be conservative.
enum class Policy { strict, pessimistic };

struct ThresholdResult {
    Axis axis;
    double lo;       ///< largest probed value confirmed extinct
    double hi;       ///< smallest probed value confirmed invading
    double critical; ///< midpoint of the final search bracket
    double tol;      ///< requested bracket width
    std::vector<std::pair<double, solver::Verdict>> probes; ///< in probe order
    int undecided_count = 0;
};

/// Bisect for the critical parameter value separating extinction from
/// invasion. `probe` runs one simulation at the given parameter value and
/// reports the verdict; the endpoints must come back extinct at `lo` and
/// invading at `hi` (BadBracket otherwise). A probe that contradicts
/// monotonicity cannot occur inside a bisection, but an undecided probe
/// under Policy::strict throws NonMonotone naming the offending value.
ThresholdResult threshold_search(const std::function<solver::Verdict(double)>& probe,
                                 Axis axis, double lo, double hi, double tol,
                                 Policy policy = Policy::strict);

struct EnergyTrace {
    std::vector<std::pair<double, double>> points; ///< (time, energy)
    bool any_support_truncated = false;
};

/// Energy of every stored snapshot, including those taken while the control
/// was active (unlike SimResult::energy, which only records once the
/// descent property is expected to hold).
EnergyTrace energy_trace(const solver::SimResult& result,
                         const kinetics::Kinetics& k, double sigma);

struct CompareReport {
    bool ordered = true;      ///< a <= b + tol everywhere
    double max_violation = 0; ///< max over nodes/times of (a - b), if positive
    double at_time = 0;
    double at_x = 0;
    int snapshots_checked = 0;
};

/// Verify the pointwise ordering a <= b (up to `tol`) across two runs on the
/// same grid and snapshot schedule. Used to check comparison-principle
/// claims numerically. Throws GridMismatch when the runs are not comparable.
CompareReport compare_runs(const solver::SimResult& a, const solver::SimResult& b,
                           double tol = 1e-9);

} // namespace bistctl::analysis
