// Microbenchmarks for the kinetics hot path, the planner, one solver step at
// typical grid sizes, the energy functional, and a short end-to-end run.

#include <bistctl/control.hpp>
#include <bistctl/geometry.hpp>
#include <bistctl/kinetics.hpp>
#include <bistctl/propagule.hpp>
#include <bistctl/solver.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <optional>
#include <vector>

using namespace bistctl;

namespace {

kinetics::Kinetics default_kinetics() {
    return kinetics::make_wolbachia_kinetics(
        kinetics::BiologicalParams::defaults());
}

Field gaussian_field(const Grid& grid, double width) {
    Field f;
    f.values.resize(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.node(i);
        f.values[static_cast<std::size_t>(i)] =
            0.8 * std::exp(-x * x / (width * width));
    }
    return f;
}

void BM_reaction(benchmark::State& state) {
    auto k = default_kinetics();
    double u = 0.0;
    for (auto _ : state) {
        u += 1e-4;
        if (u >= 1.0)
            u = 0.0;
        benchmark::DoNotOptimize(k.reaction(u));
    }
}
BENCHMARK(BM_reaction);

void BM_potential(benchmark::State& state) {
    auto k = default_kinetics();
    double u = 0.0;
    for (auto _ : state) {
        u += 1e-4;
        if (u >= 1.0)
            u = 0.0;
        benchmark::DoNotOptimize(k.potential(u));
    }
}
BENCHMARK(BM_potential);

void BM_theta_c(benchmark::State& state) {
    const auto p = kinetics::BiologicalParams::defaults();
    for (auto _ : state) {
        // theta_c is cached per instance, so rebuild to time the solve.
        auto k = kinetics::make_wolbachia_kinetics(p);
        benchmark::DoNotOptimize(k.theta_c());
    }
}
BENCHMARK(BM_theta_c);

void BM_plan_from_gain(benchmark::State& state) {
    auto k = default_kinetics();
    k.theta_c(); // warm the cache; the planner's own work is what's timed
    const Geometry geom = Geometry::radial(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(control::plan_from_gain(k, 1.0, geom, 0.5));
}
BENCHMARK(BM_plan_from_gain);

void BM_step_cartesian_801(benchmark::State& state) {
    auto k = default_kinetics();
    const Geometry geom = Geometry::cartesian();
    Grid grid = Grid::with_spacing(-20.0, 20.0, 0.05);
    solver::Stepper st(k, 1.0, geom, grid,
                       control::ControlConfig(0.5, 1e9, -1.0, 1.0), 0.05,
                       solver::Boundary::neumann);
    Field u = gaussian_field(grid, 2.0);
    for (auto _ : state) {
        st.step(u);
        benchmark::DoNotOptimize(u.values.data());
    }
}
BENCHMARK(BM_step_cartesian_801);

void BM_step_radial_2001(benchmark::State& state) {
    auto k = default_kinetics();
    const Geometry geom = Geometry::radial(3);
    Grid grid = Grid::with_spacing(0.0, 100.0, 0.05);
    solver::Stepper st(k, 1.0, geom, grid, std::nullopt, 0.05,
                       solver::Boundary::neumann);
    Field u = gaussian_field(grid, 20.0);
    for (auto _ : state) {
        st.step(u);
        benchmark::DoNotOptimize(u.values.data());
    }
}
BENCHMARK(BM_step_radial_2001);

void BM_energy(benchmark::State& state) {
    auto k = default_kinetics();
    const Geometry geom = Geometry::radial(2);
    Grid grid = Grid::with_spacing(0.0, 100.0, 0.05);
    const Field u = gaussian_field(grid, 20.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(propagule::energy(u, k, 1.0, geom, grid));
}
BENCHMARK(BM_energy);

void BM_simulate_short(benchmark::State& state) {
    auto k = default_kinetics();
    const Geometry geom = Geometry::cartesian();
    Grid grid = Grid::with_spacing(-10.0, 10.0, 0.05);
    solver::SolverConfig cfg;
    cfg.dt = 0.05;
    cfg.t_max = 5.0;
    cfg.snapshot_stride = 20;
    cfg.record_energy = false;
    for (auto _ : state) {
        Field zero;
        zero.values.assign(static_cast<std::size_t>(grid.n), 0.0);
        benchmark::DoNotOptimize(
            solver::simulate(k, 1.0, control::ControlConfig(0.5, 10.0, -1.0, 1.0),
                             geom, grid, cfg, std::move(zero)));
    }
}
BENCHMARK(BM_simulate_short);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv))
        return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
