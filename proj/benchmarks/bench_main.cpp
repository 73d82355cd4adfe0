#include "abreu/coupled_solver.hpp"
#include "abreu/ellipsoid.hpp"
#include "abreu/lma_solver.hpp"
#include "abreu/ma_solver.hpp"
#include "abreu/oracle.hpp"
#include "abreu/regularity.hpp"
#include "abreu/sections.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <random>

namespace {

using namespace abreu;

std::shared_ptr<const Domain> unit_disk() { return std::make_shared<const Domain>(Domain::disk(Point::Zero(), 1.0)); }

double spacing(const benchmark::State& state) { return 1.0 / static_cast<double>(state.range(0)); }

void BM_GridBuild(benchmark::State& state) {
  const auto domain = unit_disk();
  for (auto _ : state) benchmark::DoNotOptimize(Grid::build(domain, spacing(state)));
}
BENCHMARK(BM_GridBuild)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_MASolve(benchmark::State& state) {
  const GridPtr grid = Grid::build(unit_disk(), spacing(state));
  const ExactSolution s = fixture("radial", 0.25);
  const MAProblem problem{grid, ScalarField::sample(grid, [&](const Point& p) { return s.det(p); }), s.u_function()};
  for (auto _ : state) benchmark::DoNotOptimize(solve_ma(problem));
}
BENCHMARK(BM_MASolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LMASolve(benchmark::State& state) {
  const GridPtr grid = Grid::build(unit_disk(), spacing(state));
  const ExactSolution s = fixture("radial", 0.25);
  const ScalarField u = ScalarField::sample(grid, s.u_function());
  const LMAProblem problem =
      LMAProblem::from(cofactor_field(u), ScalarField::sample(grid, s.f_function()), s.w_function());
  LMAOptions options;
  options.estimate_condition = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lma(problem, options));
}
BENCHMARK(BM_LMASolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CoupledSolve(benchmark::State& state) {
  const GridPtr grid = Grid::build(unit_disk(), spacing(state));
  const ExactSolution s = fixture("radial_mild", 0.25);
  const ProblemData data{grid, 0.25, ScalarField::sample(grid, s.f_function()), s.u_function(), s.w_function()};
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(data));
}
BENCHMARK(BM_CoupledSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Khachiyan(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<Point> pts;
  for (int k = 0; k < state.range(0); ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(rng() % 100000) / 100000.0;
    const double r = static_cast<double>(rng() % 100000) / 100000.0;
    pts.emplace_back(2.0 * r * std::cos(t), 0.5 * r * std::sin(t));
  }
  const std::vector<Point> hull = convex_hull(pts);
  for (auto _ : state) benchmark::DoNotOptimize(minimum_volume_ellipse(hull));
}
BENCHMARK(BM_Khachiyan)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SectionExtract(benchmark::State& state) {
  const GridPtr grid = Grid::build(unit_disk(), spacing(state));
  const ScalarField u = ScalarField::sample(grid, fixture("paraboloid", 0.25).u_function());
  for (auto _ : state) benchmark::DoNotOptimize(extract_section(u, Point(0.1, -0.2), 0.1));
}
BENCHMARK(BM_SectionExtract)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_HolderFit(benchmark::State& state) {
  const GridPtr grid = Grid::build(unit_disk(), spacing(state));
  const ScalarField v = ScalarField::sample(grid, [](const Point& p) { return std::sqrt(std::abs(p.x())); });
  for (auto _ : state) benchmark::DoNotOptimize(fit_holder_exponent(v));
}
BENCHMARK(BM_HolderFit)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
