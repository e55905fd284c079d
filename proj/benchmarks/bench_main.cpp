#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "posikit/correction.hpp"
#include "posikit/diagnostics.hpp"
#include "posikit/models/allen_cahn.hpp"
#include "posikit/models/lubrication.hpp"
#include "posikit/models/porous_medium.hpp"

using namespace posikit;

namespace {

Field random_field(const Grid& g, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_active(i)) f[i] = dist(rng);
  }
  return f;
}

GridPtr square(int n, Boundary bc) {
  return Grid::build({AxisSpec{0.0, 1.0, n, bc}, AxisSpec{0.0, 1.0, n, bc}});
}

void BM_LaplacianPeriodic(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::periodic);
  Field u = random_field(*g, -1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian(u, *g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_LaplacianPeriodic)->Arg(32)->Arg(128)->Arg(512);

void BM_DivCoeffGradNeumann(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::neumann);
  Field c = random_field(*g, 0.1, 2, 2);
  Field u = random_field(*g, -1, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(apply_div_coeff_grad(c, u, *g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_DivCoeffGradNeumann)->Arg(32)->Arg(128)->Arg(512);

void BM_SolveShiftedConstant(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::periodic);
  auto op = LinearOperator::laplacian(g);
  Field rhs = random_field(*g, -1, 1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(op.solve_shifted(1e3, rhs));
}
BENCHMARK(BM_SolveShiftedConstant)->Arg(32)->Arg(128)->Arg(256);

void BM_SolveShiftedPcg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = Grid::build({AxisSpec{-5.0, 5.0, n, Boundary::dirichlet}});
  Field c = Field::sample(*g, [](double x, double) { return 2.0 * std::max(1.0 - x * x / 12.0, 0.0); });
  auto op = LinearOperator::div_coeff_grad(g, c);
  Field rhs = random_field(*g, 0, 1, 5);
  int iterations = 0;
  for (auto _ : state) {
    auto [u, report] = op.solve_shifted(1.5e3, rhs);
    iterations = report.iterations;
    benchmark::DoNotOptimize(u);
  }
  state.counters["pcg_iterations"] = iterations;
}
BENCHMARK(BM_SolveShiftedPcg)->Arg(128)->Arg(512)->Arg(2048);

void BM_LubricationGmres(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = Grid::build({AxisSpec{-1.0, 1.0, n, Boundary::periodic}});
  Field c = Field::sample(*g, [](double x, double) { return std::sqrt(1.1 - std::cos(3.14159 * x)); });
  Field rhs = random_field(*g, 0, 1, 6);
  int iterations = 0;
  for (auto _ : state) {
    auto [u, report] = solve_lubrication_shifted(1.5e4, c, rhs, g);
    iterations = report.iterations;
    benchmark::DoNotOptimize(u);
  }
  state.counters["gmres_iterations"] = iterations;
}
BENCHMARK(BM_LubricationGmres)->Arg(128)->Arg(256);

void BM_CorrectPositivity(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::periodic);
  Field ut = random_field(*g, -0.2, 1, 7);
  Field lam = random_field(*g, 0, 1, 8);
  const auto tab = bdf_tableau(2);
  for (auto _ : state) benchmark::DoNotOptimize(correct_positivity(ut, lam, tab, 1e-3, 0.0, *g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_CorrectPositivity)->Arg(32)->Arg(256);

void BM_MassCorrection(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::neumann);
  Field ut = random_field(*g, -0.2, 1, 9);
  Field base = random_field(*g, 0, 1, 10);
  const auto tab = bdf_tableau(2);
  const double target = 0.3 * g->measure();
  int iterations = 0;
  for (auto _ : state) {
    auto out = correct_mass_conserving(ut, base, tab, 1e-3, target, 0.0, *g);
    iterations = out.secant_iterations;
    benchmark::DoNotOptimize(out);
  }
  state.counters["secant_iterations"] = iterations;
}
BENCHMARK(BM_MassCorrection)->Arg(32)->Arg(256);

void BM_ExactXi(benchmark::State& state) {
  auto g = square(static_cast<int>(state.range(0)), Boundary::neumann);
  Field ut = random_field(*g, -0.2, 1, 11);
  Field base = random_field(*g, 0, 1, 12);
  const MassResidual F{&ut, &base, g.get(), 1e-3, 1.5, 0.3 * g->measure(), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_xi_exact(F));
}
BENCHMARK(BM_ExactXi)->Arg(32)->Arg(256);

void BM_AllenCahnStep(benchmark::State& state) {
  AllenCahnModel model({0.001, static_cast<int>(state.range(0)), 2});
  StepOptions o;
  o.order = 2;
  o.dt = 1e-5;
  History hist(*model.grid(), model.initial_condition(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(step(hist, model, o));
}
BENCHMARK(BM_AllenCahnStep)->Arg(32)->Arg(128);

void BM_PmeStep(benchmark::State& state) {
  PorousMediumModel model({2.0, 1.0, 1, static_cast<int>(state.range(0)), 5.0});
  StepOptions o;
  o.order = 2;
  o.dt = 1e-3;
  o.variant = Variant::mass;
  History hist(*model.grid(), model.initial_condition(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(step(hist, model, o));
}
BENCHMARK(BM_PmeStep)->Arg(128)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
