#include <benchmark/benchmark.h>

#include "coarse/oracle.hpp"
#include "coarse/pricing.hpp"
#include "coarse/solver_convex.hpp"
#include "coarse/solver_sshaped.hpp"

using namespace coarse;

namespace {

const FunctionModel& beta_prior() {
  static const FunctionModel f = FunctionModel::beta(2.0, 3.0).as_density();
  return f;
}

const ValueModel& quad_value() {
  static const ValueModel u = ValueModel::quadratic();
  return u;
}

}  // namespace

static void BM_ConditionalMean(benchmark::State& state) {
  const FunctionModel& f = beta_prior();
  double a = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_mean_phi(f, a, 0.9));
    a = 0.2 + 0.6 * (a - 0.199);  // wander deterministically
    if (a > 0.8) a = 0.2;
  }
}
BENCHMARK(BM_ConditionalMean);

static void BM_SolveConvex(benchmark::State& state) {
  SolverOptions opts;
  opts.n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_dual_expectations(beta_prior(), quad_value(), opts));
}
BENCHMARK(BM_SolveConvex)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_CertifyUniqueness(benchmark::State& state) {
  SolverOptions opts;
  opts.n = 6;
  for (auto _ : state)
    benchmark::DoNotOptimize(certify_uniqueness(beta_prior(), quad_value(), opts));
}
BENCHMARK(BM_CertifyUniqueness);

static void BM_SolveSShaped(benchmark::State& state) {
  const FunctionModel f = FunctionModel::uniform().as_density();
  const ValueModel u = ValueModel::from_expression("1-2*x");
  SolverOptions opts;
  opts.n = 3;
  for (auto _ : state) benchmark::DoNotOptimize(solve_sshaped(f, u, opts));
}
BENCHMARK(BM_SolveSShaped);

static void BM_OracleInterval(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_interval(beta_prior(), quad_value(), 3, 120));
}
BENCHMARK(BM_OracleInterval);

static void BM_SolveMenu(benchmark::State& state) {
  PricingInstance inst{FunctionModel::uniform().as_density(), 0.5, 1.0, 1.0, 3};
  for (auto _ : state) benchmark::DoNotOptimize(solve_menu(inst, SolverOptions{}));
}
BENCHMARK(BM_SolveMenu);

BENCHMARK_MAIN();
