#include <cmath>
#include <random>

#include <doctest.h>

#include "coarse/oracle.hpp"
#include "coarse/solver_convex.hpp"
#include "helpers.hpp"

using namespace coarse;

TEST_CASE("uniform prior with uniform curvature splits equally") {
  const FunctionModel f = testutil::uniform_density();
  const ValueModel quad = ValueModel::quadratic();
  SolverOptions opts;
  opts.n = 4;
  const IntervalSolution sol = solve_dual_expectations(f, quad, opts);
  for (int k = 0; k <= 4; ++k)
    CHECK(sol.cutoffs[k] == doctest::Approx(k / 4.0).epsilon(0).margin(1e-8));
  for (int k = 1; k <= 4; ++k)
    CHECK(sol.signals[k - 1] == doctest::Approx((2.0 * k - 1) / 8.0).epsilon(0).margin(1e-8));
  CHECK(sol.max_residual() < 1e-8);
  CHECK(sol.converged);
  for (double w : sol.widths()) CHECK(w > 0.0);  // the budget is exhausted
}

TEST_CASE("N = 1 returns the null-information structure") {
  const FunctionModel f = FunctionModel::beta(3.0, 2.0).as_density();
  SolverOptions opts;
  opts.n = 1;
  const IntervalSolution sol = solve_dual_expectations(f, ValueModel::quadratic(), opts);
  CHECK(sol.signals[0] == doctest::Approx(f.mean()).epsilon(1e-12));
  CHECK(sol.payoff == doctest::Approx(f.mean() * f.mean()).epsilon(1e-10));
}

TEST_CASE("linear prior against an independent bisection oracle") {
  // f = 2x, constant curvature, N = 2: the cutoff solves
  // s = (phi(0, s) + phi(s, 1)) / 2
  const FunctionModel f = FunctionModel::expression("2*x").as_density();
  const ValueModel quad = ValueModel::quadratic();
  SolverOptions opts;
  opts.n = 2;
  const IntervalSolution sol = solve_dual_expectations(f, quad, opts);

  double lo = 0.01, hi = 0.99;
  const auto excess = [&](double s) {
    return 0.5 * (conditional_mean_phi(f, 0.0, s) + conditional_mean_phi(f, s, 1.0)) - s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(sol.cutoffs[1] == doctest::Approx(0.5 * (lo + hi)).epsilon(0).margin(1e-9));

  const IntervalSolution orc = oracle_interval(f, quad, 2, 400);
  CHECK(sol.payoff == doctest::Approx(orc.payoff).epsilon(0).margin(1e-6));
  CHECK(std::abs(sol.cutoffs[1] - orc.cutoffs[1]) < 2.0 / 400);
}

TEST_CASE("uniqueness certification in logconcave environments") {
  SolverOptions opts;
  opts.n = 3;
  const UniquenessCertificate uu =
      certify_uniqueness(testutil::uniform_density(), ValueModel::quadratic(), opts);
  CHECK(uu.unique);
  CHECK(uu.solution.cutoffs[1] == doctest::Approx(1.0 / 3).epsilon(0).margin(1e-8));

  const FunctionModel b22 = FunctionModel::beta(2.0, 2.0).as_density();
  const ValueModel tn_curv(FunctionModel::truncated_normal(0.4, 0.3));
  const UniquenessCertificate ub = certify_uniqueness(b22, tn_curv, opts);
  CHECK(ub.unique);
  CHECK(ub.max_coordinate_gap < 1e-7);
}

TEST_CASE("bimodal prior: both extreme fixed points are reported") {
  SolverOptions opts;
  opts.n = 4;
  const UniquenessCertificate cert =
      certify_uniqueness(testutil::bimodal_density(), ValueModel::quadratic(), opts);
  CHECK(cert.largest.converged);
  CHECK(cert.smallest.converged);
  CHECK(cert.largest.max_residual() < 1e-8);
  CHECK(cert.smallest.max_residual() < 1e-8);
  for (int k = 1; k < 4; ++k)
    CHECK(cert.largest.cutoffs[k] >= cert.smallest.cutoffs[k] - 1e-9);
  if (cert.unique)
    CHECK(cert.max_coordinate_gap < 1e-7);
}

TEST_CASE("monotone iteration from extreme seeds") {
  const FunctionModel f = FunctionModel::beta(2.0, 2.0).as_density();
  const ValueModel quad = ValueModel::quadratic();
  SolverOptions opts;
  opts.n = 3;

  std::vector<std::vector<double>> trace;
  opts.trace_sink = &trace;
  opts.seeding = SolverOptions::Seeding::NearOne;
  solve_dual_expectations(f, quad, opts);
  for (std::size_t t = 1; t < trace.size(); ++t)
    for (std::size_t i = 0; i < trace[t].size(); ++i)
      CHECK(trace[t][i] <= trace[t - 1][i] + 5e-9);

  trace.clear();
  opts.seeding = SolverOptions::Seeding::NearZero;
  solve_dual_expectations(f, quad, opts);
  for (std::size_t t = 1; t < trace.size(); ++t)
    for (std::size_t i = 0; i < trace[t].size(); ++i)
      CHECK(trace[t][i] >= trace[t - 1][i] - 5e-9);
}

TEST_CASE("payoff is nondecreasing in the signal budget") {
  const ValueModel expv(FunctionModel::expression("exp(x)"));
  struct Env {
    FunctionModel f;
    const ValueModel* u;
  };
  const ValueModel quad = ValueModel::quadratic();
  const Env envs[] = {{testutil::uniform_density(), &quad},
                      {FunctionModel::beta(2.0, 3.0).as_density(), &expv}};
  for (const auto& env : envs) {
    double prev = -1e9;
    for (int n = 1; n <= 6; ++n) {
      SolverOptions opts;
      opts.n = n;
      const IntervalSolution sol = solve_dual_expectations(env.f, *env.u, opts);
      CHECK(sol.payoff >= prev - 1e-9);
      prev = sol.payoff;
    }
  }
}

TEST_CASE("convex solver rejects signed curvature") {
  SolverOptions opts;
  opts.n = 3;
  CHECK_THROWS_AS(solve_dual_expectations(testutil::uniform_density(),
                                          ValueModel::from_expression("1-2*x"), opts),
                  ValidationError);
}

TEST_CASE("cheap talk") {
  const FunctionModel f = testutil::uniform_density();

  SUBCASE("kappa = 1 reproduces the equal split") {
    SolverOptions opts;
    opts.n = 4;
    const IntervalSolution sol = solve_cheap_talk(f, 1.0, opts);
    for (int k = 0; k <= 4; ++k)
      CHECK(sol.cutoffs[k] == doctest::Approx(k / 4.0).epsilon(0).margin(1e-8));
  }

  SUBCASE("kappa = 1.25, N = 2 has the closed-form cutoff 1/3") {
    SolverOptions opts;
    opts.n = 2;
    const IntervalSolution sol = solve_cheap_talk(f, 1.25, opts);
    CHECK(sol.cutoffs[1] == doctest::Approx(1.0 / 3).epsilon(0).margin(1e-8));
    CHECK(sol.max_residual() < 1e-8);
  }

  SUBCASE("an unsupportable partition is an error") {
    const FunctionModel skewed = FunctionModel::beta(5.0, 1.0).as_density();
    SolverOptions opts;
    opts.n = 3;
    CHECK_THROWS_AS(solve_cheap_talk(skewed, 2.0, opts), SolverError);
  }

  SUBCASE("kappa below one is rejected") {
    SolverOptions opts;
    opts.n = 2;
    CHECK_THROWS_AS(solve_cheap_talk(f, 0.8, opts), ValidationError);
  }
}

TEST_CASE("randomized logconcave instances agree with the oracle") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 4; ++i) {
    const FunctionModel f = testutil::random_logconcave_prior(rng);
    const ValueModel u = testutil::random_logconcave_value(rng);
    REQUIRE(is_logconcave(f).logconcave);
    REQUIRE(is_logconcave(u.curvature()).logconcave);
    SolverOptions opts;
    opts.n = 2 + (i % 2);
    const UniquenessCertificate cert = certify_uniqueness(f, u, opts);
    CHECK(cert.unique);
    const IntervalSolution orc = oracle_interval(f, u, opts.n);
    CHECK(std::abs(cert.solution.payoff - orc.payoff) < 1e-5);
  }
}
