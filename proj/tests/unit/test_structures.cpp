#include <cmath>

#include <doctest.h>

#include "coarse/integral_distribution.hpp"
#include "coarse/solver_convex.hpp"
#include "helpers.hpp"

using namespace coarse;

namespace {

IntervalSolution equal_split_uniform(int n) {
  const FunctionModel f = testutil::uniform_density();
  IntervalSolution sol;
  sol.cutoffs.resize(n + 1);
  sol.signals.resize(n);
  sol.masses.assign(n, 1.0 / n);
  for (int k = 0; k <= n; ++k) sol.cutoffs[k] = static_cast<double>(k) / n;
  for (int k = 1; k <= n; ++k) sol.signals[k - 1] = (2.0 * k - 1.0) / (2.0 * n);
  sol.signal_residuals.assign(n, 0.0);
  sol.cutoff_residuals.assign(n - 1, 0.0);
  return sol;
}

}  // namespace

TEST_CASE("null information integral distribution equals the lower envelope") {
  const FunctionModel f = FunctionModel::beta(2.0, 3.0).as_density();
  IntervalSolution sol;
  sol.cutoffs = {0.0, 1.0};
  sol.signals = {f.mean()};
  sol.masses = {1.0};
  const IntegralDistribution ig = build_integral_distribution(sol, f);
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    CHECK(ig(x) == doctest::Approx(std::max(0.0, x - f.mean())).epsilon(0).margin(1e-12));
  }
}

TEST_CASE("uniform equal split touches I_F at the cutoff") {
  const FunctionModel f = testutil::uniform_density();
  const IntervalSolution sol = equal_split_uniform(2);
  const IntegralDistribution ig = build_integral_distribution(sol, f);
  CHECK(ig.atoms()[0] == doctest::Approx(0.25));
  CHECK(ig.atoms()[1] == doctest::Approx(0.75));
  CHECK(ig(0.5) == doctest::Approx(0.125).epsilon(1e-12));   // I_F(0.5) = 0.5^2/2
  CHECK(f.integral_cdf(0.5) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ig(0.25) == doctest::Approx(0.0).epsilon(1e-14));
  // I_G(1) = I_F(1) = 1 - prior mean
  CHECK(ig.at_one() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("full-support identity holds for any prior") {
  for (const FunctionModel& f :
       {testutil::bimodal_density(), FunctionModel::beta(3.0, 2.0).as_density()}) {
    IntervalSolution sol;
    sol.cutoffs = {0.0, 1.0};
    sol.signals = {f.mean()};
    sol.masses = {1.0};
    const IntegralDistribution ig = build_integral_distribution(sol, f);
    CHECK(ig.at_one() == doctest::Approx(1.0 - f.mean()).epsilon(1e-10));
  }
}

TEST_CASE("MPC violation is rejected") {
  const FunctionModel f = testutil::uniform_density();
  IntervalSolution bad;
  bad.cutoffs = {0.0, 0.5, 1.0};
  bad.signals = {0.1, 0.9};  // mean preserved but more spread than the prior allows
  bad.masses = {0.5, 0.5};
  CHECK_THROWS_AS(build_integral_distribution(bad, f), MpcError);
}

TEST_CASE("payoff in the direct form") {
  const FunctionModel f = testutil::uniform_density();
  const ValueModel linear(FunctionModel::piecewise_constant({0.0, 1.0}, {0.0}), 1.0, 1.0);
  const ValueModel quad = ValueModel::quadratic();

  const IntervalSolution sol2 = equal_split_uniform(2);
  const IntervalSolution sol1 = equal_split_uniform(1);

  CHECK(payoff_direct(sol2, linear) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(payoff_direct(sol2, quad) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(payoff_direct(sol1, quad) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("auxiliary payoff agrees with the direct payoff") {
  const FunctionModel f = testutil::uniform_density();
  const ValueModel quad = ValueModel::quadratic();
  const ValueModel linear(FunctionModel::piecewise_constant({0.0, 1.0}, {0.0}), 1.0, 1.0);

  const IntervalSolution sol1 = equal_split_uniform(1);
  const IntervalSolution sol2 = equal_split_uniform(2);
  const IntegralDistribution ig1 = build_integral_distribution(sol1, f);
  const IntegralDistribution ig2 = build_integral_distribution(sol2, f);

  // zero curvature: the payoff is the prior mean from the anchor terms alone
  CHECK(payoff_auxiliary(ig1, linear, f) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(payoff_auxiliary(ig2, quad, f) == doctest::Approx(0.3125).epsilon(1e-12));
  // more information pays under convexity
  CHECK(payoff_auxiliary(ig2, quad, f) > payoff_auxiliary(ig1, quad, f));

  // smooth instance: solve, then cross-check the identity
  const FunctionModel b22 = FunctionModel::beta(2.0, 2.0).as_density();
  const ValueModel expv(FunctionModel::expression("exp(x)"));
  SolverOptions opts;
  opts.n = 3;
  const IntervalSolution sol = solve_dual_expectations(b22, expv, opts);
  const IntegralDistribution ig = build_integral_distribution(sol, b22);
  CHECK(payoff_auxiliary(ig, expv, b22) ==
        doctest::Approx(payoff_direct(sol, expv)).epsilon(0).margin(1e-10));
}

TEST_CASE("solution validation catches structural defects") {
  const FunctionModel f = testutil::uniform_density();
  IntervalSolution sol = equal_split_uniform(3);
  CHECK_NOTHROW(sol.validate(f));

  IntervalSolution bad = sol;
  bad.signals[1] = 0.9;  // outside its subinterval
  CHECK_THROWS_AS(bad.validate(f), SolverError);

  bad = sol;
  bad.masses[0] = 0.4;  // masses no longer sum to one
  CHECK_THROWS_AS(bad.validate(f), SolverError);

  bad = sol;
  std::swap(bad.cutoffs[1], bad.cutoffs[2]);
  CHECK_THROWS_AS(bad.validate(f), SolverError);
}

TEST_CASE("two-atom segment feasibility is a conditional MPC bound") {
  const FunctionModel f = testutil::uniform_density();
  // segment (0.2, 0.8), conditional mean 0.5, equal masses
  const double m = 0.6;
  CHECK(segment_pair_mpc(f, 0.2, 0.8, 0.4, 0.6, m / 2, m / 2).ok);
  // the extreme mean-preserving split sits at the half-interval means
  // (0.35, 0.65); atoms spread wider cannot be induced from the segment
  CHECK_FALSE(segment_pair_mpc(f, 0.2, 0.8, 0.3, 0.7, m / 2, m / 2).ok);
  CHECK_FALSE(segment_pair_mpc(f, 0.2, 0.8, 0.21, 0.79, m / 2, m / 2).ok);
  // degenerate pair at the conditional mean
  CHECK(segment_pair_mpc(f, 0.2, 0.8, 0.5, 0.5, m / 2, m / 2).ok);
  // atoms outside the segment
  CHECK_FALSE(segment_pair_mpc(f, 0.2, 0.8, 0.1, 0.6, m / 2, m / 2).ok);
}

TEST_CASE("Blackwell comparison via integral distributions") {
  const FunctionModel f = testutil::uniform_density();
  const IntegralDistribution i1 = build_integral_distribution(equal_split_uniform(1), f);
  const IntegralDistribution i2 = build_integral_distribution(equal_split_uniform(2), f);
  const IntegralDistribution i4 = build_integral_distribution(equal_split_uniform(4), f);
  CHECK(weakly_less_informative(i1, i2));
  CHECK(weakly_less_informative(i2, i4));
  CHECK_FALSE(weakly_less_informative(i4, i2));
}
