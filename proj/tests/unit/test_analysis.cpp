#include <cmath>
#include <random>

#include <doctest.h>

#include "coarse/analysis.hpp"
#include "coarse/solver_convex.hpp"
#include "helpers.hpp"

using namespace coarse;

TEST_CASE("single-dipped predicate") {
  CHECK(is_single_dipped({3, 2, 1, 2, 4}));
  CHECK(is_single_dipped({1, 2, 3}));
  CHECK(is_single_dipped({3, 2, 1}));
  CHECK(is_single_dipped({2, 2, 2}));
  CHECK_FALSE(is_single_dipped({1, 2, 1}));
  CHECK_FALSE(is_single_dipped({3, 1, 2, 1, 3}));
  CHECK(is_single_dipped({1.0, 1.0 + 5e-10, 1.0}));  // within slack
}

TEST_CASE("scrutiny report on the equal split") {
  SolverOptions opts;
  opts.n = 5;
  const FunctionModel f = testutil::uniform_density();
  const IntervalSolution sol = solve_dual_expectations(f, ValueModel::quadratic(), opts);
  const ScrutinyReport rep = scrutiny_report(sol, &f);
  REQUIRE(rep.widths.size() == 5);
  REQUIRE(rep.interleaved.size() == 9);
  for (double w : rep.widths) CHECK(w == doctest::Approx(0.2).epsilon(0).margin(1e-8));
  CHECK(rep.single_dipped);
  CHECK(rep.center_index == 1);  // ties break to the smallest index
}

TEST_CASE("center of scrutiny tracks a single-peaked prior") {
  // Prop 2(i): constant curvature, unimodal prior with mode in interval j
  const FunctionModel f = FunctionModel::truncated_normal(0.7, 0.2).as_density();
  SolverOptions opts;
  opts.n = 5;
  const IntervalSolution sol = solve_dual_expectations(f, ValueModel::quadratic(), opts);
  const ScrutinyReport rep = scrutiny_report(sol, &f);
  REQUIRE(rep.density_mode.has_value());
  CHECK(*rep.density_mode == doctest::Approx(0.7).epsilon(0).margin(1e-6));
  int j = 0;
  for (int k = 1; k <= 5; ++k)
    if (*rep.density_mode > sol.cutoffs[k - 1] && *rep.density_mode <= sol.cutoffs[k]) j = k;
  CHECK(rep.center_index >= j - 1);
  CHECK(rep.center_index <= j + 1);
  CHECK(rep.single_dipped);
}

TEST_CASE("center of scrutiny tracks a single-peaked curvature") {
  // Prop 2(ii): uniform prior, unimodal curvature
  const FunctionModel f = testutil::uniform_density();
  const ValueModel u(FunctionModel::truncated_normal(0.3, 0.2));
  SolverOptions opts;
  opts.n = 5;
  const IntervalSolution sol = solve_dual_expectations(f, u, opts);
  const ScrutinyReport rep = scrutiny_report(sol, &f, &u.curvature());
  REQUIRE(rep.curvature_mode.has_value());
  CHECK(*rep.curvature_mode == doctest::Approx(0.3).epsilon(0).margin(1e-6));
  int j = 0;
  for (int k = 1; k <= 5; ++k)
    if (*rep.curvature_mode > sol.cutoffs[k - 1] && *rep.curvature_mode <= sol.cutoffs[k])
      j = k;
  CHECK(rep.center_index >= j - 1);
  CHECK(rep.center_index <= j + 1);
}

TEST_CASE("interleaved sequence is single-dipped in logconcave environments") {
  std::mt19937 rng(31);
  for (int i = 0; i < 15; ++i) {
    const FunctionModel f = testutil::random_logconcave_prior(rng);
    const ValueModel u = testutil::random_logconcave_value(rng);
    REQUIRE(is_logconcave(f).logconcave);
    REQUIRE(is_logconcave(u.curvature()).logconcave);
    SolverOptions opts;
    opts.n = 6;
    const IntervalSolution sol = solve_dual_expectations(f, u, opts);
    const ScrutinyReport rep = scrutiny_report(sol);
    CAPTURE(i);
    CHECK(rep.single_dipped);
  }
}

TEST_CASE("bimodal prior concentrates scrutiny at the modes") {
  const FunctionModel f = testutil::bimodal_density();
  SolverOptions opts;
  opts.n = 8;
  const IntervalSolution sol = solve_dual_expectations(f, ValueModel::quadratic(), opts);
  const ScrutinyReport rep = scrutiny_report(sol, &f);
  CHECK_FALSE(rep.single_dipped);
  CHECK_FALSE(rep.density_mode.has_value());  // not unimodal
  // narrowest intervals near the boundary modes, widest in the thin middle
  CHECK((rep.center_index == 1 || rep.center_index == 8));
  double mid_width = 0.0;
  for (int k = 3; k <= 5; ++k) mid_width = std::max(mid_width, rep.widths[k - 1]);
  CHECK(rep.widths.front() < mid_width);
  CHECK(rep.widths.back() < mid_width);
}

TEST_CASE("likelihood-ratio shifts move everything right") {
  SolverOptions opts;
  opts.n = 4;
  const ValueModel quad = ValueModel::quadratic();

  SUBCASE("prior shift Beta(2,2) -> Beta(3,2)") {
    const ShiftReport rep =
        compare_likelihood_ratio(FunctionModel::beta(2.0, 2.0).as_density(), quad,
                                 FunctionModel::beta(3.0, 2.0).as_density(), quad, opts);
    CHECK(rep.ratio_monotone);
    CHECK(rep.base_unique);
    CHECK(rep.shifted_unique);
    CHECK(rep.asserted());
    CHECK(rep.all_weakly_increasing);
    CHECK(rep.min_shift > 1e-4);  // strictly right for this pair
  }

  SUBCASE("curvature shift 1 -> exp(x)") {
    const FunctionModel f = testutil::uniform_density();
    const ValueModel expv(FunctionModel::expression("exp(x)"));
    const ShiftReport rep = compare_likelihood_ratio(f, quad, f, expv, opts);
    CHECK(rep.ratio_monotone);
    CHECK(rep.all_weakly_increasing);
  }

  SUBCASE("identical problems do not move") {
    const FunctionModel f = testutil::uniform_density();
    const ShiftReport rep = compare_likelihood_ratio(f, quad, f, quad, opts);
    CHECK(rep.ratio_monotone);
    for (double d : rep.cutoff_shifts) CHECK(std::abs(d) < 1e-9);
    for (double d : rep.signal_shifts) CHECK(std::abs(d) < 1e-9);
  }

  SUBCASE("a non-monotone ratio declines to assert") {
    const ShiftReport rep = compare_likelihood_ratio(
        FunctionModel::truncated_normal(0.5, 0.2).as_density(), quad,
        FunctionModel::truncated_normal(0.5, 0.1).as_density(), quad, opts);
    CHECK_FALSE(rep.ratio_monotone);
    CHECK_FALSE(rep.asserted());
  }
}

TEST_CASE("uniform-variability compression crosses once from above") {
  SolverOptions opts;
  opts.n = 5;
  const ValueModel quad = ValueModel::quadratic();

  SUBCASE("tighter prior compresses the ladder") {
    const VariabilityReport rep = compare_uniform_variability(
        FunctionModel::truncated_normal(0.5, 0.2).as_density(), quad,
        FunctionModel::truncated_normal(0.5, 0.1).as_density(), quad, opts);
    CHECK(rep.ratio_unimodal);
    CHECK(rep.asserted());
    CHECK(rep.at_most_one_crossing);
    CHECK(rep.sign_changes == 1);
    CHECK(rep.first_sign_positive);
  }

  SUBCASE("a peak near the top may not cross at all") {
    const VariabilityReport rep = compare_uniform_variability(
        testutil::uniform_density(), quad,
        FunctionModel::truncated_normal(0.9, 0.45).as_density(), quad, opts);
    CHECK(rep.ratio_unimodal);
    CHECK(rep.sign_changes == 0);
    CHECK(rep.at_most_one_crossing);
  }

  SUBCASE("identical problems give an all-zero difference sequence") {
    const FunctionModel f = FunctionModel::truncated_normal(0.5, 0.2).as_density();
    const VariabilityReport rep = compare_uniform_variability(f, quad, f, quad, opts);
    for (double d : rep.diffs) CHECK(std::abs(d) < 1e-9);
    CHECK(rep.sign_changes == 0);
  }
}
