// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Every tolerance is pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "coarse/analysis.hpp"
#include "coarse/integral_distribution.hpp"
#include "coarse/oracle.hpp"
#include "coarse/pricing.hpp"
#include "coarse/problem_spec.hpp"
#include "coarse/solver_convex.hpp"
#include "coarse/solver_general.hpp"
#include "coarse/solver_sshaped.hpp"

using namespace coarse;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::vector<double> collected_residuals;   // criterion 3 pools every solution
std::vector<double> payoff_identity_gaps;  // criterion 4

void report(int id, bool pass, const std::string& text) {
  std::printf("criterion %02d [%s] %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FunctionModel random_prior(std::mt19937& rng) {
  std::uniform_real_distribution<double> ab(1.0, 4.0);
  return FunctionModel::beta(ab(rng), ab(rng)).as_density();
}

ValueModel random_value(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0:
      return ValueModel(FunctionModel::piecewise_constant({0.0, 1.0}, {2.0}));
    case 1: {
      std::uniform_real_distribution<double> cdist(-2.0, 2.0);
      const double c = cdist(rng);
      return ValueModel(
          FunctionModel::callable("exp", [c](double x) { return std::exp(c * x); }));
    }
    default: {
      std::uniform_real_distribution<double> mdist(0.2, 0.8), sdist(0.15, 0.5);
      return ValueModel(FunctionModel::truncated_normal(mdist(rng), sdist(rng)));
    }
  }
}

void collect(const IntervalSolution& sol) {
  collected_residuals.push_back(sol.max_residual());
}

// ---------------------------------------------------------------------------

void criterion_1_equal_split() {
  const FunctionModel f = FunctionModel::uniform().as_density();
  const ValueModel quad = ValueModel::quadratic();
  double max_err = 0.0, max_time = 0.0;
  bool ok = true;
  for (int n = 1; n <= 8; ++n) {
    SolverOptions opts;
    opts.n = n;
    const auto t0 = Clock::now();
    const IntervalSolution sol = solve_dual_expectations(f, quad, opts);
    max_time = std::max(max_time, seconds_since(t0));
    for (int k = 0; k <= n; ++k)
      max_err = std::max(max_err, std::abs(sol.cutoffs[k] - static_cast<double>(k) / n));
    for (int k = 1; k <= n; ++k)
      max_err = std::max(max_err, std::abs(sol.signals[k - 1] - (2.0 * k - 1) / (2.0 * n)));
    collect(sol);
    const IntegralDistribution ig = build_integral_distribution(sol, f);
    payoff_identity_gaps.push_back(std::abs(payoff_direct(sol, quad) -
                                            payoff_auxiliary(ig, quad, f)));
  }
  ok = max_err < 1e-8 && max_time < 0.1;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "equal split N=1..8: max error %.2e (tol 1e-8), slowest solve %.3fs "
                "(limit 0.1s)",
                max_err, max_time);
  report(1, ok, buf);
}

void criterion_2_oracle_equivalence() {
  std::mt19937 rng(12345);
  const auto t0 = Clock::now();
  double worst_payoff_gap = 0.0, worst_cutoff_gap = 0.0;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const FunctionModel f = random_prior(rng);
    const ValueModel u = random_value(rng);
    if (!is_logconcave(f).logconcave || !is_logconcave(u.curvature()).logconcave) {
      ok = false;
      break;
    }
    SolverOptions opts;
    opts.n = (i % 2 == 0) ? 2 : 3;
    const UniquenessCertificate cert = certify_uniqueness(f, u, opts);
    if (!cert.unique) ok = false;
    const int grid = opts.n == 2 ? 200 : 120;
    const IntervalSolution orc = oracle_interval(f, u, opts.n, grid);
    worst_payoff_gap =
        std::max(worst_payoff_gap, std::abs(cert.solution.payoff - orc.payoff));
    for (int k = 1; k < opts.n; ++k)
      worst_cutoff_gap = std::max(
          worst_cutoff_gap, std::abs(cert.solution.cutoffs[k] - orc.cutoffs[k]) * grid / 2.0);
    collect(cert.solution);
    const IntegralDistribution ig = build_integral_distribution(cert.solution, f);
    payoff_identity_gaps.push_back(std::abs(payoff_direct(cert.solution, u) -
                                            payoff_auxiliary(ig, u, f)));
  }
  const double elapsed = seconds_since(t0);
  ok = ok && worst_payoff_gap < 1e-5 && worst_cutoff_gap <= 1.0 && elapsed < 60.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "oracle equivalence on 20 logconcave instances: payoff gap %.2e (tol 1e-5), "
                "cutoffs within %.2f of 2x grid resolution, %.1fs (limit 60s)",
                worst_payoff_gap, worst_cutoff_gap, elapsed);
  report(2, ok, buf);
}

void criterion_3_residuals() {
  double worst = 0.0;
  for (double r : collected_residuals) worst = std::max(worst, r);
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "fixed-point residuals across all %zu emitted solutions: max %.2e (tol 1e-8)",
                collected_residuals.size(), worst);
  report(3, worst < 1e-8, buf);
}

void criterion_4_payoff_identity() {
  double worst = 0.0;
  for (double g : payoff_identity_gaps) worst = std::max(worst, g);
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "direct vs auxiliary payoff on criteria 1-2 solutions: max gap %.2e (tol 1e-8)",
                worst);
  report(4, worst < 1e-8, buf);
}

void criterion_5_single_dipped() {
  std::mt19937 rng(777);
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const FunctionModel f = random_prior(rng);
    const ValueModel u = random_value(rng);
    if (!is_logconcave(f).logconcave || !is_logconcave(u.curvature()).logconcave) {
      ++violations;
      continue;
    }
    SolverOptions opts;
    opts.n = 6;
    const IntervalSolution sol = solve_dual_expectations(f, u, opts);
    const ScrutinyReport rep = scrutiny_report(sol);
    if (!rep.single_dipped) ++violations;
  }
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "interleaved width/gap sequence single-dipped on 50 logconcave instances at "
                "N=6: %d violations",
                violations);
  report(5, violations == 0, buf);
}

void criterion_6_shift_inequality() {
  std::mt19937 rng(999);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const FunctionModel f = random_prior(rng);
    double a = 0.9 * u01(rng);
    double b = std::min(1.0, a + (1.0 - a) * std::max(0.05, u01(rng)));
    const double eps = (1.0 - b) * u01(rng);
    const double lhs = conditional_mean_phi(f, a + eps, b + eps);
    const double rhs = conditional_mean_phi(f, a, b) + eps;
    if (lhs > rhs + 1e-9) ++violations;
  }
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "logconcave shift inequality on 200 random (f,a,b,eps) draws: %d violations",
                violations);
  report(6, violations == 0, buf);
}

void criterion_7_likelihood_ratio() {
  SolverOptions opts;
  opts.n = 4;
  const ValueModel quad = ValueModel::quadratic();
  const ShiftReport prior_shift =
      compare_likelihood_ratio(FunctionModel::beta(2.0, 2.0).as_density(), quad,
                               FunctionModel::beta(3.0, 2.0).as_density(), quad, opts);
  const FunctionModel uni = FunctionModel::uniform().as_density();
  const ValueModel expv(FunctionModel::expression("exp(x)"));
  const ShiftReport curv_shift = compare_likelihood_ratio(uni, quad, uni, expv, opts);

  const bool ok = prior_shift.asserted() && prior_shift.min_shift >= -1e-9 &&
                  curv_shift.asserted() && curv_shift.min_shift >= -1e-9;
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "likelihood-ratio shifts move everything right: Beta(2,2)->Beta(3,2) min "
                "shift %.2e, curvature 1->exp(x) min shift %.2e (tol -1e-9)",
                prior_shift.min_shift, curv_shift.min_shift);
  report(7, ok, buf);
}

void criterion_8_uniform_variability() {
  SolverOptions opts;
  opts.n = 5;
  const ValueModel quad = ValueModel::quadratic();
  const VariabilityReport rep = compare_uniform_variability(
      FunctionModel::truncated_normal(0.5, 0.2).as_density(), quad,
      FunctionModel::truncated_normal(0.5, 0.1).as_density(), quad, opts);
  const bool ok = rep.asserted() && rep.at_most_one_crossing;
  std::string pattern;
  for (double d : rep.diffs) pattern += d > 1e-9 ? '+' : d < -1e-9 ? '-' : '0';
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "tighter prior compresses the ladder: %d sign change(s), pattern %s",
                rep.sign_changes, pattern.c_str());
  report(8, ok, buf);
}

void criterion_9_sshaped() {
  const FunctionModel f = FunctionModel::uniform().as_density();
  const ValueModel u = ValueModel::from_expression("1-2*x");
  SolverOptions opts;
  opts.n = 3;
  const IntervalSolution sol = solve_sshaped(f, u, opts);
  collect(sol);
  const UpperCensorship uc = compute_upper_censorship(f, u);

  bool blackwell = true;
  const CensorshipIntegral istar(f, uc.s_star);
  const IntegralDistribution ig = build_integral_distribution(sol, f);
  for (int i = 0; i <= kMpcGrid; ++i) {
    const double x = static_cast<double>(i) / kMpcGrid;
    if (ig(x) > istar(x) + 1e-9) blackwell = false;
  }

  const IntervalSolution orc = oracle_interval(f, u, 3, 150);
  const BiPoolingSolution borc = oracle_bipooling(f, u, 3, 100);

  const bool ok = sol.cutoffs[2] <= uc.s_star + 1e-6 && blackwell &&
                  std::abs(sol.payoff - orc.payoff) < 1e-5 &&
                  sol.payoff >= borc.payoff - 1e-5 && !borc.has_pair();
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "S-shaped (uniform, u''=1-2x, N=3): s_2=%.6f <= s*=%.6f, I_G <= I_G* on %d "
                "points: %s, oracle payoff gap %.2e, beats bi-pooling search by %.2e",
                sol.cutoffs[2], uc.s_star, kMpcGrid + 1, blackwell ? "yes" : "no",
                std::abs(sol.payoff - orc.payoff), sol.payoff - borc.payoff);
  report(9, ok, buf);
}

void criterion_10_bipooling() {
  const FunctionModel f = FunctionModel::expression("12*(x-0.5)^2").as_density();
  const ValueModel u = ValueModel::from_expression("400*(x-0.5)^4-45*(x-0.5)^2+0.45");
  SolverOptions opts;
  opts.n = 4;
  std::vector<CandidateDiagnostic> diags;
  const BiPoolingSolution sol = solve_general(f, u, opts, &diags);

  int pair_count = 0;
  double bt_res = 1.0, cut_res = 0.0;
  for (const auto& seg : sol.segments)
    if (seg.is_pair) {
      ++pair_count;
      const double slope = std::abs(u.du(seg.a1) - u.du(seg.a2));
      const double chord =
          std::abs(u.u(seg.a2) - u.u(seg.a1) - u.du(seg.a1) * (seg.a2 - seg.a1));
      bt_res = std::max(slope, chord);
    }
  for (double r : sol.cutoff_residuals) cut_res = std::max(cut_res, r);
  collected_residuals.push_back(cut_res);

  double best_interval = -1e300;
  for (const auto& d : diags)
    if (d.converged && d.feasible &&
        (d.arrangement.rfind("interval", 0) == 0 || d.arrangement == "null information"))
      best_interval = std::max(best_interval, d.payoff);

  const BiPoolingSolution orc = oracle_bipooling(f, u, 4);
  const bool ok = pair_count == 1 && bt_res < 1e-8 && cut_res < 1e-8 &&
                  sol.payoff >= best_interval - 1e-8 &&
                  std::abs(sol.payoff - orc.payoff) < 1e-5;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "bi-pooling (W curvature, N=4): %d pair, bi-tangency residual %.2e, "
                "barycenter residual %.2e, beats intervals by %.2e, oracle gap %.2e",
                pair_count, bt_res, cut_res, sol.payoff - best_interval,
                std::abs(sol.payoff - orc.payoff));
  report(10, ok, buf);
}

void criterion_11_pricing() {
  PricingInstance inst{FunctionModel::uniform().as_density(), 0.5, 1.0, 1.0, 2};
  const Virtualization virt = virtualize(inst);

  // closed-form q*, pi against an independent golden-section search
  double worst_q = 0.0, worst_pi = 0.0;
  for (double phi : {0.2, 0.5, 0.8, 1.0}) {
    double a = 0.0, b = 1.0;
    while (virtual_surplus(inst, phi, b) > virtual_surplus(inst, phi, 0.9 * b)) b *= 2.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = virtual_surplus(inst, phi, c), fd = virtual_surplus(inst, phi, d);
    while (b - a > 1e-12) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = virtual_surplus(inst, phi, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = virtual_surplus(inst, phi, d);
      }
    }
    const double q_search = 0.5 * (a + b);
    worst_q = std::max(worst_q, std::abs(virt.q_star(phi) - q_search));
    worst_pi = std::max(worst_pi, std::abs(virt.pi(phi) - virtual_surplus(inst, phi, q_search)));
  }

  const MenuSolution menu = solve_menu(inst, SolverOptions{});
  collected_residuals.push_back(menu.max_residual());

  PricingInstance small_gamma{FunctionModel::uniform().as_density(), 0.5, 0.05, 1.0, 3};
  const ExclusionReport rep =
      exclusion_comparative_static(small_gamma, 0.5, 0.6, SolverOptions{});

  const bool ok = worst_q < 1e-8 && worst_pi < 1e-8 && menu.max_residual() < 1e-8 &&
                  rep.exclusion_shift >= -1e-9;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "pricing (v=q^0.5, c=gamma q): q*/pi vs 1-D search %.2e/%.2e (tol 1e-8), "
                "menu residuals %.2e, exclusion shift %.4f >= -1e-9",
                worst_q, worst_pi, menu.max_residual(), rep.exclusion_shift);
  report(11, ok, buf);
}

void criterion_12_energy() {
  // government and household rating ladders via the problem-spec surface
  const std::string spec = R"({
    "version": 1,
    "domain": [0.01, 1.0],
    "n": 6,
    "mode": "auto",
    "density": {"kind": "uniform"},
    "curvature": {"kind": "energy", "theta-min": 0.01, "price": 0.1,
                  "lambda1": 0.3, "lambda2": 0.05}
  })";
  const CompiledProblem gov = parse_problem(spec);
  const SolveOutcome gout = solve_problem(gov);

  CompiledProblem hh = gov;
  hh.value = gov.companion_value;
  hh.companion_value.reset();
  const SolveOutcome hout = solve_problem(hh);

  bool ok = gout.interval.has_value() && hout.interval.has_value();
  double w1 = 0.0, w2 = 0.0;
  if (ok) {
    const std::vector<double> w = gout.interval->widths();
    w1 = w[0];
    w2 = w[1];
    ok = w1 > w2 && hout.mode == SolveMode::Convex && hout.interval->n() == 6;
    collect(*gout.interval);
    collect(*hout.interval);
  }
  char buf[180];
  std::snprintf(buf, sizeof(buf),
                "energy ratings (theta_min=0.01, p=0.1, l1=0.3, l2=0.05): government w1=%.4f "
                "> w2=%.4f, household ladder emitted with 6 classes",
                w1, w2);
  report(12, ok, buf);
}

void criterion_13_cheap_talk() {
  const FunctionModel f = FunctionModel::uniform().as_density();
  SolverOptions opts;
  opts.n = 4;
  const IntervalSolution eq = solve_cheap_talk(f, 1.0, opts);
  double max_err = 0.0;
  for (int k = 0; k <= 4; ++k)
    max_err = std::max(max_err, std::abs(eq.cutoffs[k] - k / 4.0));
  collect(eq);

  SolverOptions opts2;
  opts2.n = 2;
  const IntervalSolution biased = solve_cheap_talk(f, 1.25, opts2);
  const double s1_err = std::abs(biased.cutoffs[1] - 1.0 / 3.0);
  collect(biased);

  const bool ok = max_err < 1e-8 && s1_err < 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "cheap talk: kappa=1 equal split error %.2e, kappa=1.25 cutoff |s1 - 1/3| = "
                "%.2e (tol 1e-8)",
                max_err, s1_err);
  report(13, ok, buf);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    criterion_1_equal_split();
    criterion_2_oracle_equivalence();
    criterion_5_single_dipped();
    criterion_6_shift_inequality();
    criterion_7_likelihood_ratio();
    criterion_8_uniform_variability();
    criterion_9_sshaped();
    criterion_10_bipooling();
    criterion_11_pricing();
    criterion_12_energy();
    criterion_13_cheap_talk();
    // 3 and 4 pool results from the runs above
    criterion_3_residuals();
    criterion_4_payoff_identity();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d/13 criteria passed in %.1fs\n", 13 - failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
