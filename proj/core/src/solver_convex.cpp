#include "coarse/solver_convex.hpp"

#include <algorithm>
#include <cmath>

#include "sweep_engine.hpp"

namespace coarse {

namespace {

void require_unit_domain(const FunctionModel& f, const char* what) {
  const Interval dom = f.domain();
  if (std::abs(dom.lo) > 1e-12 || std::abs(dom.hi - 1.0) > 1e-12)
    throw ValidationError(std::string(what) + " must live on [0, 1]");
}

void require_convex_curvature(const FunctionModel& u2) {
  // u'' >= 0 with isolated zeros permitted; a strictly negative sample or a
  // vanishing total rules the convex solver out.
  const int samples = 512;
  double max_abs = 0.0;
  for (int i = 0; i < samples; ++i) max_abs = std::max(max_abs, std::abs(u2((i + 0.5) / samples)));
  if (max_abs == 0.0 || std::abs(u2.integrate(0.0, 1.0)) < 1e-12)
    throw ValidationError("curvature is (numerically) zero: dual expectations are ill-posed");
  for (int i = 0; i < samples; ++i) {
    const double x = (i + 0.5) / samples;
    if (u2(x) < -1e-10 * max_abs)
      throw ValidationError("curvature is negative at x = " + std::to_string(x) +
                            ": not a convex value function");
  }
}

IntervalSolution finish_interval_solution(const detail::SweepOutcome& out,
                                          const FunctionModel& prior, const ValueModel& value) {
  IntervalSolution sol;
  sol.cutoffs = out.cutoffs;
  sol.signals = out.signals;
  const double total = prior.total();
  sol.masses.resize(sol.signals.size());
  for (std::size_t k = 0; k < sol.masses.size(); ++k)
    sol.masses[k] = prior.integrate(sol.cutoffs[k], sol.cutoffs[k + 1]) / total;
  sol.signal_residuals = out.signal_residuals;
  sol.cutoff_residuals = out.cutoff_residuals;
  sol.iterations = out.iterations;
  sol.converged = out.converged;
  sol.payoff = payoff_direct(sol, value);
  return sol;
}

IntervalSolution null_information_solution(const FunctionModel& prior, const ValueModel& value) {
  IntervalSolution sol;
  sol.cutoffs = {0.0, 1.0};
  sol.signals = {prior.mean()};
  sol.masses = {1.0};
  sol.signal_residuals = {0.0};
  sol.iterations = 0;
  sol.converged = true;
  sol.payoff = payoff_direct(sol, value);
  return sol;
}

}  // namespace

IntervalSolution solve_dual_expectations(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts) {
  if (opts.n < 1) throw ValidationError("signal budget N must be >= 1");
  require_unit_domain(prior, "prior density");
  require_convex_curvature(value.curvature());
  if (opts.n == 1) return null_information_solution(prior, value);

  detail::SweepSpec spec;
  spec.segments = opts.n;
  spec.phi = [&prior](double a, double b) { return conditional_mean_phi(prior, a, b); };
  spec.cutoff_target = [&value](int, double xa, double xb) { return value.mu(xa, xb); };

  detail::SweepOutcome out = detail::run_sweep(spec, opts);
  if (!out.converged)
    throw SolverError("dual-expectations iteration did not converge within " +
                      std::to_string(opts.max_iterations) +
                      " sweeps (last residual " + std::to_string(out.last_residual) + ")");
  IntervalSolution sol = finish_interval_solution(out, prior, value);
  sol.validate(prior);
  return sol;
}

UniquenessCertificate certify_uniqueness(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts) {
  UniquenessCertificate cert;
  cert.largest =
      solve_dual_expectations(prior, value, opts.with_seeding(SolverOptions::Seeding::NearOne));
  cert.smallest =
      solve_dual_expectations(prior, value, opts.with_seeding(SolverOptions::Seeding::NearZero));
  if (opts.n == 1) {
    cert.unique = true;
    cert.solution = cert.largest;
    return cert;
  }
  double gap = 0.0;
  for (int k = 0; k < opts.n; ++k)
    gap = std::max(gap, std::abs(cert.largest.signals[k] - cert.smallest.signals[k]));
  for (int k = 1; k < opts.n; ++k)
    gap = std::max(gap, std::abs(cert.largest.cutoffs[k] - cert.smallest.cutoffs[k]));
  cert.max_coordinate_gap = gap;
  cert.unique = gap < 10.0 * opts.tolerance;
  cert.solution = cert.largest.payoff >= cert.smallest.payoff ? cert.largest : cert.smallest;
  return cert;
}

IntervalSolution solve_cheap_talk(const FunctionModel& prior, double kappa1,
                                  const SolverOptions& opts) {
  if (!(kappa1 >= 1.0)) throw ValidationError("cheap talk requires kappa1 >= 1");
  if (opts.n < 1) throw ValidationError("signal budget N must be >= 1");
  require_unit_domain(prior, "prior density");

  const ValueModel quad = ValueModel::quadratic();
  if (opts.n == 1) return null_information_solution(prior, quad);

  detail::SweepSpec spec;
  spec.segments = opts.n;
  spec.phi = [&prior](double a, double b) { return conditional_mean_phi(prior, a, b); };
  spec.cutoff_target = [kappa1](int, double xa, double xb) {
    return (xa + xb) / (2.0 * kappa1);
  };

  detail::SweepOutcome out = detail::run_sweep(spec, opts);
  if (!out.converged)
    throw SolverError("cheap-talk iteration did not converge (last residual " +
                      std::to_string(out.last_residual) + ")");
  IntervalSolution sol = finish_interval_solution(out, prior, quad);
  sol.validate(prior);
  return sol;
}

}  // namespace coarse
