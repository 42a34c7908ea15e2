#include "coarse/solver_sshaped.hpp"

#include <algorithm>
#include <cmath>

#include "sweep_engine.hpp"

namespace coarse {

namespace {

struct SignPattern {
  std::vector<int> signs;      // compressed nonzero signs
  std::vector<double> breaks;  // grid points bracketing each change
};

SignPattern sign_pattern(const FunctionModel& u2, int grid) {
  double max_abs = 0.0;
  std::vector<double> xs(grid), vs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = (i + 0.5) / grid;
    vs[i] = u2(xs[i]);
    max_abs = std::max(max_abs, std::abs(vs[i]));
  }
  const double tol = 1e-12 * max_abs;
  SignPattern pat;
  double last_x = 0.0;
  for (int i = 0; i < grid; ++i) {
    const int s = vs[i] > tol ? 1 : vs[i] < -tol ? -1 : 0;
    if (s == 0) continue;
    if (pat.signs.empty() || pat.signs.back() != s) {
      if (!pat.signs.empty()) pat.breaks.push_back(last_x);
      pat.signs.push_back(s);
    }
    last_x = xs[i];
  }
  return pat;
}

}  // namespace

CurvatureShape classify_curvature(const FunctionModel& u2, int grid) {
  const SignPattern pat = sign_pattern(u2, grid);
  if (pat.signs.empty())
    throw ValidationError("curvature is numerically zero everywhere");
  if (pat.signs.size() == 1) return pat.signs[0] > 0 ? CurvatureShape::Convex : CurvatureShape::Concave;
  if (pat.signs.size() == 2)
    return pat.signs[0] > 0 ? CurvatureShape::SShaped : CurvatureShape::SShapedReflected;
  return CurvatureShape::General;
}

SShapeProfile detect_inflection(const FunctionModel& u2, int grid) {
  const CurvatureShape shape = classify_curvature(u2, grid);
  switch (shape) {
    case CurvatureShape::Convex:
      throw ShapeRoutingError("curvature has no sign change: convex", shape);
    case CurvatureShape::Concave:
      throw ShapeRoutingError("curvature has no sign change: concave", shape);
    case CurvatureShape::SShapedReflected:
      throw ShapeRoutingError("curvature is single-crossing from below: reflect the state",
                              shape);
    case CurvatureShape::General:
      throw ShapeRoutingError("curvature changes sign more than once: not S-shaped", shape);
    case CurvatureShape::SShaped:
      break;
  }
  // bracket the sign change on the grid, then bisect
  double lo = 0.0, hi = 1.0;
  double prev_x = 0.5 / grid;
  double prev_v = u2(prev_x);
  for (int i = 1; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    const double v = u2(x);
    if (prev_v > 0.0 && v <= 0.0) {
      lo = prev_x;
      hi = x;
      break;
    }
    prev_x = x;
    prev_v = v;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (u2(mid) > 0.0 ? lo : hi) = mid;
  }
  SShapeProfile prof;
  prof.inflection = 0.5 * (lo + hi);
  prof.sign_verified = true;
  return prof;
}

UpperCensorship compute_upper_censorship(const FunctionModel& prior, const ValueModel& value) {
  const SShapeProfile prof = detect_inflection(value.curvature());
  const double x_hat = prof.inflection;
  const double total = prior.total();

  // prefix of ∫ u f, tabulated once so V(s) is O(1)
  const PanelIntegrator uf(
      [&](double t) { return value.u(t) * prior(t); }, 0.0, 1.0, 256);

  const auto V = [&](double s) {
    double pooled = 0.0;
    const auto [m0, m1] = prior.segment_integrals(s, 1.0);
    if (m0 > 0.0) pooled = (m0 / total) * value.u(m1 / m0);
    return uf.mass(0.0, s) / total + pooled;
  };

  // multi-start golden sections over [0, x̂]; V can be non-concave
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double best_s = 0.0, best_v = V(0.0);
  const auto consider = [&](double s, double v) {
    if (v > best_v) {
      best_v = v;
      best_s = s;
    }
  };
  consider(x_hat, V(x_hat));
  const int starts = 16;
  for (int i = 0; i < starts; ++i) {
    double a = x_hat * i / starts;
    double b = x_hat * (i + 1) / starts;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = V(c), fd = V(d);
    while (b - a > 1e-10) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = V(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = V(d);
      }
    }
    const double mid = 0.5 * (a + b);
    consider(mid, V(mid));
  }

  // parabolic polish around the incumbent
  const double h = 1e-6 * std::max(x_hat, 1e-3);
  const double lo = std::max(0.0, best_s - h), hi = std::min(x_hat, best_s + h);
  if (hi - lo > 0.0 && best_s > lo && best_s < hi) {
    const double f0 = V(lo), f1 = best_v, f2 = V(hi);
    const double denom = (lo - best_s) * (f1 - f2) - (best_s - hi) * (f0 - f1);
    if (std::abs(denom) > 0.0) {
      const double num = (lo - best_s) * (lo + best_s) * (f1 - f2) -
                         (best_s - hi) * (best_s + hi) * (f0 - f1);
      const double cand = 0.5 * num / denom;
      if (cand > 0.0 && cand < x_hat) consider(cand, V(cand));
    }
  }
  return {best_s, best_v};
}

CensorshipIntegral::CensorshipIntegral(const FunctionModel& prior, double s_star)
    : s_star_(s_star), prior_(&prior) {
  f_star_ = prior.cdf(s_star);
  i_f_star_ = prior.integral_cdf(s_star);
  prior_mean_ = prior.mean();
  if (f_star_ < 1.0) {
    const auto [m0, m1] = prior.segment_integrals(s_star, 1.0);
    pooled_atom_ = m0 > 0.0 ? m1 / m0 : 1.0;
  } else {
    pooled_atom_ = 1.0;
  }
}

double CensorshipIntegral::operator()(double x) const {
  if (x <= s_star_) return prior_->integral_cdf(x);
  if (x >= pooled_atom_) return x - prior_mean_;
  return i_f_star_ + f_star_ * (x - s_star_);
}

IntervalSolution solve_sshaped(const FunctionModel& prior, const ValueModel& value,
                               const SolverOptions& opts) {
  if (opts.n < 1) throw ValidationError("signal budget N must be >= 1");
  const SShapeProfile prof = detect_inflection(value.curvature());
  const double x_hat = prof.inflection;
  const double total = prior.total();

  if (opts.n == 1) {
    IntervalSolution sol;
    sol.cutoffs = {0.0, 1.0};
    sol.signals = {prior.mean()};
    sol.masses = {1.0};
    sol.signal_residuals = {0.0};
    sol.payoff = payoff_direct(sol, value);
    return sol;
  }

  const int N = opts.n;
  detail::SweepSpec spec;
  spec.segments = N;
  spec.phi = [&prior](double a, double b) { return conditional_mean_phi(prior, a, b); };
  spec.cutoff_target = [&value, x_hat](int, double xa, double xb) {
    try {
      return value.mu(xa, xb);
    } catch (const BarycenterError&) {
      // positive and negative curvature nearly cancel on (xa, xb); push the
      // cutoff to the inflection and let the projection take over
      return x_hat;
    }
  };
  spec.clamp = [N, x_hat](int k, double proposed, double xa, double xb) {
    if (k != N - 1) return proposed;
    const double lo = std::nextafter(xa, 1.0);
    const double hi = std::min(x_hat, std::nextafter(xb, 0.0));
    return std::clamp(proposed, lo, hi);
  };

  // The top cutoff of the constrained optimum sits below the censorship
  // cutoff s*, so the iteration is seeded inside (0, s*] and grows upward.
  // Packed near-one seeds would start whole intervals inside the concave
  // region, where the signed barycenter is ill-posed.
  const UpperCensorship uc = compute_upper_censorship(prior, value);
  if (!(uc.s_star > 0.0))
    throw SolverError("upper censorship reveals nothing (s* = 0): no interval partition "
                      "with N > 1 is optimal here");
  SolverOptions local = opts;
  if (opts.seeding != SolverOptions::Seeding::Custom &&
      opts.seeding != SolverOptions::Seeding::NearZero) {
    local.seeding = SolverOptions::Seeding::Custom;
    local.custom_seed.assign(2 * N - 1, 0.0);
    const double top = 0.98 * std::min(uc.s_star, x_hat);
    for (int k = 1; k < N; ++k) local.custom_seed[2 * k - 1] = top * k / (N - 1);
    for (int k = 1; k < N; ++k)
      local.custom_seed[2 * k - 2] =
          0.5 * ((k == 1 ? 0.0 : local.custom_seed[2 * k - 3]) + local.custom_seed[2 * k - 1]);
    local.custom_seed[2 * N - 2] = 0.5 * (local.custom_seed[2 * N - 3] + 1.0);
  }

  detail::SweepOutcome out;
  for (double damping : {1.0, 0.5, 0.2}) {
    spec.damping = damping;
    out = detail::run_sweep(spec, local);
    if (out.converged) break;
  }
  if (!out.converged)
    throw SolverError("S-shaped dual-expectations iteration did not converge (last residual " +
                      std::to_string(out.last_residual) + ")");

  IntervalSolution sol;
  sol.cutoffs = out.cutoffs;
  sol.signals = out.signals;
  sol.masses.resize(N);
  for (int k = 0; k < N; ++k)
    sol.masses[k] = prior.integrate(sol.cutoffs[k], sol.cutoffs[k + 1]) / total;
  sol.signal_residuals = out.signal_residuals;
  sol.cutoff_residuals = out.cutoff_residuals;
  sol.iterations = out.iterations;
  sol.converged = out.converged;
  sol.payoff = payoff_direct(sol, value);
  sol.validate(prior);

  if (sol.cutoffs[N - 1] > x_hat + opts.tolerance)
    throw SolverError("top cutoff exceeds the inflection point");
  if (sol.cutoffs[N - 1] > uc.s_star + 1e-6)
    throw SolverError("top cutoff " + std::to_string(sol.cutoffs[N - 1]) +
                      " exceeds the upper-censorship cutoff " + std::to_string(uc.s_star));
  return sol;
}

IntervalSolution solve_sshaped_reflected(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts) {
  // reflect the state, solve, map the structure back, re-evaluate in the
  // original problem
  const FunctionModel f_ref = FunctionModel::callable(
      "reflected " + prior.label(), [&prior](double t) { return prior(1.0 - t); });
  const FunctionModel u2_ref = FunctionModel::callable(
      "reflected " + value.curvature().label(),
      [&value](double t) { return value.d2u(1.0 - t); });
  const ValueModel v_ref{u2_ref};

  const IntervalSolution mirrored = solve_sshaped(f_ref, v_ref, opts);

  const int N = mirrored.n();
  IntervalSolution sol;
  sol.cutoffs.resize(N + 1);
  sol.signals.resize(N);
  sol.masses.resize(N);
  for (int k = 0; k <= N; ++k) sol.cutoffs[k] = 1.0 - mirrored.cutoffs[N - k];
  sol.cutoffs[0] = 0.0;
  sol.cutoffs[N] = 1.0;
  const double total = prior.total();
  for (int k = 0; k < N; ++k) {
    sol.signals[k] = 1.0 - mirrored.signals[N - 1 - k];
    sol.masses[k] = prior.integrate(sol.cutoffs[k], sol.cutoffs[k + 1]) / total;
  }
  sol.iterations = mirrored.iterations;
  sol.converged = mirrored.converged;
  sol.payoff = payoff_direct(sol, value);

  // residuals recomputed in original coordinates
  sol.signal_residuals.resize(N);
  sol.cutoff_residuals.resize(N - 1);
  for (int k = 0; k < N; ++k)
    sol.signal_residuals[k] =
        std::abs(sol.signals[k] - conditional_mean_phi(prior, sol.cutoffs[k], sol.cutoffs[k + 1]));
  for (int k = 1; k < N; ++k)
    sol.cutoff_residuals[k - 1] =
        std::abs(sol.cutoffs[k] - value.mu(sol.signals[k - 1], sol.signals[k]));
  sol.validate(prior);
  return sol;
}

}  // namespace coarse
