#include "sweep_engine.hpp"

#include <cmath>

#include "coarse/errors.hpp"

namespace coarse::detail {

namespace {

constexpr double kSeedSpacing = 1e-9;
constexpr double kCollapseWidth = 1e-12;

}  // namespace

std::vector<double> make_seed(int segments, const SolverOptions& opts,
                              bool anchor_first_signal, double anchored_value) {
  const int K = segments;
  const int len = 2 * K - 1;
  std::vector<double> z(len);
  switch (opts.seeding) {
    case SolverOptions::Seeding::NearZero:
      for (int i = 0; i < len; ++i) z[i] = (i + 1) * kSeedSpacing;
      break;
    case SolverOptions::Seeding::NearOne:
      for (int i = 0; i < len; ++i) z[i] = 1.0 - (len - i) * kSeedSpacing;
      break;
    case SolverOptions::Seeding::EqualSplit:
      for (int k = 1; k <= K; ++k) z[2 * k - 2] = (2.0 * k - 1.0) / (2.0 * K);
      for (int k = 1; k < K; ++k) z[2 * k - 1] = static_cast<double>(k) / K;
      break;
    case SolverOptions::Seeding::Custom:
      if (static_cast<int>(opts.custom_seed.size()) != len)
        throw ValidationError("custom seed must have 2N-1 interleaved entries");
      z = opts.custom_seed;
      for (int i = 0; i + 1 < len; ++i)
        if (!(z[i] < z[i + 1]))
          throw ValidationError("custom seed must be strictly increasing");
      if (!(z.front() > 0.0 && z.back() < 1.0))
        throw ValidationError("custom seed must lie strictly inside (0, 1)");
      break;
  }
  if (anchor_first_signal) z[0] = anchored_value;
  return z;
}

SweepOutcome run_sweep(const SweepSpec& spec, const SolverOptions& opts) {
  const int K = spec.segments;
  if (K < 1) throw ValidationError("sweep needs at least one segment");

  std::vector<double> z = make_seed(K, opts, spec.anchor_first_signal, spec.anchored_value);
  const auto cutoff_at = [&](int k) {  // s_k for k = 0..K
    if (k <= 0) return 0.0;
    if (k >= K) return 1.0;
    return z[2 * k - 1];
  };
  const auto signal_at = [&](int k) { return z[2 * k - 2]; };  // x_k, k = 1..K

  SweepOutcome out;
  const double res_floor = opts.tolerance;

  const auto compute_residuals = [&]() {
    out.signal_residuals.assign(K, 0.0);
    out.cutoff_residuals.assign(K - 1, 0.0);
    double worst = 0.0;
    for (int k = 1; k <= K; ++k) {
      if (spec.anchor_first_signal && k == 1) continue;
      const double r = std::abs(signal_at(k) - spec.phi(cutoff_at(k - 1), cutoff_at(k)));
      out.signal_residuals[k - 1] = r;
      worst = std::fmax(worst, r);
    }
    for (int k = 1; k < K; ++k) {
      const double r =
          std::abs(cutoff_at(k) - spec.cutoff_target(k, signal_at(k), signal_at(k + 1)));
      out.cutoff_residuals[k - 1] = r;
      worst = std::fmax(worst, r);
    }
    out.last_residual = worst;
    return worst;
  };

  int stall = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    double delta = 0.0;
    const double w = spec.damping;
    for (int k = 1; k <= K; ++k) {
      // signal update
      if (!(spec.anchor_first_signal && k == 1)) {
        const double x =
            (1.0 - w) * z[2 * k - 2] + w * spec.phi(cutoff_at(k - 1), cutoff_at(k));
        if (!std::isfinite(x)) throw SolverError("signal update is not finite");
        delta = std::fmax(delta, std::abs(x - z[2 * k - 2]));
        z[2 * k - 2] = x;
      }
      // cutoff update
      if (k < K) {
        double s = (1.0 - w) * z[2 * k - 1] +
                   w * spec.cutoff_target(k, signal_at(k), signal_at(k + 1));
        if (spec.clamp) s = spec.clamp(k, s, signal_at(k), signal_at(k + 1));
        if (!std::isfinite(s)) throw SolverError("cutoff update is not finite");
        if (!(s > signal_at(k)) || !(s < signal_at(k + 1)))
          throw SolverError("cutoff ordering violated: a partition of this size is not "
                            "supportable for this instance");
        delta = std::fmax(delta, std::abs(s - z[2 * k - 1]));
        z[2 * k - 1] = s;
      }
    }
    out.iterations = it;
    if (opts.trace_sink) opts.trace_sink->push_back(z);

    for (int k = 1; k <= K; ++k)
      if (cutoff_at(k) - cutoff_at(k - 1) < kCollapseWidth)
        throw SolverError("collapsed interval: cutoffs " + std::to_string(cutoff_at(k - 1)) +
                          " and " + std::to_string(cutoff_at(k)) + " within 1e-12");

    out.last_delta = delta;
    if (delta < opts.step_tolerance) {
      if (compute_residuals() < res_floor) {
        out.converged = true;
        break;
      }
      // parameters stopped moving but the equations are not satisfied
      // (projection active or precision floor) - give up after a few sweeps
      if (++stall >= 5) break;
    } else {
      stall = 0;
    }
  }

  if (out.signal_residuals.empty()) compute_residuals();
  out.cutoffs.resize(K + 1);
  out.signals.resize(K);
  for (int k = 0; k <= K; ++k) out.cutoffs[k] = cutoff_at(k);
  for (int k = 1; k <= K; ++k) out.signals[k - 1] = signal_at(k);
  return out;
}

}  // namespace coarse::detail
