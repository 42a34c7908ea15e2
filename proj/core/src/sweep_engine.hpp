#pragma once

// Internal Gauss-Seidel engine shared by the convex, cheap-talk, S-shaped,
// general-candidate and pricing solvers.  Not installed.

#include <functional>
#include <vector>

#include "coarse/solver_convex.hpp"

namespace coarse::detail {

struct SweepSpec {
  int segments = 1;  // K subintervals; K-1 interior cutoffs, K signals
  bool anchor_first_signal = false;
  double anchored_value = 0.0;
  // Relaxation factor: new = (1 - damping) old + damping target.
  double damping = 1.0;
  // Conditional mean of the state on (a, b) under the prior-like measure.
  std::function<double(double, double)> phi;
  // Cutoff rule: (k, x_k, x_{k+1}) -> target s_k, k = 1..K-1.
  std::function<double(int, double, double)> cutoff_target;
  // Optional projection applied to a proposed cutoff before assignment:
  // (k, proposed, x_k, x_{k+1}) -> value.
  std::function<double(int, double, double, double)> clamp;
};

struct SweepOutcome {
  std::vector<double> cutoffs;  // K+1 including the endpoints 0 and 1
  std::vector<double> signals;  // K
  int iterations = 0;
  bool converged = false;
  double last_delta = 0.0;
  double last_residual = 0.0;
  std::vector<double> signal_residuals;
  std::vector<double> cutoff_residuals;
};

// Interleaved seed (x_1, s_1, x_2, ..., x_K) for the requested seeding.
std::vector<double> make_seed(int segments, const SolverOptions& opts,
                              bool anchor_first_signal, double anchored_value);

// Runs sweeps until the sup-norm change drops below opts.step_tolerance and
// all residuals fall below opts.tolerance, or the iteration budget runs out.
// Throws SolverError when the cutoff ordering breaks or intervals collapse.
SweepOutcome run_sweep(const SweepSpec& spec, const SolverOptions& opts);

}  // namespace coarse::detail
