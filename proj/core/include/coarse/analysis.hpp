#pragma once

#include <optional>
#include <vector>

#include "coarse/solution.hpp"
#include "coarse/solver_convex.hpp"

namespace coarse {

// Decreasing-then-increasing (or monotone), with comparison slack.
bool is_single_dipped(const std::vector<double>& seq, double slack = 1e-9);

// Detects increasing-then-decreasing shape on a grid; returns the mode.
std::optional<double> unimodal_mode(const FunctionModel& fm, int grid = 512);

struct ScrutinyReport {
  std::vector<double> widths;       // w_k = s_k - s_{k-1}
  std::vector<double> gaps;         // d_k = x_{k+1} - x_k
  std::vector<double> interleaved;  // {w_1, d_1, w_2, ..., d_{N-1}, w_N}
  bool single_dipped = false;
  int center_index = 1;  // 1-based k with the minimum width (smallest on ties)
  std::optional<double> density_mode, curvature_mode;
};

ScrutinyReport scrutiny_report(const IntervalSolution& sol,
                               const FunctionModel* density = nullptr,
                               const FunctionModel* curvature = nullptr);

// Likelihood-ratio shift comparison: solves both problems and reports the
// coordinatewise movements of cutoffs and signals.
struct ShiftReport {
  IntervalSolution base, shifted;
  std::vector<double> cutoff_shifts, signal_shifts;
  bool ratio_monotone = false;  // shifted/base ratio increasing on the grid
  bool base_unique = false, shifted_unique = false;
  bool all_weakly_increasing = false;
  double min_shift = 0.0;
  // The direction claim is only asserted when preconditions verified.
  bool asserted() const { return ratio_monotone && base_unique && shifted_unique; }
};

ShiftReport compare_likelihood_ratio(const FunctionModel& f_base, const ValueModel& u_base,
                                     const FunctionModel& f_shifted, const ValueModel& u_shifted,
                                     const SolverOptions& opts);

// Uniform-variability comparison: the shifted interleaved sequence crosses
// the base sequence at most once and from above.
struct VariabilityReport {
  IntervalSolution base, shifted;
  std::vector<double> diffs;  // interleaved (x̂_1-x_1, ŝ_1-s_1, ..., x̂_N-x_N)
  bool ratio_unimodal = false;
  bool base_unique = false, shifted_unique = false;
  int sign_changes = 0;
  bool first_sign_positive = false;  // orientation when a crossing exists
  bool at_most_one_crossing = false;
  bool asserted() const { return ratio_unimodal && base_unique && shifted_unique; }
};

VariabilityReport compare_uniform_variability(const FunctionModel& f_base,
                                              const ValueModel& u_base,
                                              const FunctionModel& f_shifted,
                                              const ValueModel& u_shifted,
                                              const SolverOptions& opts);

}  // namespace coarse
