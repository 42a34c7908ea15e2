#pragma once

#include <string>
#include <vector>

#include "coarse/function_model.hpp"
#include "coarse/value_model.hpp"

namespace coarse {

// Interval-partitional solution on [0, 1]: cutoffs s_0 = 0 < ... < s_N = 1,
// one induced signal per subinterval.
struct IntervalSolution {
  std::vector<double> cutoffs;  // N + 1
  std::vector<double> signals;  // N, x_k in (s_{k-1}, s_k)
  std::vector<double> masses;   // N, p_k = F(s_k) - F(s_{k-1})
  double payoff = 0.0;

  // Fixed-point residuals of the equation system that produced the solution:
  // |x_k - φ(s_{k-1}, s_k)| and |s_k - target(x_k, x_{k+1})|.
  std::vector<double> signal_residuals;
  std::vector<double> cutoff_residuals;

  int iterations = 0;
  bool converged = true;

  int n() const { return static_cast<int>(signals.size()); }
  double max_residual() const;
  std::vector<double> widths() const;
  std::vector<double> gaps() const;  // x_{k+1} - x_k

  // Ordering, signal placement, positive masses summing to one, mean
  // preservation.  Throws SolverError on violation.
  void validate(const FunctionModel& prior, double mass_tol = 1e-10,
                double mean_tol = 1e-8) const;
};

// One segment of a bi-pooling structure: either a single atom (the segment's
// conditional mean) or a pair of atoms on a common bi-tangent line of u.
struct PairSegment {
  bool is_pair = false;
  double a1 = 0.0, a2 = 0.0;  // atoms; a single segment uses a1 only
  double m1 = 0.0, m2 = 0.0;  // atom masses
  double mass() const { return is_pair ? m1 + m2 : m1; }
};

struct BiPoolingSolution {
  std::vector<double> cutoffs;        // K + 1
  std::vector<PairSegment> segments;  // K
  double payoff = 0.0;

  std::vector<double> segment_residuals;  // CE-F residual (single) / bi-tangency residual (pair)
  std::vector<double> cutoff_residuals;   // signed-barycenter residuals

  int iterations = 0;
  bool converged = true;

  int segment_count() const { return static_cast<int>(segments.size()); }
  int signal_count() const;
  bool has_pair() const;
  std::vector<double> atoms() const;
  std::vector<double> atom_masses() const;
};

// Treat an interval solution as the degenerate (all-singles) bi-pooling case.
BiPoolingSolution to_bipooling(const IntervalSolution& sol);

// Σ_k mass_k · u(atom_k), the primal objective ∫ u dG.
double payoff_direct(const IntervalSolution& sol, const ValueModel& value);
double payoff_direct(const BiPoolingSolution& sol, const ValueModel& value);

}  // namespace coarse
