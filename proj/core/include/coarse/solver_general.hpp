#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "coarse/solution.hpp"
#include "coarse/solver_convex.hpp"

namespace coarse {

// An affine line tangent to u at two distinct points: u'(x1) = u'(x2) and
// u(x2) - u(x1) = u'(x1) (x2 - x1).  Pins the atoms of a bi-pooling segment.
struct BitangentPair {
  double x1 = 0.0, x2 = 0.0;
  double slope_residual = 0.0;
  double chord_residual = 0.0;
  double residual() const { return std::max(slope_residual, chord_residual); }
};

// All bi-tangent pairs found by pairing the convex pieces adjacent to each
// concave piece of u (grid scan for sign changes of the bi-tangency residual,
// then bisection refinement).  Empty for convex u.
std::vector<BitangentPair> find_bitangents(const ValueModel& value, int grid = 512);

struct PairSegmentSpec {
  double s_lo = 0.0, s_hi = 1.0;
  double a1 = 0.0, a2 = 0.0;
  double m1 = 0.0, m2 = 0.0;  // masses in solution units (sum to the segment mass)
};

struct FeasibilityReport {
  bool feasible = false;
  double worst_gap = 0.0;
  double worst_at = 0.0;
  std::string reason;
};

// Verifies that the two-atom conditional distribution can be induced from the
// prior restricted to the segment: mass and mean consistency plus the
// conditional MPC bound on a grid.
FeasibilityReport check_bipooling_feasibility(const PairSegmentSpec& seg,
                                              const FunctionModel& prior, int grid = 256);

struct CandidateDiagnostic {
  std::string arrangement;
  bool converged = false;
  bool feasible = false;
  double payoff = 0.0;
  std::string note;
};

// General (regular) value functions: enumerates structures mixing single
// segments with bi-pooling segments pinned at the bi-tangent atoms, solves
// each candidate's equation system, discards infeasible candidates, and
// returns the feasible candidate with the highest payoff.  Convex, concave
// and S-shaped curvatures route straight to the dedicated solvers.
BiPoolingSolution solve_general(const FunctionModel& prior, const ValueModel& value,
                                const SolverOptions& opts,
                                std::vector<CandidateDiagnostic>* diagnostics = nullptr);

}  // namespace coarse
