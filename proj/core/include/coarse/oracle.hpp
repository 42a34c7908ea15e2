#pragma once

#include "coarse/solution.hpp"

namespace coarse {

// Brute-force verification oracles.  They maximize the primal payoff
// Σ mass_k u(atom_k) directly over gridded structures and never touch the
// fixed-point solvers; agreement with a solver output certifies it on small
// instances.

// Grid search over monotone interior cutoff vectors, refined by coordinate
// descent with halving steps.  grid = 0 picks a default by N (200 for N = 2,
// 120 for N = 3, 60 beyond).  Practical up to N = 4.
IntervalSolution oracle_interval(const FunctionModel& prior, const ValueModel& value, int n,
                                 int grid = 0);

// Adds one two-atom segment to the search: every pair position, gridded
// cutoffs, and gridded mean-preserving atom splits (checked against the
// segment MPC condition).  Returns the best feasible structure, which may be
// degenerate (no pair) when intervals win.
BiPoolingSolution oracle_bipooling(const FunctionModel& prior, const ValueModel& value, int n,
                                   int grid = 0);

}  // namespace coarse
