#pragma once

#include <vector>

#include "coarse/solution.hpp"

namespace coarse {

struct SolverOptions {
  int n = 2;                      // signal budget N >= 1
  int max_iterations = 10000;
  double tolerance = 1e-8;        // residual tolerance
  double step_tolerance = 1e-10;  // sup-norm change per sweep

  enum class Seeding { NearZero, NearOne, EqualSplit, Custom };
  Seeding seeding = Seeding::NearOne;
  std::vector<double> custom_seed;  // interleaved (x_1, s_1, ..., x_N)

  // When set, every post-sweep iterate (interleaved) is appended here.
  std::vector<std::vector<double>>* trace_sink = nullptr;

  SolverOptions with_n(int budget) const {
    SolverOptions o = *this;
    o.n = budget;
    return o;
  }
  SolverOptions with_seeding(Seeding s) const {
    SolverOptions o = *this;
    o.seeding = s;
    return o;
  }
};

// Solves the dual-expectations system for a strictly convex value function:
//   x_k = φ(s_{k-1}, s_k)    k = 1..N
//   s_k = μ(x_k, x_{k+1})    k = 1..N-1
// by synchronous Gauss-Seidel sweeps.  Throws SolverError on non-convergence
// or collapsed intervals.
IntervalSolution solve_dual_expectations(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts);

// Runs the monotone iteration from near-one and near-zero seedings; the two
// limits are the largest and smallest fixed points.  `unique` holds when they
// coincide coordinatewise within 10x the residual tolerance.
struct UniquenessCertificate {
  bool unique = false;
  IntervalSolution largest;
  IntervalSolution smallest;
  // The higher-payoff fixed point (they coincide when unique).
  IntervalSolution solution;
  double max_coordinate_gap = 0.0;
};

UniquenessCertificate certify_uniqueness(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts);

// Cheap-talk variant: the cutoff rule is the sender-indifference condition
//   s_k = (x_k + x_{k+1}) / (2 κ1),   κ1 >= 1.
// The reported payoff is the receiver-aligned quadratic objective Σ p_k x_k².
IntervalSolution solve_cheap_talk(const FunctionModel& prior, double kappa1,
                                  const SolverOptions& opts);

}  // namespace coarse
