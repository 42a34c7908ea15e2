#pragma once

#include <vector>

#include "coarse/solution.hpp"

namespace coarse {

// Integral distribution I_G(x) = ∫_0^x G(t) dt of a finite-support G on
// [0, 1]: increasing, convex, piecewise linear with kinks at the atoms.
class IntegralDistribution {
 public:
  IntegralDistribution(std::vector<double> atoms, std::vector<double> masses);

  double operator()(double x) const;
  double slope_right(double x) const;  // G(x+)
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& masses() const { return masses_; }
  double at_one() const { return (*this)(1.0); }
  double mean() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> masses_;
  std::vector<double> cum_mass_;    // Σ_{j<=k} m_j
  std::vector<double> cum_weight_;  // Σ_{j<=k} m_j a_j
};

class MpcError : public SolverError {
 public:
  explicit MpcError(const std::string& what) : SolverError(what) {}
};

// Number of grid points used by mean-preserving-contraction checks.
inline constexpr int kMpcGrid = 2048;

// Builds I_G from a solution, checking tangency with I_F at every interior
// cutoff (value and slope) and the MPC bounds I_{F0} <= I_G <= I_F on the
// grid.  Throws MpcError on an infeasible solution.
IntegralDistribution build_integral_distribution(const IntervalSolution& sol,
                                                 const FunctionModel& prior,
                                                 double tangency_tol = 1e-6);
IntegralDistribution build_integral_distribution(const BiPoolingSolution& sol,
                                                 const FunctionModel& prior,
                                                 double tangency_tol = 1e-6);

// Blackwell comparison: A is weakly less informative than B iff I_A <= I_B
// everywhere on the grid.
bool weakly_less_informative(const IntegralDistribution& a, const IntegralDistribution& b,
                             int grid = kMpcGrid, double tol = 1e-9);

// Payoff in the auxiliary form u(1) - u'(1) I_F(1) + ∫ u'' I_G; the integral
// is exact per linear piece of I_G given the curvature prefix integrals.
double payoff_auxiliary(const IntegralDistribution& ig, const ValueModel& value,
                        double i_f_at_1);
double payoff_auxiliary(const IntegralDistribution& ig, const ValueModel& value,
                        const FunctionModel& prior);

// Conditional MPC check for a two-atom segment: can the prior restricted to
// (s_lo, s_hi) be garbled into atoms a1 < a2 with masses m1, m2?  Holds iff
// the conditional I_G stays below the conditional I_F on the grid.
struct SegmentMpc {
  bool ok = false;
  double worst_gap = 0.0;  // max of I_G|seg - I_F|seg (> 0 means violation)
  double worst_at = 0.0;
};
SegmentMpc segment_pair_mpc(const FunctionModel& prior, double s_lo, double s_hi, double a1,
                            double a2, double m1, double m2, int grid = 256);

}  // namespace coarse
