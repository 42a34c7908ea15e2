#pragma once

#include "coarse/solution.hpp"
#include "coarse/solver_convex.hpp"

namespace coarse {

// Sign pattern of a curvature function on a check grid.
enum class CurvatureShape {
  Convex,            // u'' >= 0 everywhere
  Concave,           // u'' <= 0 everywhere
  SShaped,           // one sign change, + then - (single-crossing from above)
  SShapedReflected,  // one sign change, - then +
  General,           // several sign changes
};

CurvatureShape classify_curvature(const FunctionModel& u2, int grid = 512);

// Raised by detect_inflection when the curvature is not S-shaped; carries the
// shape so callers can route to the right solver.
class ShapeRoutingError : public ValidationError {
 public:
  ShapeRoutingError(const std::string& what, CurvatureShape shape)
      : ValidationError(what), shape(shape) {}
  CurvatureShape shape;
};

struct SShapeProfile {
  double inflection = 0.0;  // x̂: u'' > 0 below, < 0 above
  bool sign_verified = false;
};

// Locates the single sign change of u'' and refines it by bisection to 1e-12.
SShapeProfile detect_inflection(const FunctionModel& u2, int grid = 512);

// Unconstrained optimum under an S-shaped value function: reveal everything
// below s*, pool everything above.
struct UpperCensorship {
  double s_star = 0.0;
  double payoff = 0.0;
};

UpperCensorship compute_upper_censorship(const FunctionModel& prior, const ValueModel& value);

// I_{G*} of the upper-censorship structure: equals I_F below s*, then runs
// linearly with slope F(s*) into the null-information envelope.
class CensorshipIntegral {
 public:
  CensorshipIntegral(const FunctionModel& prior, double s_star);
  double operator()(double x) const;
  double pooled_atom() const { return pooled_atom_; }

 private:
  double s_star_, f_star_, i_f_star_, prior_mean_, pooled_atom_;
  const FunctionModel* prior_;
};

// Constrained solve: the dual-expectations sweep with the signed barycenter,
// projecting the top cutoff onto [s_{N-2}, x̂] each sweep.
IntervalSolution solve_sshaped(const FunctionModel& prior, const ValueModel& value,
                               const SolverOptions& opts);

// Mirror case (u'' single-crossing from below), handled by reflecting the
// state x -> 1 - x, solving the S-shaped problem, and mapping back.
IntervalSolution solve_sshaped_reflected(const FunctionModel& prior, const ValueModel& value,
                                         const SolverOptions& opts);

}  // namespace coarse
