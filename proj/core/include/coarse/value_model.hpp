#pragma once

#include "coarse/function_model.hpp"

namespace coarse {

// A value function u on [0, 1], specified by its curvature u'' plus the
// anchors (u(1), u'(1)).  Default anchors are chosen so that u(0) = u'(0) = 0.
// Only u'' matters for the shape of the optimal structure; anchors matter for
// absolute payoff reporting.
class ValueModel {
 public:
  explicit ValueModel(FunctionModel curvature);
  ValueModel(FunctionModel curvature, double u_at_1, double du_at_1);

  double u(double x) const;
  double du(double x) const;
  double d2u(double x) const { return u2_(x); }

  const FunctionModel& curvature() const { return u2_; }
  double u1() const { return u1_; }
  double du1() const { return du1_; }

  // Signed barycenter of (a, b) under u'.
  double mu(double a, double b) const { return conditional_mean_mu(u2_, a, b); }

  // Common value functions.
  static ValueModel quadratic();  // u(x) = x^2
  static ValueModel from_expression(std::string_view u2_source);

 private:
  FunctionModel u2_;
  double u1_, du1_;
  double c0_, c1_;  // u(x) = c0 + c1 x + ∫_0^x (x - t) u''(t) dt
};

}  // namespace coarse
