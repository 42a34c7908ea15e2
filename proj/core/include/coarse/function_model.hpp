#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coarse/errors.hpp"
#include "coarse/expression.hpp"
#include "coarse/quadrature.hpp"

namespace coarse {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// φ(a, b) had zero conditional mass under the prior.
class ZeroMassError : public SolverError {
 public:
  explicit ZeroMassError(const std::string& what) : SolverError(what) {}
};

// The signed measure u' put (numerically) zero mass on (a, b); the barycenter
// μ(a, b) is ill-posed there.
class BarycenterError : public SolverError {
 public:
  explicit BarycenterError(const std::string& what) : SolverError(what) {}
};

// A represented scalar function on a closed interval: prior densities f,
// value-function curvatures u'', shock densities h.  Construction eagerly
// tabulates prefix integrals on the quadrature panel grid; instances are
// immutable afterwards and safe to share across threads.
class FunctionModel {
 public:
  enum class Kind { Uniform, Beta, TruncatedNormal, PiecewiseConstant, Expression, Callable };

  static FunctionModel uniform(Interval dom = {0.0, 1.0});
  static FunctionModel beta(double alpha, double beta);  // domain [0, 1]
  static FunctionModel truncated_normal(double mean, double sigma, Interval dom = {0.0, 1.0});
  static FunctionModel piecewise_constant(std::vector<double> breakpoints,
                                          std::vector<double> values);
  static FunctionModel expression(const Expression& expr, Interval dom = {0.0, 1.0},
                                  int panels = kDefaultPanels);
  static FunctionModel expression(std::string_view source, Interval dom = {0.0, 1.0},
                                  int panels = kDefaultPanels);
  static FunctionModel callable(std::string label, std::function<double(double)> fn,
                                Interval dom = {0.0, 1.0}, int panels = kDefaultPanels);

  static constexpr int kDefaultPanels = 256;

  double operator()(double x) const { return scale_ * raw_(x); }

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  Interval domain() const { return dom_; }
  double scale() const { return scale_; }

  // ∫_a^b fm and ∫_a^b x·fm(x) dx, within quadrature tolerance.
  double integrate(double a, double b) const;
  double moment(double a, double b) const;
  std::pair<double, double> segment_integrals(double a, double b) const;

  double total() const;  // ∫ over the whole domain
  double mean() const;   // ∫ x fm / ∫ fm

  // Normalized CDF F(x) = ∫_lo^x fm / total and its integral I_F(x) = ∫_lo^x F.
  double cdf(double x) const;
  double integral_cdf(double x) const;

  FunctionModel scaled(double factor) const;
  // Rescaled so the function integrates to 1 over its domain (density role);
  // rejects signed or identically-zero functions.
  FunctionModel as_density() const;

 private:
  FunctionModel() = default;

  Kind kind_ = Kind::Callable;
  std::string label_;
  Interval dom_;
  double scale_ = 1.0;
  std::function<double(double)> raw_;
  std::shared_ptr<const PanelIntegrator> table_;  // null for piecewise-constant kinds
  std::vector<double> pc_breaks_, pc_values_;     // analytic path
};

// Conditional mean of the state on (a, b) under density f:
//   φ(a, b) = ∫_a^b t f(t) dt / ∫_a^b f(t) dt.
double conditional_mean_phi(const FunctionModel& f, double a, double b);

// Barycenter of (a, b) under the (possibly signed) measure with density u'':
//   μ(a, b) = ∫_a^b t u''(t) dt / ∫_a^b u''(t) dt.
// For positive u'' this is the conditional mean and lies inside (a, b); for
// signed u'' it may lie outside and is returned as-is.
double conditional_mean_mu(const FunctionModel& u2, double a, double b);

struct LogconcavityReport {
  bool logconcave = false;
  bool all_positive = true;   // false if fm <= 0 somewhere (log undefined)
  double worst_violation = 0; // max second difference of log fm over the grid
  double worst_at = 0;
};

// Numerical logconcavity check via second differences of log fm on a uniform
// interior grid.
LogconcavityReport is_logconcave(const FunctionModel& fm, int grid_points = 512);

}  // namespace coarse
