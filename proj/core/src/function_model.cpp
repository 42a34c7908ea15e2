#include "coarse/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coarse {

namespace {

double pc_mass(const std::vector<double>& breaks, const std::vector<double>& vals, double a,
               double b) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double l = std::max(a, breaks[j]);
    const double r = std::min(b, breaks[j + 1]);
    if (r > l) acc += vals[j] * (r - l);
  }
  return acc;
}

double pc_moment(const std::vector<double>& breaks, const std::vector<double>& vals, double a,
                 double b) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double l = std::max(a, breaks[j]);
    const double r = std::min(b, breaks[j + 1]);
    if (r > l) acc += vals[j] * 0.5 * (r * r - l * l);
  }
  return acc;
}

}  // namespace

FunctionModel FunctionModel::uniform(Interval dom) {
  FunctionModel fm;
  fm.kind_ = Kind::Uniform;
  fm.label_ = "uniform";
  fm.dom_ = dom;
  fm.raw_ = [](double) { return 1.0; };
  fm.pc_breaks_ = {dom.lo, dom.hi};
  fm.pc_values_ = {1.0};
  return fm;
}

FunctionModel FunctionModel::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ValidationError("beta density requires alpha > 0 and beta > 0");
  FunctionModel fm;
  fm.kind_ = Kind::Beta;
  fm.label_ = "beta(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
  fm.dom_ = {0.0, 1.0};
  const double log_norm = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  fm.raw_ = [alpha, beta, log_norm](double x) {
    return std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0) * std::exp(-log_norm);
  };
  fm.table_ = std::make_shared<PanelIntegrator>(fm.raw_, 0.0, 1.0, kDefaultPanels);
  return fm;
}

FunctionModel FunctionModel::truncated_normal(double mean, double sigma, Interval dom) {
  if (!(sigma > 0.0)) throw ValidationError("truncated normal requires sigma > 0");
  FunctionModel fm;
  fm.kind_ = Kind::TruncatedNormal;
  fm.label_ = "truncated-normal(" + std::to_string(mean) + "," + std::to_string(sigma) + ")";
  fm.dom_ = dom;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  fm.raw_ = [mean, inv2s2](double x) {
    const double d = x - mean;
    return std::exp(-d * d * inv2s2);
  };
  fm.table_ = std::make_shared<PanelIntegrator>(fm.raw_, dom.lo, dom.hi, kDefaultPanels);
  return fm;
}

FunctionModel FunctionModel::piecewise_constant(std::vector<double> breakpoints,
                                                std::vector<double> values) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
    throw ValidationError("piecewise-constant needs k+1 breakpoints for k values");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw ValidationError("piecewise-constant breakpoints must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("piecewise-constant values must be finite");
  FunctionModel fm;
  fm.kind_ = Kind::PiecewiseConstant;
  fm.label_ = "piecewise-constant";
  fm.dom_ = {breakpoints.front(), breakpoints.back()};
  fm.pc_breaks_ = std::move(breakpoints);
  fm.pc_values_ = std::move(values);
  const auto breaks = fm.pc_breaks_;
  const auto vals = fm.pc_values_;
  fm.raw_ = [breaks, vals](double x) {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    std::size_t j = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
    if (j >= vals.size()) j = vals.size() - 1;
    return vals[j];
  };
  return fm;
}

FunctionModel FunctionModel::expression(const Expression& expr, Interval dom, int panels) {
  FunctionModel fm;
  fm.kind_ = Kind::Expression;
  fm.label_ = expr.to_string();
  fm.dom_ = dom;
  fm.raw_ = [expr](double x) { return expr.eval(x); };
  fm.table_ = std::make_shared<PanelIntegrator>(fm.raw_, dom.lo, dom.hi, panels);
  return fm;
}

FunctionModel FunctionModel::expression(std::string_view source, Interval dom, int panels) {
  return expression(Expression::parse(source), dom, panels);
}

FunctionModel FunctionModel::callable(std::string label, std::function<double(double)> fn,
                                      Interval dom, int panels) {
  FunctionModel fm;
  fm.kind_ = Kind::Callable;
  fm.label_ = std::move(label);
  fm.dom_ = dom;
  fm.raw_ = std::move(fn);
  fm.table_ = std::make_shared<PanelIntegrator>(fm.raw_, dom.lo, dom.hi, panels);
  return fm;
}

std::pair<double, double> FunctionModel::segment_integrals(double a, double b) const {
  if (a > b) throw ValidationError("segment_integrals: a > b");
  if (table_) {
    auto [m0, m1] = table_->both(a, b);
    return {scale_ * m0, scale_ * m1};
  }
  const double slack = 1e-12 * dom_.width();
  if (a < dom_.lo - slack || b > dom_.hi + slack)
    throw ValidationError("integration bounds outside domain");
  return {scale_ * pc_mass(pc_breaks_, pc_values_, a, b),
          scale_ * pc_moment(pc_breaks_, pc_values_, a, b)};
}

double FunctionModel::integrate(double a, double b) const { return segment_integrals(a, b).first; }

double FunctionModel::moment(double a, double b) const { return segment_integrals(a, b).second; }

double FunctionModel::total() const { return integrate(dom_.lo, dom_.hi); }

double FunctionModel::mean() const {
  auto [m0, m1] = segment_integrals(dom_.lo, dom_.hi);
  if (m0 == 0.0) throw ZeroMassError("mean of a zero-mass function");
  return m1 / m0;
}

double FunctionModel::cdf(double x) const {
  const double t = total();
  if (t == 0.0) throw ZeroMassError("cdf of a zero-mass function");
  return integrate(dom_.lo, x) / t;
}

double FunctionModel::integral_cdf(double x) const {
  // ∫_lo^x F(t) dt = x F(x) - ∫_lo^x t f(t) dt / total   (integration by parts)
  const double t = total();
  if (t == 0.0) throw ZeroMassError("integral_cdf of a zero-mass function");
  auto [m0, m1] = segment_integrals(dom_.lo, x);
  return x * (m0 / t) - m1 / t;
}

FunctionModel FunctionModel::scaled(double factor) const {
  FunctionModel fm = *this;
  fm.scale_ *= factor;
  return fm;
}

FunctionModel FunctionModel::as_density() const {
  // sample interior points for sign violations before rescaling
  const int samples = 4096;
  const double w = dom_.width();
  double max_abs = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = dom_.lo + w * (i + 0.5) / samples;
    max_abs = std::max(max_abs, std::abs((*this)(x)));
  }
  if (max_abs == 0.0) throw ValidationError("density is identically zero");
  for (int i = 0; i < samples; ++i) {
    const double x = dom_.lo + w * (i + 0.5) / samples;
    if ((*this)(x) < -1e-12 * max_abs)
      throw ValidationError("density is negative at x = " + std::to_string(x));
  }
  const double t = total();
  if (!(t > 0.0)) throw ValidationError("density must have positive total mass");
  return scaled(1.0 / t);
}

double conditional_mean_phi(const FunctionModel& f, double a, double b) {
  if (!(a < b)) throw ValidationError("conditional_mean_phi requires a < b");
  auto [m0, m1] = f.segment_integrals(a, b);
  if (!(m0 > 0.0) || m0 < 1e-300)
    throw ZeroMassError("zero conditional mass on (" + std::to_string(a) + ", " +
                        std::to_string(b) + ")");
  return m1 / m0;
}

double conditional_mean_mu(const FunctionModel& u2, double a, double b) {
  if (!(a < b)) throw ValidationError("conditional_mean_mu requires a < b");
  auto [m0, m1] = u2.segment_integrals(a, b);
  if (std::abs(m0) < 1e-12)
    throw BarycenterError("barycenter denominator ~0 on (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
  return m1 / m0;
}

LogconcavityReport is_logconcave(const FunctionModel& fm, int grid_points) {
  if (grid_points < 3) throw ValidationError("is_logconcave needs at least 3 grid points");
  const Interval dom = fm.domain();
  const double h = dom.width() / grid_points;
  std::vector<double> logs(grid_points);
  LogconcavityReport rep;
  for (int i = 0; i < grid_points; ++i) {
    const double x = dom.lo + h * (i + 0.5);
    const double v = fm(x);
    if (!(v > 0.0)) {
      rep.logconcave = false;
      rep.all_positive = false;
      rep.worst_violation = std::numeric_limits<double>::infinity();
      rep.worst_at = x;
      return rep;
    }
    logs[i] = std::log(v);
  }
  double worst = -std::numeric_limits<double>::infinity();
  double at = dom.lo;
  for (int i = 1; i + 1 < grid_points; ++i) {
    const double d2 = logs[i + 1] - 2.0 * logs[i] + logs[i - 1];
    if (d2 > worst) {
      worst = d2;
      at = dom.lo + h * (i + 0.5);
    }
  }
  rep.worst_violation = worst;
  rep.worst_at = at;
  rep.logconcave = worst <= 1e-9;
  return rep;
}

}  // namespace coarse
