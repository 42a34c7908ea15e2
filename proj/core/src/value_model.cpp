#include "coarse/value_model.hpp"

#include <cmath>

namespace coarse {

namespace {

void require_unit_domain(const FunctionModel& u2) {
  const Interval dom = u2.domain();
  if (std::abs(dom.lo) > 1e-12 || std::abs(dom.hi - 1.0) > 1e-12)
    throw ValidationError("value curvature must live on [0, 1] (rescale the problem first)");
}

}  // namespace

ValueModel::ValueModel(FunctionModel curvature) : u2_(std::move(curvature)) {
  require_unit_domain(u2_);
  // u(0) = u'(0) = 0:  u'(1) = ∫ u'',  u(1) = ∫ (1 - t) u''(t) dt
  c0_ = 0.0;
  c1_ = 0.0;
  auto [m0, m1] = u2_.segment_integrals(0.0, 1.0);
  du1_ = m0;
  u1_ = m0 - m1;
}

ValueModel::ValueModel(FunctionModel curvature, double u_at_1, double du_at_1)
    : u2_(std::move(curvature)), u1_(u_at_1), du1_(du_at_1) {
  require_unit_domain(u2_);
  auto [m0, m1] = u2_.segment_integrals(0.0, 1.0);
  c1_ = du1_ - m0;             // u'(x) = c1 + ∫_0^x u''
  c0_ = u1_ - c1_ - (m0 - m1); // from u(1) = c0 + c1 + ∫ (1 - t) u''
}

double ValueModel::u(double x) const {
  // ∫_0^x (x - t) u''(t) dt = x U1(x) - MU(x)
  auto [m0, m1] = u2_.segment_integrals(0.0, x);
  return c0_ + c1_ * x + x * m0 - m1;
}

double ValueModel::du(double x) const { return c1_ + u2_.integrate(0.0, x); }

ValueModel ValueModel::quadratic() {
  return ValueModel(FunctionModel::piecewise_constant({0.0, 1.0}, {2.0}));
}

ValueModel ValueModel::from_expression(std::string_view u2_source) {
  return ValueModel(FunctionModel::expression(u2_source));
}

}  // namespace coarse
