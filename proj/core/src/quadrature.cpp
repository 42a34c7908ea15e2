#include "coarse/quadrature.hpp"

#include <cmath>

#include "coarse/errors.hpp"

namespace coarse {

PanelIntegrator::PanelIntegrator(std::function<double(double)> f, double lo, double hi,
                                 int panels)
    : f_(std::move(f)), lo_(lo), hi_(hi), panels_(panels) {
  if (!(hi > lo)) throw ValidationError("PanelIntegrator: empty domain");
  if (panels < 1) throw ValidationError("PanelIntegrator: panels must be >= 1");
  panel_width_ = (hi - lo) / panels;
  cum0_.resize(panels + 1);
  cum1_.resize(panels + 1);
  cum0_[0] = cum1_[0] = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * panel_width_;
    const double b = (i + 1 == panels) ? hi : lo + (i + 1) * panel_width_;
    auto [m0, m1] = gl8_pair(f_, a, b);
    if (!std::isfinite(m0) || !std::isfinite(m1))
      throw ValidationError("PanelIntegrator: non-finite integrand in panel [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
    cum0_[i + 1] = cum0_[i] + m0;
    cum1_[i + 1] = cum1_[i] + m1;
  }
}

void PanelIntegrator::check_range(double a, double b) const {
  const double slack = 1e-12 * (hi_ - lo_);
  if (a < lo_ - slack || b > hi_ + slack || a > b)
    throw ValidationError("integration bounds [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] outside domain [" + std::to_string(lo_) +
                          ", " + std::to_string(hi_) + "]");
}

std::pair<double, double> PanelIntegrator::both(double a, double b) const {
  check_range(a, b);
  a = std::fmax(a, lo_);
  b = std::fmin(b, hi_);
  if (a >= b) return {0.0, 0.0};

  const auto panel_of = [&](double x) {
    int i = static_cast<int>((x - lo_) / panel_width_);
    return std::min(std::max(i, 0), panels_ - 1);
  };
  const int ia = panel_of(a);
  const int ib = panel_of(b);
  if (ia == ib) return gl8_pair(f_, a, b);

  const double edge_a = lo_ + (ia + 1) * panel_width_;
  const double edge_b = lo_ + ib * panel_width_;
  auto [m0, m1] = gl8_pair(f_, a, edge_a);
  m0 += cum0_[ib] - cum0_[ia + 1];
  m1 += cum1_[ib] - cum1_[ia + 1];
  auto [n0, n1] = gl8_pair(f_, edge_b, b);
  return {m0 + n0, m1 + n1};
}

double PanelIntegrator::mass(double a, double b) const { return both(a, b).first; }

double PanelIntegrator::moment(double a, double b) const { return both(a, b).second; }

}  // namespace coarse
