#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace coarse {

// Composite Gauss-Legendre quadrature on a fixed uniform panel grid.
// The scheme is deterministic: identical inputs integrate to identical bits.

// 8-point Gauss-Legendre abscissae (positive half) and weights on [-1, 1].
inline constexpr std::array<double, 4> kGl8Nodes = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
inline constexpr std::array<double, 4> kGl8Weights = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

// Single 8-point rule over [a, b].
template <class F>
double gl8(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = h * kGl8Nodes[i];
    acc += kGl8Weights[i] * (f(c - d) + f(c + d));
  }
  return acc * h;
}

// Single 8-point rule returning (∫ f, ∫ x f) in one pass.
template <class F>
std::pair<double, double> gl8_pair(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = h * kGl8Nodes[i];
    const double xl = c - d, xr = c + d;
    const double fl = f(xl), fr = f(xr);
    m0 += kGl8Weights[i] * (fl + fr);
    m1 += kGl8Weights[i] * (xl * fl + xr * fr);
  }
  return {m0 * h, m1 * h};
}

// Composite rule over [a, b] with `panels` equal panels.
template <class F>
double integrate_panelwise(F&& f, double a, double b, int panels = 256) {
  if (a == b) return 0.0;
  double acc = 0.0;
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i) acc += gl8(f, a + i * w, a + (i + 1) * w);
  return acc;
}

// Prefix integrals of a scalar function over a fixed panel grid, with exact
// partial-panel handling.  mass(a, b) and moment(a, b) never difference two
// nearly equal prefix sums inside one panel, so tiny intervals keep full
// relative precision.
class PanelIntegrator {
 public:
  PanelIntegrator(std::function<double(double)> f, double lo, double hi, int panels = 256);

  double mass(double a, double b) const;    // ∫_a^b f
  double moment(double a, double b) const;  // ∫_a^b x f(x) dx
  std::pair<double, double> both(double a, double b) const;

  double total_mass() const { return cum0_.back(); }
  double total_moment() const { return cum1_.back(); }
  double prefix_mass(double x) const { return mass(lo_, x); }
  double prefix_moment(double x) const { return moment(lo_, x); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int panels() const { return panels_; }

 private:
  void check_range(double a, double b) const;

  std::function<double(double)> f_;
  double lo_, hi_, panel_width_;
  int panels_;
  std::vector<double> cum0_, cum1_;  // prefix sums at panel boundaries
};

}  // namespace coarse
