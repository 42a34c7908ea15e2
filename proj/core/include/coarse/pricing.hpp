#pragma once

#include <functional>

#include "coarse/solution.hpp"
#include "coarse/solver_convex.hpp"

namespace coarse {

// Nonlinear pricing with a finite menu: buyer valuation θ v(q), cost c(q),
// v(q) = q^beta (0 < beta < 1), c(q) = gamma q^eta (eta >= 1, linear when 1).
struct PricingInstance {
  FunctionModel type_density;  // f on [0, 1]
  double beta = 0.5;
  double gamma = 1.0;
  double eta = 1.0;
  int menu_size = 2;  // N positive options; the allocation takes N+1 values
};

// The transformed linear-persuasion ingredients: virtual-type density H on
// [0, 1], pointwise maximal virtual surplus π with its derivative π' = v∘q*,
// the unconstrained allocation q*, and the inverse virtual valuation.
struct Virtualization {
  explicit Virtualization(FunctionModel pushforward) : h(std::move(pushforward)) {}

  FunctionModel h;  // density of φ(θ) = θ - (1-F(θ))/f(θ) restricted to [0, 1]
  std::function<double(double)> q_star;
  std::function<double(double)> pi;
  std::function<double(double)> pi_prime;
  std::function<double(double)> theta_of_phi;
  double excluded_type_mass = 0.0;  // prior mass with negative virtual value
};

// Validates monotone virtual valuation and builds the transform.
Virtualization virtualize(const PricingInstance& instance);

// θ v(q) - c(q): the objective of the pointwise program defining π and q*.
double virtual_surplus(const PricingInstance& instance, double phi, double q);

struct MenuSolution {
  std::vector<double> cutoffs;    // virtual-type cutoffs s_0 = 0 < ... < s_{N+1} = 1
  std::vector<double> signals;    // x_1 = 0, x_2, ..., x_{N+1}
  std::vector<double> qualities;  // q_1 = 0, q_k = q*(x_k)
  std::vector<double> prices;     // p_1 = 0; binding local downward IC
  std::vector<double> masses;     // under H
  double profit = 0.0;

  std::vector<double> signal_residuals;  // CE-H
  std::vector<double> cutoff_residuals;  // CE-pi'
  int iterations = 0;
  bool converged = true;

  int options() const { return static_cast<int>(signals.size()) - 1; }
  double max_residual() const;
};

MenuSolution solve_menu(const PricingInstance& instance, const SolverOptions& opts);

// Expected virtual surplus computed by quadrature of the piecewise-tangent
// function against h; must agree with the segment sum in `profit`.
double menu_profit_by_quadrature(const MenuSolution& menu, const Virtualization& virt);

// Global incentive compatibility on a type grid: every served type prefers
// its own option, excluded types prefer the outside option.
bool menu_ic_ok(const MenuSolution& menu, const PricingInstance& instance,
                const Virtualization& virt, int grid_per_segment = 16, double tol = 1e-9);

struct ExclusionReport {
  MenuSolution base;     // valuation exponent beta_low
  MenuSolution shifted;  // valuation exponent beta_high
  std::vector<double> cutoff_shifts;
  double exclusion_shift = 0.0;  // ŝ1 - s1
};

// Raising beta makes π'' increase in likelihood ratio, so all cutoffs move
// right; in particular the exclusion region grows.
ExclusionReport exclusion_comparative_static(const PricingInstance& instance, double beta_low,
                                             double beta_high, const SolverOptions& opts);

}  // namespace coarse
