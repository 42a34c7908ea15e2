#include "coarse/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "sweep_engine.hpp"

namespace coarse {

namespace {

void validate_instance(const PricingInstance& inst) {
  if (!(inst.beta > 0.0 && inst.beta < 1.0))
    throw ValidationError("pricing: beta must lie in (0, 1)");
  if (!(inst.gamma > 0.0)) throw ValidationError("pricing: gamma must be positive");
  if (!(inst.eta >= 1.0)) throw ValidationError("pricing: eta must be >= 1");
  if (inst.menu_size < 1) throw ValidationError("pricing: menu size must be >= 1");
  const Interval dom = inst.type_density.domain();
  if (std::abs(dom.lo) > 1e-12 || std::abs(dom.hi - 1.0) > 1e-12)
    throw ValidationError("pricing: type density must live on [0, 1]");
}

}  // namespace

double virtual_surplus(const PricingInstance& inst, double phi, double q) {
  if (q < 0.0) throw ValidationError("virtual_surplus: q must be >= 0");
  return phi * std::pow(q, inst.beta) - inst.gamma * std::pow(q, inst.eta);
}

Virtualization virtualize(const PricingInstance& inst) {
  validate_instance(inst);
  const FunctionModel f = inst.type_density.as_density();

  const auto phi_vv = [f](double theta) {
    if (theta >= 1.0) return 1.0;  // (1 - F)/f vanishes at the top
    return theta - (1.0 - f.cdf(theta)) / f(theta);
  };

  // monotonicity of the virtual valuation on a grid
  const int grid = 512;
  double prev = phi_vv(0.5 / grid);
  for (int i = 1; i < grid; ++i) {
    const double cur = phi_vv((i + 0.5) / grid);
    if (cur < prev - 1e-10)
      throw ValidationError("pricing: virtual valuation is not increasing (instance rejected)");
    prev = cur;
  }

  // lowest type with non-negative virtual value
  double theta0 = 0.0;
  if (phi_vv(1e-9) < 0.0) {
    double lo = 1e-9, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi_vv(mid) < 0.0 ? lo : hi) = mid;
    }
    theta0 = 0.5 * (lo + hi);
  }

  const auto theta_of = [phi_vv, theta0](double v) {
    if (v <= 0.0) return theta0;
    if (v >= 1.0) return 1.0;
    double lo = theta0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi_vv(mid) < v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  // pushforward density of φ(θ) on [0, 1]: h(v) = f(θ(v)) / φ'(θ(v))
  Virtualization virt{FunctionModel::callable(
                          "pushforward of virtual valuation",
                          [f, phi_vv, theta_of](double v) {
                            const double theta = theta_of(v);
                            const double d = 1e-6;
                            const double lo = std::max(theta - d, 1e-9);
                            const double hi = std::min(theta + d, 1.0);
                            const double slope = (phi_vv(hi) - phi_vv(lo)) / (hi - lo);
                            return f(theta) / slope;
                          })
                          .as_density()};
  virt.excluded_type_mass = f.cdf(theta0);
  virt.theta_of_phi = theta_of;

  // pointwise maximal virtual surplus for v(q) = q^beta, c(q) = gamma q^eta
  const double beta = inst.beta, gamma = inst.gamma, eta = inst.eta;
  virt.q_star = [beta, gamma, eta](double phi) {
    if (phi <= 0.0) return 0.0;
    return std::pow(beta * phi / (gamma * eta), 1.0 / (eta - beta));
  };
  const auto q_star = virt.q_star;
  virt.pi_prime = [q_star, beta](double phi) { return std::pow(q_star(phi), beta); };
  virt.pi = [q_star, beta, gamma, eta](double phi) {
    if (phi <= 0.0) return 0.0;
    const double q = q_star(phi);
    return phi * std::pow(q, beta) - gamma * std::pow(q, eta);
  };
  return virt;
}

namespace {

// Signed barycenter under π'' in envelope form (π'' never evaluated):
//   μ^m(a, b) = [b π'(b) - a π'(a) - (π(b) - π(a))] / (π'(b) - π'(a)).
double mu_m(const Virtualization& virt, double a, double b) {
  const double pa = virt.pi_prime(a), pb = virt.pi_prime(b);
  if (!(pb - pa > 1e-300))
    throw BarycenterError("pricing: flat marginal surplus between the signals");
  return (b * pb - a * pa - (virt.pi(b) - virt.pi(a))) / (pb - pa);
}

}  // namespace

double MenuSolution::max_residual() const {
  double m = 0.0;
  for (double r : signal_residuals) m = std::max(m, r);
  for (double r : cutoff_residuals) m = std::max(m, r);
  return m;
}

MenuSolution solve_menu(const PricingInstance& inst, const SolverOptions& opts_in) {
  const Virtualization virt = virtualize(inst);
  const int N = inst.menu_size;

  SolverOptions opts = opts_in;
  opts.n = N + 1;  // exclusion segment plus N served segments

  detail::SweepSpec spec;
  spec.segments = N + 1;
  spec.anchor_first_signal = true;
  spec.anchored_value = 0.0;
  spec.phi = [&virt](double a, double b) { return conditional_mean_phi(virt.h, a, b); };
  spec.cutoff_target = [&virt](int, double xa, double xb) { return mu_m(virt, xa, xb); };

  detail::SweepOutcome out = detail::run_sweep(spec, opts);
  if (!out.converged)
    throw SolverError("menu iteration did not converge (last residual " +
                      std::to_string(out.last_residual) + ")");

  MenuSolution menu;
  menu.cutoffs = out.cutoffs;
  menu.signals = out.signals;
  menu.signals[0] = 0.0;
  menu.signal_residuals = out.signal_residuals;
  menu.cutoff_residuals = out.cutoff_residuals;
  menu.iterations = out.iterations;
  menu.converged = out.converged;

  menu.qualities.assign(N + 1, 0.0);
  for (int k = 1; k <= N; ++k) menu.qualities[k] = virt.q_star(menu.signals[k]);

  menu.masses.resize(N + 1);
  const double total = virt.h.total();
  for (int k = 0; k <= N; ++k)
    menu.masses[k] = virt.h.integrate(menu.cutoffs[k], menu.cutoffs[k + 1]) / total;

  // prices from binding local downward incentive compatibility, zero surplus
  // for the lowest served type
  menu.prices.assign(N + 1, 0.0);
  const auto v_of = [&inst](double q) { return std::pow(q, inst.beta); };
  for (int k = 1; k <= N; ++k) {
    const double cutoff_type = virt.theta_of_phi(menu.cutoffs[k]);
    menu.prices[k] = (k == 1 ? 0.0 : menu.prices[k - 1]) +
                     cutoff_type * (v_of(menu.qualities[k]) -
                                    (k == 1 ? 0.0 : v_of(menu.qualities[k - 1])));
  }

  menu.profit = 0.0;
  for (int k = 1; k <= N; ++k) menu.profit += menu.masses[k] * virt.pi(menu.signals[k]);

  // monotone quality ladder
  for (int k = 1; k <= N; ++k)
    if (menu.qualities[k] < menu.qualities[k - 1] - 1e-12)
      throw SolverError("menu qualities are not monotone");
  return menu;
}

double menu_profit_by_quadrature(const MenuSolution& menu, const Virtualization& virt) {
  const double total = virt.h.total();
  double acc = 0.0;
  for (std::size_t k = 1; k + 1 < menu.cutoffs.size(); ++k) {
    auto [m0, m1] = virt.h.segment_integrals(menu.cutoffs[k], menu.cutoffs[k + 1]);
    const double x = menu.signals[k];
    acc += (virt.pi(x) * m0 + virt.pi_prime(x) * (m1 - x * m0)) / total;
  }
  return acc;
}

bool menu_ic_ok(const MenuSolution& menu, const PricingInstance& inst,
                const Virtualization& virt, int grid_per_segment, double tol) {
  const int options = menu.options();
  const auto v_of = [&inst](double q) { return std::pow(q, inst.beta); };
  const auto utility = [&](double theta, int k) {
    return theta * v_of(menu.qualities[k]) - menu.prices[k];
  };
  for (int k = 0; k <= options; ++k) {
    const double t_lo = virt.theta_of_phi(menu.cutoffs[k]);
    const double t_hi = virt.theta_of_phi(menu.cutoffs[k + 1]);
    for (int i = 0; i < grid_per_segment; ++i) {
      const double theta = t_lo + (t_hi - t_lo) * (i + 0.5) / grid_per_segment;
      const double own = utility(theta, k);
      if (own < -tol) return false;  // participation
      for (int j = 0; j <= options; ++j)
        if (utility(theta, j) > own + tol) return false;
    }
  }
  return true;
}

ExclusionReport exclusion_comparative_static(const PricingInstance& inst, double beta_low,
                                             double beta_high, const SolverOptions& opts) {
  if (!(beta_low <= beta_high))
    throw ValidationError("exclusion_comparative_static: beta_low must be <= beta_high");
  PricingInstance lo = inst, hi = inst;
  lo.beta = beta_low;
  hi.beta = beta_high;
  ExclusionReport rep;
  rep.base = solve_menu(lo, opts);
  rep.shifted = solve_menu(hi, opts);
  for (std::size_t k = 1; k + 1 < rep.base.cutoffs.size(); ++k)
    rep.cutoff_shifts.push_back(rep.shifted.cutoffs[k] - rep.base.cutoffs[k]);
  rep.exclusion_shift = rep.shifted.cutoffs[1] - rep.base.cutoffs[1];
  if (rep.exclusion_shift < -1e-9)
    throw SolverError("exclusion region shrank after a valuation increase");
  return rep;
}

}  // namespace coarse
