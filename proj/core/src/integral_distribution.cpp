#include "coarse/integral_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coarse {

IntegralDistribution::IntegralDistribution(std::vector<double> atoms,
                                           std::vector<double> masses)
    : atoms_(std::move(atoms)), masses_(std::move(masses)) {
  if (atoms_.empty() || atoms_.size() != masses_.size())
    throw ValidationError("IntegralDistribution needs matching non-empty atoms/masses");
  for (std::size_t j = 0; j + 1 < atoms_.size(); ++j)
    if (!(atoms_[j] < atoms_[j + 1]))
      throw ValidationError("IntegralDistribution atoms must be strictly increasing");
  for (double m : masses_)
    if (!(m > 0.0)) throw ValidationError("IntegralDistribution masses must be positive");
  cum_mass_.resize(atoms_.size());
  cum_weight_.resize(atoms_.size());
  double cm = 0.0, cw = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    cm += masses_[j];
    cw += masses_[j] * atoms_[j];
    cum_mass_[j] = cm;
    cum_weight_[j] = cw;
  }
}

double IntegralDistribution::operator()(double x) const {
  // I(x) = Σ_{a_j < x} m_j (x - a_j)
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  if (it == atoms_.begin()) return 0.0;
  const std::size_t j = static_cast<std::size_t>(it - atoms_.begin()) - 1;
  return cum_mass_[j] * x - cum_weight_[j];
}

double IntegralDistribution::slope_right(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  if (it == atoms_.begin()) return 0.0;
  return cum_mass_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double IntegralDistribution::mean() const {
  return cum_weight_.back() / cum_mass_.back();
}

namespace {

IntegralDistribution build_checked(std::vector<double> atoms, std::vector<double> masses,
                                   const std::vector<double>& cutoffs,
                                   const FunctionModel& prior, double tangency_tol) {
  IntegralDistribution ig(std::move(atoms), std::move(masses));

  // Tangency at every cutoff: value I_G(s) = I_F(s) and slope G(s) = F(s).
  for (std::size_t k = 1; k + 1 < cutoffs.size(); ++k) {
    const double s = cutoffs[k];
    const double gap = std::abs(ig(s) - prior.integral_cdf(s));
    if (gap > tangency_tol)
      throw MpcError("I_G fails tangency with I_F at cutoff " + std::to_string(s) +
                     " (gap " + std::to_string(gap) + ")");
    const double slope_gap = std::abs(ig.slope_right(s) - prior.cdf(s));
    if (slope_gap > tangency_tol)
      throw MpcError("G fails to match F at cutoff " + std::to_string(s));
  }

  // MPC bounds on the grid.
  const double prior_mean = prior.mean();
  for (int i = 0; i <= kMpcGrid; ++i) {
    const double x = static_cast<double>(i) / kMpcGrid;
    const double v = ig(x);
    if (v > prior.integral_cdf(x) + tangency_tol)
      throw MpcError("I_G exceeds I_F at x = " + std::to_string(x));
    if (v < std::max(0.0, x - prior_mean) - tangency_tol)
      throw MpcError("I_G below I_F0 at x = " + std::to_string(x));
  }
  return ig;
}

}  // namespace

IntegralDistribution build_integral_distribution(const IntervalSolution& sol,
                                                 const FunctionModel& prior,
                                                 double tangency_tol) {
  return build_checked(sol.signals, sol.masses, sol.cutoffs, prior, tangency_tol);
}

IntegralDistribution build_integral_distribution(const BiPoolingSolution& sol,
                                                 const FunctionModel& prior,
                                                 double tangency_tol) {
  return build_checked(sol.atoms(), sol.atom_masses(), sol.cutoffs, prior, tangency_tol);
}

bool weakly_less_informative(const IntegralDistribution& a, const IntegralDistribution& b,
                             int grid, double tol) {
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    if (a(x) > b(x) + tol) return false;
  }
  return true;
}

double payoff_auxiliary(const IntegralDistribution& ig, const ValueModel& value,
                        double i_f_at_1) {
  // ∫ u'' I_G is exact per linear piece: on [p, q] with I_G = α + β x,
  //   ∫ u'' (α + β x) = α (U1(q) - U1(p)) + β (MU(q) - MU(p)).
  const auto& atoms = ig.atoms();
  const FunctionModel& u2 = value.curvature();
  double integral = 0.0;
  double cum_mass = 0.0, cum_weight = 0.0;
  for (std::size_t j = 0; j <= atoms.size(); ++j) {
    const double p = j == 0 ? 0.0 : atoms[j - 1];
    const double q = j == atoms.size() ? 1.0 : atoms[j];
    if (q > p) {
      auto [m0, m1] = u2.segment_integrals(p, q);
      integral += -cum_weight * m0 + cum_mass * m1;
    }
    if (j < atoms.size()) {
      cum_mass += ig.masses()[j];
      cum_weight += ig.masses()[j] * atoms[j];
    }
  }
  return value.u1() - value.du1() * i_f_at_1 + integral;
}

double payoff_auxiliary(const IntegralDistribution& ig, const ValueModel& value,
                        const FunctionModel& prior) {
  return payoff_auxiliary(ig, value, prior.integral_cdf(1.0));
}

SegmentMpc segment_pair_mpc(const FunctionModel& prior, double s_lo, double s_hi, double a1,
                            double a2, double m1, double m2, int grid) {
  SegmentMpc rep;
  rep.worst_at = s_lo;
  rep.worst_gap = std::numeric_limits<double>::infinity();
  if (!(s_lo < a1 && a1 <= a2 && a2 < s_hi)) return rep;  // atoms outside the segment
  if (m1 < 0.0 || m2 < 0.0 || !(m1 + m2 > 0.0)) return rep;

  const double seg_mass = prior.integrate(s_lo, s_hi);
  if (!(seg_mass > 0.0)) return rep;

  // Conditional integral distributions on the segment, both anchored at s_lo:
  //   I_F|seg(x) = ∫_{s_lo}^x (x - t) f(t) dt / seg_mass
  //   I_G|seg(x) = (m1 (x - a1)^+ + m2 (x - a2)^+) / (m1 + m2)
  const auto if_seg = [&](double x) {
    auto [m0, mom] = prior.segment_integrals(s_lo, x);
    return (x * m0 - mom) / seg_mass;
  };
  const auto ig_seg = [&](double x) {
    return (m1 * std::max(0.0, x - a1) + m2 * std::max(0.0, x - a2)) / (m1 + m2);
  };

  double worst = -std::numeric_limits<double>::infinity();
  double at = s_lo;
  const auto probe = [&](double x) {
    const double gap = ig_seg(x) - if_seg(x);
    if (gap > worst) {
      worst = gap;
      at = x;
    }
  };
  for (int i = 1; i < grid; ++i) probe(s_lo + (s_hi - s_lo) * i / grid);
  probe(a1);
  probe(a2);

  rep.worst_gap = worst;
  rep.worst_at = at;
  rep.ok = worst <= 1e-9;
  return rep;
}

}  // namespace coarse
