#include "coarse/solution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coarse {

double IntervalSolution::max_residual() const {
  double m = 0.0;
  for (double r : signal_residuals) m = std::max(m, r);
  for (double r : cutoff_residuals) m = std::max(m, r);
  return m;
}

std::vector<double> IntervalSolution::widths() const {
  std::vector<double> w(signals.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = cutoffs[k + 1] - cutoffs[k];
  return w;
}

std::vector<double> IntervalSolution::gaps() const {
  if (signals.size() < 2) return {};
  std::vector<double> d(signals.size() - 1);
  for (std::size_t k = 0; k + 1 < signals.size(); ++k) d[k] = signals[k + 1] - signals[k];
  return d;
}

void IntervalSolution::validate(const FunctionModel& prior, double mass_tol,
                                double mean_tol) const {
  const int N = n();
  if (static_cast<int>(cutoffs.size()) != N + 1 || static_cast<int>(masses.size()) != N)
    throw SolverError("solution has inconsistent sizes");
  if (std::abs(cutoffs.front()) > 1e-12 || std::abs(cutoffs.back() - 1.0) > 1e-12)
    throw SolverError("cutoffs must start at 0 and end at 1");
  for (int k = 0; k < N; ++k) {
    if (!(cutoffs[k] < cutoffs[k + 1])) throw SolverError("cutoffs not strictly increasing");
    if (!(signals[k] > cutoffs[k] && signals[k] < cutoffs[k + 1]))
      throw SolverError("signal x_" + std::to_string(k + 1) + " outside its subinterval");
    if (!(masses[k] > 0.0)) throw SolverError("non-positive segment mass");
  }
  for (int k = 0; k + 1 < N; ++k)
    if (!(signals[k] < signals[k + 1])) throw SolverError("signals not strictly increasing");
  const double total_mass = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (std::abs(total_mass - 1.0) > mass_tol)
    throw SolverError("masses sum to " + std::to_string(total_mass));
  double mean = 0.0;
  for (int k = 0; k < N; ++k) mean += masses[k] * signals[k];
  if (std::abs(mean - prior.mean()) > mean_tol)
    throw SolverError("posterior means do not preserve the prior mean");
}

int BiPoolingSolution::signal_count() const {
  int c = 0;
  for (const auto& s : segments) c += s.is_pair ? 2 : 1;
  return c;
}

bool BiPoolingSolution::has_pair() const {
  return std::any_of(segments.begin(), segments.end(),
                     [](const PairSegment& s) { return s.is_pair; });
}

std::vector<double> BiPoolingSolution::atoms() const {
  std::vector<double> a;
  for (const auto& s : segments) {
    a.push_back(s.a1);
    if (s.is_pair) a.push_back(s.a2);
  }
  return a;
}

std::vector<double> BiPoolingSolution::atom_masses() const {
  std::vector<double> m;
  for (const auto& s : segments) {
    m.push_back(s.m1);
    if (s.is_pair) m.push_back(s.m2);
  }
  return m;
}

BiPoolingSolution to_bipooling(const IntervalSolution& sol) {
  BiPoolingSolution b;
  b.cutoffs = sol.cutoffs;
  b.payoff = sol.payoff;
  b.segment_residuals = sol.signal_residuals;
  b.cutoff_residuals = sol.cutoff_residuals;
  b.iterations = sol.iterations;
  b.converged = sol.converged;
  for (int k = 0; k < sol.n(); ++k) {
    PairSegment seg;
    seg.is_pair = false;
    seg.a1 = sol.signals[k];
    seg.m1 = sol.masses[k];
    b.segments.push_back(seg);
  }
  return b;
}

double payoff_direct(const IntervalSolution& sol, const ValueModel& value) {
  double acc = 0.0;
  for (int k = 0; k < sol.n(); ++k) acc += sol.masses[k] * value.u(sol.signals[k]);
  return acc;
}

double payoff_direct(const BiPoolingSolution& sol, const ValueModel& value) {
  double acc = 0.0;
  for (const auto& s : sol.segments) {
    acc += s.m1 * value.u(s.a1);
    if (s.is_pair) acc += s.m2 * value.u(s.a2);
  }
  return acc;
}

}  // namespace coarse
