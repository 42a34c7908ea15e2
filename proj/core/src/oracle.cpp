#include "coarse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coarse/integral_distribution.hpp"

namespace coarse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int default_grid(int n) { return n <= 2 ? 200 : n == 3 ? 120 : 60; }

IntervalSolution null_information(const FunctionModel& prior, const ValueModel& value) {
  IntervalSolution sol;
  sol.cutoffs = {0.0, 1.0};
  sol.signals = {prior.mean()};
  sol.masses = {1.0};
  sol.signal_residuals = {0.0};
  sol.payoff = payoff_direct(sol, value);
  return sol;
}

// payoff of the interval structure with the given full cutoff vector
double interval_payoff(const FunctionModel& prior, const ValueModel& value, double total,
                       const std::vector<double>& cutoffs) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cutoffs.size(); ++k) {
    auto [m0, m1] = prior.segment_integrals(cutoffs[k], cutoffs[k + 1]);
    if (!(m0 > 0.0)) return kNegInf;
    acc += (m0 / total) * value.u(m1 / m0);
  }
  return acc;
}

// Coordinate descent over the interior cutoffs with halving steps.
void refine_cutoffs(const FunctionModel& prior, const ValueModel& value, double total,
                    std::vector<double>& cutoffs, double& best, double step,
                    double step_floor = 1e-10) {
  const double min_width = 1e-9;
  while (step > step_floor) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 200) {
      improved = false;
      for (std::size_t i = 1; i + 1 < cutoffs.size(); ++i) {
        for (double dir : {+1.0, -1.0}) {
          const double trial = cutoffs[i] + dir * step;
          if (trial <= cutoffs[i - 1] + min_width || trial >= cutoffs[i + 1] - min_width)
            continue;
          const double save = cutoffs[i];
          cutoffs[i] = trial;
          const double p = interval_payoff(prior, value, total, cutoffs);
          if (p > best) {
            best = p;
            improved = true;
          } else {
            cutoffs[i] = save;
          }
        }
      }
    }
    step *= 0.5;
  }
}

IntervalSolution finish_interval(const FunctionModel& prior, const ValueModel& value,
                                 double total, const std::vector<double>& cutoffs) {
  IntervalSolution sol;
  sol.cutoffs = cutoffs;
  const int n = static_cast<int>(cutoffs.size()) - 1;
  sol.signals.resize(n);
  sol.masses.resize(n);
  sol.signal_residuals.assign(n, 0.0);
  sol.cutoff_residuals.assign(n - 1, 0.0);
  for (int k = 0; k < n; ++k) {
    auto [m0, m1] = prior.segment_integrals(cutoffs[k], cutoffs[k + 1]);
    sol.signals[k] = m1 / m0;
    sol.masses[k] = m0 / total;
  }
  for (int k = 1; k < n; ++k) {
    try {
      sol.cutoff_residuals[k - 1] =
          std::abs(cutoffs[k] - value.mu(sol.signals[k - 1], sol.signals[k]));
    } catch (const BarycenterError&) {
      sol.cutoff_residuals[k - 1] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  sol.payoff = payoff_direct(sol, value);
  return sol;
}

// enumerate strictly increasing interior index vectors on {1, ..., g-1}
template <class Fn>
void for_each_combination(int coords, int g, Fn&& fn) {
  std::vector<int> idx(coords);
  for (int i = 0; i < coords; ++i) idx[i] = i + 1;
  if (coords == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int i = coords - 1;
    while (i >= 0 && idx[i] == g - 1 - (coords - 1 - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < coords; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// masses of the two atoms matching the segment's mass and conditional mean
bool split_masses(double seg_mass, double c, double a1, double a2, double& m1, double& m2) {
  if (a2 <= a1) {  // degenerate pair collapses onto the mean
    m1 = seg_mass;
    m2 = 0.0;
    return std::abs(a1 - c) < 1e-12;
  }
  if (!(a1 < c && c < a2)) return false;
  m2 = seg_mass * (c - a1) / (a2 - a1);
  m1 = seg_mass - m2;
  return m1 >= 0.0 && m2 >= 0.0;
}

struct PairCandidate {
  std::vector<double> cutoffs;
  int pair_pos = 1;  // 1-based segment index of the pair
  double a1 = 0, a2 = 0;
  double payoff = kNegInf;
};

// Exact payoff with MPC feasibility at the requested probe resolution.
double pair_payoff_exact(const FunctionModel& prior, const ValueModel& value, double total,
                         const PairCandidate& cand, int mpc_grid) {
  double acc = 0.0;
  const int K = static_cast<int>(cand.cutoffs.size()) - 1;
  for (int k = 1; k <= K; ++k) {
    const double lo = cand.cutoffs[k - 1], hi = cand.cutoffs[k];
    auto [m0, m1] = prior.segment_integrals(lo, hi);
    if (!(m0 > 0.0)) return kNegInf;
    const double c = m1 / m0;
    if (k == cand.pair_pos) {
      double w1, w2;
      if (!split_masses(m0, c, cand.a1, cand.a2, w1, w2)) return kNegInf;
      if (!segment_pair_mpc(prior, lo, hi, cand.a1, cand.a2, w1, w2, mpc_grid).ok)
        return kNegInf;
      acc += (w1 * value.u(cand.a1) + w2 * value.u(cand.a2)) / total;
    } else {
      acc += (m0 / total) * value.u(c);
    }
  }
  return acc;
}

}  // namespace

IntervalSolution oracle_interval(const FunctionModel& prior, const ValueModel& value, int n,
                                 int grid) {
  if (n < 1) throw ValidationError("oracle_interval: N must be >= 1");
  if (n == 1) return null_information(prior, value);
  if (grid == 0) grid = default_grid(n);
  if (grid < 100) grid = 100;
  const double total = prior.total();

  // the budget is an upper bound: for non-convex value functions the best
  // structure may use fewer signals
  std::vector<double> best_cutoffs = {0.0, 1.0};
  double best = interval_payoff(prior, value, total, best_cutoffs);
  for (int m = 2; m <= n; ++m) {
    std::vector<double> cutoffs(m + 1);
    cutoffs[0] = 0.0;
    cutoffs[m] = 1.0;
    for_each_combination(m - 1, grid, [&](const std::vector<int>& idx) {
      for (int i = 0; i < m - 1; ++i) cutoffs[i + 1] = static_cast<double>(idx[i]) / grid;
      const double p = interval_payoff(prior, value, total, cutoffs);
      if (p > best) {
        best = p;
        best_cutoffs = cutoffs;
      }
    });
  }

  refine_cutoffs(prior, value, total, best_cutoffs, best, 0.5 / grid);
  return finish_interval(prior, value, total, best_cutoffs);
}

BiPoolingSolution oracle_bipooling(const FunctionModel& prior, const ValueModel& value, int n,
                                   int grid) {
  if (n < 1) throw ValidationError("oracle_bipooling: N must be >= 1");
  if (n == 1) return to_bipooling(null_information(prior, value));
  if (grid == 0) grid = default_grid(n);
  const double total = prior.total();

  IntervalSolution interval_best = oracle_interval(prior, value, n, grid);

  // Basin search on a master grid: prefix mass/moment and u tabulated once,
  // candidates evaluated from table differences.
  const int G = 480;
  const int gc = 32;       // cutoff grid (G / gc aligned)
  const int stride_c = G / gc;
  std::vector<double> M0(G + 1), M1(G + 1), U(G + 1);
  for (int i = 0; i <= G; ++i) {
    const double x = static_cast<double>(i) / G;
    auto [m0, m1] = prior.segment_integrals(0.0, x);
    M0[i] = m0;
    M1[i] = m1;
    U[i] = value.u(x);
  }

  PairCandidate best;

  // one pair plus K-1 singles, for every sub-budget K+1 <= n
  for (int K = 1; K <= n - 1; ++K) {
  std::vector<int> cut_idx(K + 1);
  cut_idx[0] = 0;
  cut_idx[K] = G;
  for_each_combination(K - 1, gc, [&](const std::vector<int>& idx) {
    for (int i = 0; i < K - 1; ++i) cut_idx[i + 1] = idx[i] * stride_c;
    // payoff of the single segments, computed once per cutoff vector
    std::vector<double> single_term(K + 1, 0.0);
    bool valid = true;
    for (int k = 1; k <= K && valid; ++k) {
      const double m0 = M0[cut_idx[k]] - M0[cut_idx[k - 1]];
      const double m1 = M1[cut_idx[k]] - M1[cut_idx[k - 1]];
      if (!(m0 > 0.0)) {
        valid = false;
        break;
      }
      single_term[k] = (m0 / total) * value.u(m1 / m0);
    }
    if (!valid) return;
    double singles_sum = 0.0;
    for (int k = 1; k <= K; ++k) singles_sum += single_term[k];

    for (int p = 1; p <= K; ++p) {
      const int ilo = cut_idx[p - 1], ihi = cut_idx[p];
      const double m0 = M0[ihi] - M0[ilo];
      const double m1 = M1[ihi] - M1[ilo];
      const double c = m1 / m0;
      const int ic = static_cast<int>(c * G);
      const int stride_a = std::max(1, (ihi - ilo) / 24);
      for (int ia = ilo + 1; ia <= ic; ia += stride_a) {
        const double a1 = static_cast<double>(ia) / G;
        if (!(a1 < c)) break;
        for (int ib = ihi - 1; ib > ic; ib -= stride_a) {
          const double a2 = static_cast<double>(ib) / G;
          if (!(a2 > c)) break;
          double w1, w2;
          if (!split_masses(m0, c, a1, a2, w1, w2)) continue;
          // MPC pre-filter from the tables
          bool ok = true;
          const int probe_stride = std::max(1, (ib - ia) / 16);
          for (int ix = ia; ix <= ib && ok; ix += probe_stride) {
            const double x = static_cast<double>(ix) / G;
            const double if_seg = (x * (M0[ix] - M0[ilo]) - (M1[ix] - M1[ilo])) / m0;
            const double ig_seg =
                (w1 * std::max(0.0, x - a1) + w2 * std::max(0.0, x - a2)) / m0;
            ok = ig_seg <= if_seg + 1e-9;
          }
          if (!ok) continue;
          const double payoff =
              singles_sum - single_term[p] + (w1 * U[ia] + w2 * U[ib]) / total;
          if (payoff > best.payoff) {
            best.cutoffs.resize(K + 1);
            for (int k = 0; k <= K; ++k)
              best.cutoffs[k] = static_cast<double>(cut_idx[k]) / G;
            best.pair_pos = p;
            best.a1 = a1;
            best.a2 = a2;
            best.payoff = payoff;
          }
        }
      }
    }
  });
  }  // sub-budget loop

  // Exact coordinate-descent refinement of the pair candidate.
  if (best.payoff > kNegInf) {
    const int K = static_cast<int>(best.cutoffs.size()) - 1;
    best.payoff = pair_payoff_exact(prior, value, total, best, 128);
    double step = 0.5 / gc;
    const double min_width = 1e-9;
    while (step > 1e-9 && best.payoff > kNegInf) {
      bool improved = true;
      int guard = 0;
      while (improved && guard++ < 100) {
        improved = false;
        const int coords = (K - 1) + 2;
        for (int ci = 0; ci < coords; ++ci) {
          for (double dir : {+1.0, -1.0}) {
            PairCandidate trial = best;
            if (ci < K - 1) {
              double& s = trial.cutoffs[ci + 1];
              s += dir * step;
              if (s <= trial.cutoffs[ci] + min_width || s >= trial.cutoffs[ci + 2] - min_width)
                continue;
            } else if (ci == K - 1) {
              trial.a1 += dir * step;
            } else {
              trial.a2 += dir * step;
            }
            trial.payoff = pair_payoff_exact(prior, value, total, trial, 128);
            if (trial.payoff > best.payoff) {
              best = trial;
              improved = true;
            }
          }
        }
      }
      step *= 0.5;
    }
    // final verification at high resolution; nudge atoms inward if the coarse
    // probes let a marginal violation through
    if (best.payoff > kNegInf) {
      double verified = pair_payoff_exact(prior, value, total, best, 1024);
      int nudges = 0;
      while (!(verified > kNegInf) && nudges++ < 200) {
        const double pull = 1e-5 * (best.a2 - best.a1);
        best.a1 += pull;
        best.a2 -= pull;
        verified = pair_payoff_exact(prior, value, total, best, 1024);
      }
      best.payoff = verified;
    }
  }

  if (!(best.payoff > interval_best.payoff)) return to_bipooling(interval_best);

  // materialize the winning pair structure
  const int K = static_cast<int>(best.cutoffs.size()) - 1;
  BiPoolingSolution sol;
  sol.cutoffs = best.cutoffs;
  sol.payoff = best.payoff;
  for (int k = 1; k <= K; ++k) {
    const double lo = best.cutoffs[k - 1], hi = best.cutoffs[k];
    auto [m0, m1] = prior.segment_integrals(lo, hi);
    const double c = m1 / m0;
    PairSegment seg;
    if (k == best.pair_pos) {
      double w1 = 0.0, w2 = 0.0;
      split_masses(m0, c, best.a1, best.a2, w1, w2);
      seg.is_pair = true;
      seg.a1 = best.a1;
      seg.a2 = best.a2;
      seg.m1 = w1 / total;
      seg.m2 = w2 / total;
    } else {
      seg.a1 = c;
      seg.m1 = m0 / total;
    }
    sol.segments.push_back(seg);
  }
  sol.segment_residuals.assign(K, 0.0);
  sol.cutoff_residuals.assign(K - 1, 0.0);
  sol.iterations = 0;
  return sol;
}

}  // namespace coarse
