#include "coarse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coarse {

namespace {

// ratio shifted/base sampled on an interior grid; scale-free
std::vector<double> ratio_samples(const FunctionModel& base, const FunctionModel& shifted,
                                  int grid) {
  std::vector<double> r(grid);
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    const double b = base(x);
    if (!(std::abs(b) > 0.0)) return {};  // ratio undefined
    r[i] = shifted(x) / b;
  }
  return r;
}

bool nondecreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] < v[i] - slack) return false;
  return true;
}

bool unimodal(const std::vector<double>& v, double slack) {
  bool falling = false;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!falling && v[i + 1] < v[i] - slack) falling = true;
    if (falling && v[i + 1] > v[i] + slack) return false;
  }
  return true;
}

bool models_equal(const FunctionModel& a, const FunctionModel& b, int grid = 128) {
  // compare up to scale (densities are used normalized)
  const double sa = a.total(), sb = b.total();
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    if (std::abs(a(x) / sa - b(x) / sb) > 1e-12) return false;
  }
  return true;
}

constexpr double kRatioSlack = 1e-10;

}  // namespace

bool is_single_dipped(const std::vector<double>& seq, double slack) {
  bool rising = false;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!rising && seq[i + 1] > seq[i] + slack) rising = true;
    if (rising && seq[i + 1] < seq[i] - slack) return false;
  }
  return true;
}

std::optional<double> unimodal_mode(const FunctionModel& fm, int grid) {
  const Interval dom = fm.domain();
  std::vector<double> v(grid);
  int arg = 0;
  for (int i = 0; i < grid; ++i) {
    v[i] = fm(dom.lo + dom.width() * (i + 0.5) / grid);
    if (v[i] > v[arg]) arg = i;
  }
  const double slack = 1e-12 * std::abs(v[arg]);
  if (!unimodal(v, slack)) return std::nullopt;
  // golden refinement around the grid argmax
  double a = dom.lo + dom.width() * std::max(0, arg - 1) / static_cast<double>(grid);
  double b = dom.lo + dom.width() * std::min(grid, arg + 2) / static_cast<double>(grid);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = fm(c), fd = fm(d);
  while (b - a > 1e-10) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fm(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fm(d);
    }
  }
  return 0.5 * (a + b);
}

ScrutinyReport scrutiny_report(const IntervalSolution& sol, const FunctionModel* density,
                               const FunctionModel* curvature) {
  ScrutinyReport rep;
  rep.widths = sol.widths();
  rep.gaps = sol.gaps();
  rep.interleaved.clear();
  for (std::size_t k = 0; k < rep.widths.size(); ++k) {
    rep.interleaved.push_back(rep.widths[k]);
    if (k < rep.gaps.size()) rep.interleaved.push_back(rep.gaps[k]);
  }
  rep.single_dipped = is_single_dipped(rep.interleaved);
  double min_w = rep.widths[0];
  for (double w : rep.widths) min_w = std::min(min_w, w);
  for (std::size_t k = 0; k < rep.widths.size(); ++k)
    if (rep.widths[k] <= min_w + 1e-12) {
      rep.center_index = static_cast<int>(k) + 1;
      break;
    }
  if (density) rep.density_mode = unimodal_mode(*density);
  if (curvature) rep.curvature_mode = unimodal_mode(*curvature);
  return rep;
}

namespace {

struct ComparedPair {
  IntervalSolution base, shifted;
  bool base_unique = false, shifted_unique = false;
};

ComparedPair solve_both(const FunctionModel& f0, const ValueModel& u0, const FunctionModel& f1,
                        const ValueModel& u1, const SolverOptions& opts) {
  ComparedPair out;
  UniquenessCertificate c0 = certify_uniqueness(f0, u0, opts);
  UniquenessCertificate c1 = certify_uniqueness(f1, u1, opts);
  out.base = c0.solution;
  out.shifted = c1.solution;
  out.base_unique = c0.unique;
  out.shifted_unique = c1.unique;
  return out;
}

// ratio precondition applies to whichever component actually changed
bool components_ratio_ok(const FunctionModel& f0, const FunctionModel& f1,
                         const FunctionModel& u20, const FunctionModel& u21,
                         bool want_unimodal) {
  const int grid = 512;
  const auto check = [&](const FunctionModel& a, const FunctionModel& b) {
    if (models_equal(a, b)) return true;
    const std::vector<double> r = ratio_samples(a, b, grid);
    if (r.empty()) return false;
    return want_unimodal ? unimodal(r, kRatioSlack) : nondecreasing(r, kRatioSlack);
  };
  return check(f0, f1) && check(u20, u21);
}

}  // namespace

ShiftReport compare_likelihood_ratio(const FunctionModel& f_base, const ValueModel& u_base,
                                     const FunctionModel& f_shifted,
                                     const ValueModel& u_shifted, const SolverOptions& opts) {
  ShiftReport rep;
  rep.ratio_monotone = components_ratio_ok(f_base, f_shifted, u_base.curvature(),
                                           u_shifted.curvature(), /*want_unimodal=*/false);
  ComparedPair pair = solve_both(f_base, u_base, f_shifted, u_shifted, opts);
  rep.base = std::move(pair.base);
  rep.shifted = std::move(pair.shifted);
  rep.base_unique = pair.base_unique;
  rep.shifted_unique = pair.shifted_unique;

  const int n = rep.base.n();
  rep.min_shift = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    rep.cutoff_shifts.push_back(rep.shifted.cutoffs[k] - rep.base.cutoffs[k]);
    rep.min_shift = std::min(rep.min_shift, rep.cutoff_shifts.back());
  }
  for (int k = 0; k < n; ++k) {
    rep.signal_shifts.push_back(rep.shifted.signals[k] - rep.base.signals[k]);
    rep.min_shift = std::min(rep.min_shift, rep.signal_shifts.back());
  }
  rep.all_weakly_increasing = rep.min_shift >= -opts.tolerance;
  return rep;
}

VariabilityReport compare_uniform_variability(const FunctionModel& f_base,
                                              const ValueModel& u_base,
                                              const FunctionModel& f_shifted,
                                              const ValueModel& u_shifted,
                                              const SolverOptions& opts) {
  VariabilityReport rep;
  rep.ratio_unimodal = components_ratio_ok(f_base, f_shifted, u_base.curvature(),
                                           u_shifted.curvature(), /*want_unimodal=*/true);
  ComparedPair pair = solve_both(f_base, u_base, f_shifted, u_shifted, opts);
  rep.base = std::move(pair.base);
  rep.shifted = std::move(pair.shifted);
  rep.base_unique = pair.base_unique;
  rep.shifted_unique = pair.shifted_unique;

  const int n = rep.base.n();
  for (int k = 1; k <= n; ++k) {
    rep.diffs.push_back(rep.shifted.signals[k - 1] - rep.base.signals[k - 1]);
    if (k < n) rep.diffs.push_back(rep.shifted.cutoffs[k] - rep.base.cutoffs[k]);
  }

  // sign sequence with a zero band
  const double zero_band = 1e-9;
  int prev_sign = 0;
  rep.sign_changes = 0;
  for (double d : rep.diffs) {
    const int s = d > zero_band ? 1 : d < -zero_band ? -1 : 0;
    if (s == 0) continue;
    if (prev_sign == 0) {
      rep.first_sign_positive = s > 0;
    } else if (s != prev_sign) {
      ++rep.sign_changes;
    }
    prev_sign = s;
  }
  rep.at_most_one_crossing =
      rep.sign_changes == 0 || (rep.sign_changes == 1 && rep.first_sign_positive);
  return rep;
}

}  // namespace coarse
