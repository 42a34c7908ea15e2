#include "coarse/solver_general.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "coarse/integral_distribution.hpp"
#include "coarse/solver_sshaped.hpp"

namespace coarse {

namespace {

struct CurvaturePiece {
  int sign;          // +1 convex, -1 concave
  double lo, hi;     // grid extent
};

std::vector<CurvaturePiece> curvature_pieces(const FunctionModel& u2, int grid) {
  double max_abs = 0.0;
  std::vector<double> xs(grid), vs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = (i + 0.5) / grid;
    vs[i] = u2(xs[i]);
    max_abs = std::max(max_abs, std::abs(vs[i]));
  }
  const double tol = 1e-12 * max_abs;
  std::vector<CurvaturePiece> pieces;
  for (int i = 0; i < grid; ++i) {
    const int s = vs[i] > tol ? 1 : vs[i] < -tol ? -1 : 0;
    if (s == 0) continue;
    if (pieces.empty() || pieces.back().sign != s)
      pieces.push_back({s, xs[i], xs[i]});
    else
      pieces.back().hi = xs[i];
  }
  return pieces;
}

}  // namespace

std::vector<BitangentPair> find_bitangents(const ValueModel& value, int grid) {
  const auto pieces = curvature_pieces(value.curvature(), grid);
  std::vector<BitangentPair> pairs;

  // conjugate point x2 in [lo, hi] with u'(x2) = slope; u' is monotone on a
  // single-signed piece (increasing on convex, decreasing on concave)
  const auto conjugate = [&](double slope, double lo, double hi, int sign) -> double {
    const double flo = sign * (value.du(lo) - slope);
    const double fhi = sign * (value.du(hi) - slope);
    if (flo > 0.0 || fhi < 0.0) return std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sign * (value.du(mid) - slope) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  // A pair can straddle a concave piece (tangency points in the adjacent
  // convex pieces) or a convex piece (tangency points in the adjacent
  // concave pieces, the line locally above u).
  for (std::size_t i = 1; i + 1 < pieces.size(); ++i) {
    const CurvaturePiece& left = pieces[i - 1];
    const CurvaturePiece& right = pieces[i + 1];
    const int atom_sign = -pieces[i].sign;
    if (left.sign != atom_sign || right.sign != atom_sign) continue;

    // bi-tangency residual as a function of the left tangency point
    const auto residual_at = [&](double x1) -> double {
      const double x2 = conjugate(value.du(x1), right.lo, right.hi, atom_sign);
      if (!std::isfinite(x2)) return std::numeric_limits<double>::quiet_NaN();
      return value.u(x2) - value.u(x1) - value.du(x1) * (x2 - x1);
    };

    const int scan = 96;
    double prev_x = std::numeric_limits<double>::quiet_NaN();
    double prev_r = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j <= scan; ++j) {
      const double x1 = left.lo + (left.hi - left.lo) * j / scan;
      const double r = residual_at(x1);
      if (std::isfinite(prev_r) && std::isfinite(r) && prev_r * r <= 0.0 && prev_r != r) {
        double lo = prev_x, hi = x1, rlo = prev_r;
        while (hi - lo > 1e-13) {
          const double mid = 0.5 * (lo + hi);
          const double rm = residual_at(mid);
          if ((rm <= 0.0) == (rlo <= 0.0)) {
            lo = mid;
            rlo = rm;
          } else {
            hi = mid;
          }
        }
        BitangentPair pair;
        pair.x1 = 0.5 * (lo + hi);
        pair.x2 = conjugate(value.du(pair.x1), right.lo, right.hi, atom_sign);
        if (!std::isfinite(pair.x2)) continue;
        pair.slope_residual = std::abs(value.du(pair.x1) - value.du(pair.x2));
        pair.chord_residual = std::abs(value.u(pair.x2) - value.u(pair.x1) -
                                       value.du(pair.x1) * (pair.x2 - pair.x1));
        const bool duplicate =
            !pairs.empty() && std::abs(pairs.back().x1 - pair.x1) < 1e-8;
        if (!duplicate && pair.x2 > pair.x1) pairs.push_back(pair);
      }
      prev_x = x1;
      prev_r = r;
    }
  }
  return pairs;
}

FeasibilityReport check_bipooling_feasibility(const PairSegmentSpec& seg,
                                              const FunctionModel& prior, int grid) {
  FeasibilityReport rep;
  if (!(seg.s_lo < seg.a1 && seg.a1 <= seg.a2 && seg.a2 < seg.s_hi)) {
    rep.reason = "atoms outside the segment";
    return rep;
  }
  if (seg.m1 < 0.0 || seg.m2 < 0.0) {
    rep.reason = "negative atom mass";
    return rep;
  }
  const double total = prior.total();
  auto [m0, m1] = prior.segment_integrals(seg.s_lo, seg.s_hi);
  const double seg_mass = m0 / total;
  const double seg_mean = m1 / m0;
  if (std::abs(seg.m1 + seg.m2 - seg_mass) > 1e-9) {
    rep.reason = "atom masses do not reproduce the segment mass";
    return rep;
  }
  const double mean = (seg.m1 * seg.a1 + seg.m2 * seg.a2) / (seg.m1 + seg.m2);
  if (std::abs(mean - seg_mean) > 1e-9) {
    rep.reason = "atoms do not reproduce the segment conditional mean";
    return rep;
  }
  const SegmentMpc mpc =
      segment_pair_mpc(prior, seg.s_lo, seg.s_hi, seg.a1, seg.a2, seg.m1, seg.m2, grid);
  rep.worst_gap = mpc.worst_gap;
  rep.worst_at = mpc.worst_at;
  rep.feasible = mpc.ok;
  if (!mpc.ok) rep.reason = "conditional MPC violated";
  return rep;
}

namespace {

// which bi-tangent pair, if any, occupies each segment slot
struct Layout {
  std::vector<int> pair_index;  // per segment: -1 single, else index into pairs
};

std::string layout_string(const Layout& lay, const std::vector<BitangentPair>& pairs) {
  std::ostringstream os;
  for (std::size_t k = 0; k < lay.pair_index.size(); ++k) {
    if (k) os << ' ';
    if (lay.pair_index[k] < 0)
      os << 's';
    else
      os << "p(" << pairs[lay.pair_index[k]].x1 << ',' << pairs[lay.pair_index[k]].x2 << ')';
  }
  return os.str();
}

struct CandidateSolution {
  BiPoolingSolution sol;
  bool ok = false;
};

// Gauss-Seidel solve of one candidate layout with pair atoms held fixed.
// `damping` relaxes the updates (new = (1-w) old + w target); the signed
// barycenter map can oscillate at full steps.
CandidateSolution solve_candidate(const FunctionModel& prior, const ValueModel& value,
                                  const SolverOptions& opts, const Layout& lay,
                                  const std::vector<BitangentPair>& pairs,
                                  CandidateDiagnostic& diag, double damping = 1.0) {
  CandidateSolution out;
  const int K = static_cast<int>(lay.pair_index.size());
  const double total = prior.total();

  // fixed anchors per cutoff: nearest pair atom (or domain endpoint) on each side
  std::vector<double> win_lo(K), win_hi(K);  // for cutoffs 1..K-1 (index k-1)
  for (int k = 1; k < K; ++k) {
    double lo = 0.0, hi = 1.0;
    for (int j = k; j >= 1; --j)
      if (lay.pair_index[j - 1] >= 0) {
        lo = pairs[lay.pair_index[j - 1]].x2;
        break;
      }
    for (int j = k + 1; j <= K; ++j)
      if (lay.pair_index[j - 1] >= 0) {
        hi = pairs[lay.pair_index[j - 1]].x1;
        break;
      }
    win_lo[k - 1] = lo;
    win_hi[k - 1] = hi;
    if (!(lo < hi)) {
      diag.note = "pair atoms leave no room for the cutoffs";
      return out;
    }
  }

  // seed: cutoffs equally spaced within each run sharing a window
  std::vector<double> s(K + 1);
  s[0] = 0.0;
  s[K] = 1.0;
  for (int k = 1; k < K;) {
    int run_end = k;
    while (run_end + 1 < K && win_lo[run_end] == win_lo[k - 1] &&
           win_hi[run_end] == win_hi[k - 1])
      ++run_end;
    const int cnt = run_end - k + 1;
    for (int r = 0; r < cnt; ++r)
      s[k + r] = win_lo[k - 1] + (win_hi[k - 1] - win_lo[k - 1]) * (r + 1) / (cnt + 1.0);
    k = run_end + 1;
  }

  std::vector<double> x(K, 0.0);  // signals for single segments
  const auto y_left = [&](int k) {  // rightmost atom of segment k (1-based)
    return lay.pair_index[k - 1] >= 0 ? pairs[lay.pair_index[k - 1]].x2 : x[k - 1];
  };
  const auto y_right = [&](int k) {  // leftmost atom of segment k
    return lay.pair_index[k - 1] >= 0 ? pairs[lay.pair_index[k - 1]].x1 : x[k - 1];
  };

  for (int k = 1; k <= K; ++k)
    if (lay.pair_index[k - 1] < 0) x[k - 1] = 0.5 * (s[k - 1] + s[k]);

  bool converged = false;
  int iterations = 0;
  try {
    for (int it = 1; it <= opts.max_iterations; ++it) {
      double delta = 0.0;
      for (int k = 1; k <= K; ++k) {
        if (lay.pair_index[k - 1] < 0) {
          const double nx = (1.0 - damping) * x[k - 1] +
                            damping * conditional_mean_phi(prior, s[k - 1], s[k]);
          delta = std::max(delta, std::abs(nx - x[k - 1]));
          x[k - 1] = nx;
        }
        if (k < K) {
          const double yl = y_left(k), yr = y_right(k + 1);
          double ns = (1.0 - damping) * s[k] + damping * value.mu(yl, yr);
          const double lo = std::nextafter(yl, 1.0), hi = std::nextafter(yr, 0.0);
          ns = std::clamp(ns, lo, hi);
          if (!(ns > s[k - 1]) || !(ns < s[k + 1])) throw SolverError("cutoff ordering broke");
          delta = std::max(delta, std::abs(ns - s[k]));
          s[k] = ns;
        }
      }
      iterations = it;
      if (delta < opts.step_tolerance) {
        converged = true;
        break;
      }
    }
  } catch (const SolverError& e) {
    diag.note = e.what();
    return out;
  }
  if (!converged) {
    diag.note = "no convergence";
    return out;
  }

  // assemble and compute residuals against the unclamped equations
  BiPoolingSolution sol;
  sol.cutoffs = s;
  sol.iterations = iterations;
  double max_res = 0.0;
  try {
    for (int k = 1; k <= K; ++k) {
      PairSegment seg;
      auto [m0, m1] = prior.segment_integrals(s[k - 1], s[k]);
      if (!(m0 > 0.0)) throw SolverError("empty segment");
      const double c = m1 / m0;
      if (lay.pair_index[k - 1] >= 0) {
        const BitangentPair& bp = pairs[lay.pair_index[k - 1]];
        seg.is_pair = true;
        seg.a1 = bp.x1;
        seg.a2 = bp.x2;
        if (!(bp.x1 < c && c < bp.x2)) {
          diag.note = "segment mean escapes the bi-tangent atoms";
          return out;
        }
        seg.m2 = (m0 / total) * (c - bp.x1) / (bp.x2 - bp.x1);
        seg.m1 = m0 / total - seg.m2;
        sol.segment_residuals.push_back(bp.residual());
      } else {
        seg.a1 = c;
        seg.m1 = m0 / total;
        sol.segment_residuals.push_back(std::abs(x[k - 1] - c));
        max_res = std::max(max_res, std::abs(x[k - 1] - c));
      }
      sol.segments.push_back(seg);
    }
    for (int k = 1; k < K; ++k) {
      const double r = std::abs(s[k] - value.mu(y_left(k), y_right(k + 1)));
      sol.cutoff_residuals.push_back(r);
      max_res = std::max(max_res, r);
    }
  } catch (const SolverError& e) {
    diag.note = e.what();
    return out;
  }
  if (max_res > opts.tolerance) {
    diag.note = "residuals above tolerance (projection active)";
    return out;
  }
  diag.converged = true;

  // feasibility: per-pair conditional MPC plus the global MPC/tangency check
  for (int k = 1; k <= K; ++k) {
    const PairSegment& seg = sol.segments[k - 1];
    if (!seg.is_pair) continue;
    PairSegmentSpec spec{s[k - 1], s[k], seg.a1, seg.a2, seg.m1, seg.m2};
    const FeasibilityReport rep = check_bipooling_feasibility(spec, prior);
    if (!rep.feasible) {
      diag.note = "segment " + std::to_string(k) + ": " + rep.reason;
      return out;
    }
  }
  try {
    build_integral_distribution(sol, prior);
  } catch (const MpcError& e) {
    diag.note = e.what();
    return out;
  }
  diag.feasible = true;

  sol.payoff = payoff_direct(sol, value);
  sol.converged = true;
  out.sol = sol;
  out.ok = true;
  return out;
}

// Solves a candidate layout, relaxing the update steps if plain Gauss-Seidel
// oscillates.
CandidateSolution solve_candidate_with_retries(const FunctionModel& prior,
                                               const ValueModel& value,
                                               const SolverOptions& opts, const Layout& lay,
                                               const std::vector<BitangentPair>& pairs,
                                               CandidateDiagnostic& diag) {
  for (double damping : {1.0, 0.5, 0.2}) {
    CandidateDiagnostic attempt = diag;
    CandidateSolution cand = solve_candidate(prior, value, opts, lay, pairs, attempt, damping);
    if (cand.ok || damping == 0.2) {
      diag = attempt;
      return cand;
    }
  }
  return {};
}

}  // namespace

BiPoolingSolution solve_general(const FunctionModel& prior, const ValueModel& value,
                                const SolverOptions& opts,
                                std::vector<CandidateDiagnostic>* diagnostics) {
  if (opts.n < 1) throw ValidationError("signal budget N must be >= 1");
  const CurvatureShape shape = classify_curvature(value.curvature());

  const auto note = [&](CandidateDiagnostic d) {
    if (diagnostics) diagnostics->push_back(std::move(d));
  };

  switch (shape) {
    case CurvatureShape::Convex: {
      BiPoolingSolution sol = to_bipooling(solve_dual_expectations(prior, value, opts));
      note({"interval (convex curvature)", true, true, sol.payoff, ""});
      return sol;
    }
    case CurvatureShape::Concave: {
      IntervalSolution null;
      null.cutoffs = {0.0, 1.0};
      null.signals = {prior.mean()};
      null.masses = {1.0};
      null.signal_residuals = {0.0};
      null.payoff = payoff_direct(null, value);
      BiPoolingSolution sol = to_bipooling(null);
      note({"null information (concave curvature)", true, true, sol.payoff, ""});
      return sol;
    }
    case CurvatureShape::SShaped: {
      BiPoolingSolution sol = to_bipooling(solve_sshaped(prior, value, opts));
      note({"interval (S-shaped curvature)", true, true, sol.payoff, ""});
      return sol;
    }
    case CurvatureShape::SShapedReflected: {
      BiPoolingSolution sol = to_bipooling(solve_sshaped_reflected(prior, value, opts));
      note({"interval (reflected S-shape)", true, true, sol.payoff, ""});
      return sol;
    }
    case CurvatureShape::General:
      break;
  }

  const std::vector<BitangentPair> pairs = find_bitangents(value);
  const int N = opts.n;

  BiPoolingSolution best;
  bool have_best = false;

  const auto consider = [&](const CandidateSolution& cand) {
    if (!cand.ok) return;
    if (!have_best || cand.sol.payoff > best.payoff) {
      best = cand.sol;
      have_best = true;
    }
  };

  // The signal budget is an upper bound: candidates cover every sub-budget,
  // since with signed curvature extra signals can be worthless.

  // zero-pair candidates
  for (int m = 1; m <= N; ++m) {
    Layout lay;
    lay.pair_index.assign(m, -1);
    CandidateDiagnostic diag;
    diag.arrangement = m == 1 ? "null information" : "interval x" + std::to_string(m);
    const CandidateSolution cand =
        solve_candidate_with_retries(prior, value, opts, lay, {}, diag);
    if (cand.ok) diag.payoff = cand.sol.payoff;
    note(diag);
    consider(cand);
  }

  // subsets of bi-tangent pairs, singles distributed into the gaps
  const int P_all = static_cast<int>(pairs.size());
  for (int mask = 1; mask < (1 << P_all); ++mask) {
    std::vector<int> chosen;
    for (int j = 0; j < P_all; ++j)
      if (mask & (1 << j)) chosen.push_back(j);
    const int P = static_cast<int>(chosen.size());
    if (2 * P > N) continue;
    bool ordered = true;
    for (int j = 0; j + 1 < P; ++j)
      if (!(pairs[chosen[j]].x2 < pairs[chosen[j + 1]].x1)) ordered = false;
    if (!ordered) continue;

    std::vector<int> gaps(P + 1, 0);
    const auto run_layout = [&]() {
      Layout lay;
      for (int g = 0; g <= P; ++g) {
        for (int t = 0; t < gaps[g]; ++t) lay.pair_index.push_back(-1);
        if (g < P) lay.pair_index.push_back(chosen[g]);
      }
      CandidateDiagnostic diag;
      diag.arrangement = layout_string(lay, pairs);
      const CandidateSolution cand =
          solve_candidate_with_retries(prior, value, opts, lay, pairs, diag);
      if (cand.ok) diag.payoff = cand.sol.payoff;
      note(diag);
      consider(cand);
    };
    for (int singles = 0; singles <= N - 2 * P; ++singles) {
      // all ways to distribute the singles into the P+1 gaps
      const std::function<void(int, int)> distribute = [&](int g, int remaining) {
        if (g == P) {
          gaps[P] = remaining;
          run_layout();
          return;
        }
        for (int t = remaining; t >= 0; --t) {
          gaps[g] = t;
          distribute(g + 1, remaining - t);
        }
      };
      distribute(0, singles);
    }
  }

  if (!have_best)
    throw SolverError("no feasible candidate structure converged; see diagnostics");
  return best;
}

}  // namespace coarse
