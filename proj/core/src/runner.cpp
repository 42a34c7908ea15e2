#include "coarse/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "coarse/solver_general.hpp"

namespace coarse {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path().empty() ? fs::path(".") : file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + file.string());
  out << text;
}

const char* shape_name(CurvatureShape s) {
  switch (s) {
    case CurvatureShape::Convex: return "convex";
    case CurvatureShape::Concave: return "concave";
    case CurvatureShape::SShaped: return "sshaped";
    case CurvatureShape::SShapedReflected: return "sshaped-reflected";
    case CurvatureShape::General: return "general";
  }
  return "?";
}

json residuals_json(const std::vector<double>& sig, const std::vector<double>& cut) {
  double mx = 0.0;
  for (double r : sig) mx = std::max(mx, r);
  for (double r : cut) mx = std::max(mx, r);
  return json{{"signal", sig}, {"cutoff", cut}, {"max", mx}};
}

json interval_json(const CompiledProblem& prob, const IntervalSolution& sol) {
  json j;
  j["kind"] = "interval";
  j["n"] = sol.n();
  std::vector<double> cut, sig;
  for (double s : sol.cutoffs) cut.push_back(prob.from_unit(s));
  for (double x : sol.signals) sig.push_back(prob.from_unit(x));
  j["cutoffs"] = cut;
  j["signals"] = sig;
  j["masses"] = sol.masses;
  j["payoff"] = sol.payoff;
  j["residuals"] = residuals_json(sol.signal_residuals, sol.cutoff_residuals);
  j["iterations"] = sol.iterations;
  return j;
}

json bipooling_json(const CompiledProblem& prob, const BiPoolingSolution& sol) {
  json j;
  j["kind"] = "bipooling";
  j["n"] = sol.signal_count();
  std::vector<double> cut;
  for (double s : sol.cutoffs) cut.push_back(prob.from_unit(s));
  j["cutoffs"] = cut;
  json segs = json::array();
  for (const auto& seg : sol.segments) {
    json js;
    js["pair"] = seg.is_pair;
    if (seg.is_pair) {
      js["atoms"] = {prob.from_unit(seg.a1), prob.from_unit(seg.a2)};
      js["masses"] = {seg.m1, seg.m2};
    } else {
      js["atoms"] = {prob.from_unit(seg.a1)};
      js["masses"] = {seg.m1};
    }
    segs.push_back(js);
  }
  j["segments"] = segs;
  j["payoff"] = sol.payoff;
  j["residuals"] = residuals_json(sol.segment_residuals, sol.cutoff_residuals);
  j["iterations"] = sol.iterations;
  return j;
}

std::string interval_csv(const CompiledProblem& prob, const IntervalSolution& sol) {
  std::string out = "k,s_lo,s_hi,x,mass,width\n";
  for (int k = 0; k < sol.n(); ++k) {
    const double lo = prob.from_unit(sol.cutoffs[k]);
    const double hi = prob.from_unit(sol.cutoffs[k + 1]);
    out += std::to_string(k + 1) + "," + fmt(lo) + "," + fmt(hi) + "," +
           fmt(prob.from_unit(sol.signals[k])) + "," + fmt(sol.masses[k]) + "," +
           fmt(hi - lo) + "\n";
  }
  return out;
}

std::string bipooling_csv(const CompiledProblem& prob, const BiPoolingSolution& sol) {
  std::string out = "k,s_lo,s_hi,x,mass,width\n";
  for (int k = 0; k < sol.segment_count(); ++k) {
    const double lo = prob.from_unit(sol.cutoffs[k]);
    const double hi = prob.from_unit(sol.cutoffs[k + 1]);
    const auto& seg = sol.segments[k];
    const auto row = [&](double atom, double mass) {
      out += std::to_string(k + 1) + "," + fmt(lo) + "," + fmt(hi) + "," +
             fmt(prob.from_unit(atom)) + "," + fmt(mass) + "," + fmt(hi - lo) + "\n";
    };
    row(seg.a1, seg.m1);
    if (seg.is_pair) row(seg.a2, seg.m2);
  }
  return out;
}

// cutoff-ladder plot data: interior cutoffs and induced signals by position
std::string ladder_csv(const CompiledProblem& prob, const std::vector<double>& cutoffs,
                       const std::vector<double>& atoms) {
  struct Row {
    double pos;
    const char* type;
  };
  std::vector<Row> rows;
  for (std::size_t k = 1; k + 1 < cutoffs.size(); ++k)
    rows.push_back({prob.from_unit(cutoffs[k]), "cutoff"});
  for (double a : atoms) rows.push_back({prob.from_unit(a), "signal"});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.pos < b.pos; });
  std::string out = "position,type\n";
  for (const Row& r : rows) out += fmt(r.pos) + "," + std::string(r.type) + "\n";
  return out;
}

void apply_overrides(CompiledProblem& prob, const RunnerOverrides& ov) {
  if (ov.tolerance) prob.solver.tolerance = *ov.tolerance;
  if (ov.max_iterations) prob.solver.max_iterations = *ov.max_iterations;
  if (ov.seed_choice) prob.seed_choice = *ov.seed_choice;
}

json solve_outcome_json(const CompiledProblem& prob, const SolveOutcome& out) {
  json j = out.interval ? interval_json(prob, *out.interval)
                        : bipooling_json(prob, out.solution);
  j["version"] = 1;
  j["mode"] = to_string(out.mode);
  j["shape"] = shape_name(out.shape);
  j["domain"] = {prob.lo, prob.hi};
  j["density"] = prob.density_label;
  j["curvature"] = prob.curvature_label;
  j["uniqueness"] = {{"checked", out.uniqueness_checked},
                     {"unique", out.unique},
                     {"gap", out.uniqueness_gap}};
  if (out.censorship)
    j["censorship"] = {{"s-star", prob.from_unit(out.censorship->s_star)},
                       {"payoff", out.censorship->payoff}};
  return j;
}

}  // namespace

CompiledProblem load_problem_with_overrides(const fs::path& spec, const RunnerOverrides& ov) {
  CompiledProblem prob = load_problem(spec);
  apply_overrides(prob, ov);
  return prob;
}

SolveRun run_solve(const fs::path& spec, const fs::path& out_dir, const RunnerOverrides& ov) {
  SolveRun run;
  run.problem = load_problem_with_overrides(spec, ov);
  if (run.problem.mode == SolveMode::Pricing) {
    // pricing specs flow through the same entry point for convenience
    PricingRun pr = run_pricing(spec, out_dir, ov);
    run.files = pr.files;
    return run;
  }

  run.outcome = solve_problem(run.problem);
  fs::create_directories(out_dir);

  const json j = solve_outcome_json(run.problem, run.outcome);
  write_text(out_dir / "solution.json", j.dump(2) + "\n");
  run.files.push_back(out_dir / "solution.json");

  const std::string csv = run.outcome.interval
                              ? interval_csv(run.problem, *run.outcome.interval)
                              : bipooling_csv(run.problem, run.outcome.solution);
  write_text(out_dir / "solution.csv", csv);
  run.files.push_back(out_dir / "solution.csv");

  write_text(out_dir / "ladder.csv",
             ladder_csv(run.problem, run.outcome.solution.cutoffs,
                        run.outcome.solution.atoms()));
  run.files.push_back(out_dir / "ladder.csv");

  if (run.problem.companion_value) {
    CompiledProblem companion = run.problem;
    companion.value = run.problem.companion_value;
    companion.curvature_label = run.problem.companion_label;
    companion.companion_value.reset();
    SolveOutcome hh = solve_problem(companion);
    write_text(out_dir / "household_solution.json",
               solve_outcome_json(companion, hh).dump(2) + "\n");
    write_text(out_dir / "household_solution.csv",
               interval_csv(companion, *hh.interval));
    write_text(out_dir / "household_ladder.csv",
               ladder_csv(companion, hh.solution.cutoffs, hh.solution.atoms()));
    run.files.push_back(out_dir / "household_solution.json");
    run.files.push_back(out_dir / "household_solution.csv");
    run.files.push_back(out_dir / "household_ladder.csv");
  }

  if (run.outcome.uniqueness_checked && !run.outcome.unique)
    throw CertificationError(
        "largest and smallest fixed points disagree (gap " +
        std::to_string(run.outcome.uniqueness_gap) +
        "); solution flagged non-certified, confirm with the oracle command");
  return run;
}

SweepRun run_sweep(const fs::path& spec, int n_from, int n_to, const fs::path& out_dir,
                   const RunnerOverrides& ov) {
  if (n_from < 1 || n_to < n_from) throw ValidationError("sweep needs 1 <= n-from <= n-to");
  CompiledProblem prob = load_problem_with_overrides(spec, ov);
  if (prob.mode == SolveMode::Pricing)
    throw ValidationError("sweep does not support pricing specs");

  SweepRun run;
  std::string csv = "n,payoff,s_last,max_residual\n";
  std::optional<double> s_star;
  for (int n = n_from; n <= n_to; ++n) {
    CompiledProblem p = prob;
    p.n = n;
    p.solver.n = n;
    const SolveOutcome out = solve_problem(p);
    if (n == n_from) run.mode = out.mode;
    if (out.censorship) s_star = out.censorship->s_star;
    SweepRow row;
    row.n = n;
    row.payoff = out.solution.payoff;
    row.last_cutoff = prob.from_unit(out.solution.cutoffs[out.solution.cutoffs.size() - 2]);
    for (double r : out.solution.segment_residuals)
      row.max_residual = std::max(row.max_residual, r);
    for (double r : out.solution.cutoff_residuals)
      row.max_residual = std::max(row.max_residual, r);
    run.rows.push_back(row);
    csv += std::to_string(row.n) + "," + fmt(row.payoff) + "," + fmt(row.last_cutoff) + "," +
           fmt(row.max_residual) + "\n";
  }

  // convex payoffs are monotone in the signal budget; S-shaped top cutoffs
  // rise toward the censorship cutoff
  for (std::size_t i = 1; i < run.rows.size(); ++i) {
    if (run.mode == SolveMode::Convex &&
        run.rows[i].payoff < run.rows[i - 1].payoff - prob.solver.tolerance)
      throw SolverError("sweep payoff decreased between N = " +
                        std::to_string(run.rows[i - 1].n) + " and N = " +
                        std::to_string(run.rows[i].n));
    if (run.mode == SolveMode::SShaped &&
        run.rows[i].last_cutoff < run.rows[i - 1].last_cutoff - 1e-6)
      throw SolverError("sweep top cutoff decreased between budgets");
  }
  if (run.mode == SolveMode::SShaped && s_star)
    for (const SweepRow& row : run.rows)
      if (row.last_cutoff > prob.from_unit(*s_star) + 1e-6)
        throw SolverError("sweep top cutoff exceeds the censorship cutoff");

  fs::create_directories(out_dir);
  write_text(out_dir / "sweep.csv", csv);
  run.files.push_back(out_dir / "sweep.csv");
  return run;
}

CompareRun run_compare(const fs::path& base_spec, const fs::path& shifted_spec,
                       CompareKind kind, const fs::path& out_dir, const RunnerOverrides& ov) {
  CompiledProblem base = load_problem_with_overrides(base_spec, ov);
  CompiledProblem shifted = load_problem_with_overrides(shifted_spec, ov);
  if (!base.value || !shifted.value)
    throw ValidationError("compare needs value-based specs on both sides");
  if (std::abs(base.lo - shifted.lo) > 1e-12 || std::abs(base.hi - shifted.hi) > 1e-12)
    throw ValidationError("compare requires identical domains");
  if (base.n != shifted.n) throw ValidationError("compare requires identical N");

  CompareRun run;
  run.kind = kind;
  json j;
  std::string csv = "index,kind,base,shifted,diff\n";

  const auto emit_pair = [&](const IntervalSolution& b, const IntervalSolution& s) {
    const int n = b.n();
    int index = 0;
    for (int k = 1; k <= n; ++k) {
      csv += std::to_string(++index) + ",signal," + fmt(base.from_unit(b.signals[k - 1])) +
             "," + fmt(base.from_unit(s.signals[k - 1])) + "," +
             fmt(base.from_unit(s.signals[k - 1]) - base.from_unit(b.signals[k - 1])) + "\n";
      if (k < n)
        csv += std::to_string(++index) + ",cutoff," + fmt(base.from_unit(b.cutoffs[k])) + "," +
               fmt(base.from_unit(s.cutoffs[k])) + "," +
               fmt(base.from_unit(s.cutoffs[k]) - base.from_unit(b.cutoffs[k])) + "\n";
    }
  };

  if (kind == CompareKind::LikelihoodRatio) {
    ShiftReport rep = compare_likelihood_ratio(base.density, *base.value, shifted.density,
                                               *shifted.value, base.solver);
    j["kind"] = "likelihood-ratio";
    j["ratio-monotone"] = rep.ratio_monotone;
    j["base-unique"] = rep.base_unique;
    j["shifted-unique"] = rep.shifted_unique;
    j["all-weakly-increasing"] = rep.all_weakly_increasing;
    j["min-shift"] = rep.min_shift;
    j["cutoff-shifts"] = rep.cutoff_shifts;
    j["signal-shifts"] = rep.signal_shifts;
    j["base"] = interval_json(base, rep.base);
    j["shifted"] = interval_json(shifted, rep.shifted);
    emit_pair(rep.base, rep.shifted);
    run.shift = std::move(rep);
  } else {
    VariabilityReport rep = compare_uniform_variability(base.density, *base.value,
                                                        shifted.density, *shifted.value,
                                                        base.solver);
    j["kind"] = "uniform-variability";
    j["ratio-unimodal"] = rep.ratio_unimodal;
    j["base-unique"] = rep.base_unique;
    j["shifted-unique"] = rep.shifted_unique;
    j["sign-changes"] = rep.sign_changes;
    j["first-sign-positive"] = rep.first_sign_positive;
    j["at-most-one-crossing"] = rep.at_most_one_crossing;
    j["diffs"] = rep.diffs;
    j["base"] = interval_json(base, rep.base);
    j["shifted"] = interval_json(shifted, rep.shifted);
    emit_pair(rep.base, rep.shifted);
    run.variability = std::move(rep);
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "compare.json", j.dump(2) + "\n");
  write_text(out_dir / "compare.csv", csv);
  run.files.push_back(out_dir / "compare.json");
  run.files.push_back(out_dir / "compare.csv");
  return run;
}

OracleRun run_oracle(const fs::path& spec, int grid, const fs::path& out_dir,
                     const RunnerOverrides& ov) {
  CompiledProblem prob = load_problem_with_overrides(spec, ov);
  if (prob.mode == SolveMode::CheapTalk || prob.mode == SolveMode::Pricing)
    throw ValidationError("the oracle command applies to value-based specs only");

  OracleRun run;
  const CurvatureShape shape = classify_curvature(prob.value->curvature());
  if (shape == CurvatureShape::General)
    run.solution = oracle_bipooling(prob.density, *prob.value, prob.n, grid);
  else
    run.solution = to_bipooling(oracle_interval(prob.density, *prob.value, prob.n, grid));

  fs::create_directories(out_dir);
  json j = bipooling_json(prob, run.solution);
  j["version"] = 1;
  j["mode"] = "oracle";
  j["shape"] = shape_name(shape);
  j["domain"] = {prob.lo, prob.hi};
  j["grid"] = grid;
  write_text(out_dir / "oracle_solution.json", j.dump(2) + "\n");
  write_text(out_dir / "oracle_solution.csv", bipooling_csv(prob, run.solution));
  run.files.push_back(out_dir / "oracle_solution.json");
  run.files.push_back(out_dir / "oracle_solution.csv");
  return run;
}

PricingRun run_pricing(const fs::path& spec, const fs::path& out_dir,
                       const RunnerOverrides& ov) {
  CompiledProblem prob = load_problem_with_overrides(spec, ov);
  if (prob.mode != SolveMode::Pricing)
    throw ValidationError("pricing command needs a spec with mode 'pricing'");

  PricingRun run;
  run.menu = solve_menu(*prob.pricing, prob.solver);
  const Virtualization virt = virtualize(*prob.pricing);

  json j;
  j["version"] = 1;
  j["kind"] = "menu";
  j["mode"] = "pricing";
  j["options"] = run.menu.options();
  j["cutoffs"] = run.menu.cutoffs;
  j["signals"] = run.menu.signals;
  j["qualities"] = run.menu.qualities;
  j["prices"] = run.menu.prices;
  j["masses"] = run.menu.masses;
  j["profit"] = run.menu.profit;
  j["residuals"] = residuals_json(run.menu.signal_residuals, run.menu.cutoff_residuals);
  std::vector<double> type_cutoffs;
  for (double s : run.menu.cutoffs) type_cutoffs.push_back(virt.theta_of_phi(s));
  j["type-cutoffs"] = type_cutoffs;
  j["excluded-type-mass"] = virt.excluded_type_mass;

  std::string csv = "k,s_lo,s_hi,x,q,p,mass\n";
  for (int k = 0; k <= run.menu.options(); ++k) {
    csv += std::to_string(k + 1) + "," + fmt(run.menu.cutoffs[k]) + "," +
           fmt(run.menu.cutoffs[k + 1]) + "," + fmt(run.menu.signals[k]) + "," +
           fmt(run.menu.qualities[k]) + "," + fmt(run.menu.prices[k]) + "," +
           fmt(run.menu.masses[k]) + "\n";
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "menu.json", j.dump(2) + "\n");
  write_text(out_dir / "menu.csv", csv);
  run.files.push_back(out_dir / "menu.json");
  run.files.push_back(out_dir / "menu.csv");
  return run;
}

LoadedSolution load_solution_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("solution file is not valid JSON: ") + e.what());
  }

  LoadedSolution out;
  out.kind = j.at("kind").get<std::string>();
  out.lo = j.at("domain")[0].get<double>();
  out.hi = j.at("domain")[1].get<double>();
  out.payoff = j.at("payoff").get<double>();
  out.max_residual = j.at("residuals").at("max").get<double>();
  const double w = out.hi - out.lo;
  const auto to_unit = [&](double v) { return (v - out.lo) / w; };

  if (out.kind == "interval") {
    IntervalSolution& sol = out.interval;
    for (const auto& v : j.at("cutoffs")) sol.cutoffs.push_back(to_unit(v.get<double>()));
    sol.cutoffs.front() = 0.0;
    sol.cutoffs.back() = 1.0;
    for (const auto& v : j.at("signals")) sol.signals.push_back(to_unit(v.get<double>()));
    for (const auto& v : j.at("masses")) sol.masses.push_back(v.get<double>());
    sol.payoff = j.at("payoff").get<double>();
    for (const auto& v : j.at("residuals").at("signal"))
      sol.signal_residuals.push_back(v.get<double>());
    for (const auto& v : j.at("residuals").at("cutoff"))
      sol.cutoff_residuals.push_back(v.get<double>());
    sol.iterations = j.value("iterations", 0);
  } else if (out.kind == "bipooling") {
    BiPoolingSolution& sol = out.bipooling;
    for (const auto& v : j.at("cutoffs")) sol.cutoffs.push_back(to_unit(v.get<double>()));
    sol.cutoffs.front() = 0.0;
    sol.cutoffs.back() = 1.0;
    for (const auto& js : j.at("segments")) {
      PairSegment seg;
      seg.is_pair = js.at("pair").get<bool>();
      seg.a1 = to_unit(js.at("atoms")[0].get<double>());
      seg.m1 = js.at("masses")[0].get<double>();
      if (seg.is_pair) {
        seg.a2 = to_unit(js.at("atoms")[1].get<double>());
        seg.m2 = js.at("masses")[1].get<double>();
      }
      sol.segments.push_back(seg);
    }
    sol.payoff = j.at("payoff").get<double>();
  } else {
    throw ValidationError("unknown solution kind '" + out.kind + "'");
  }
  return out;
}

}  // namespace coarse
