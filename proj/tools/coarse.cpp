// coarse - optimal finite-signal information structures and finite menus.
//
// Subcommands:
//   solve <spec>                 solve a problem spec, write solution files
//   sweep <spec> --n-from --n-to solve across signal budgets
//   compare <a> <b> --kind ...   comparative statics between two specs
//   oracle <spec> [--grid]       brute-force verification search
//   pricing <spec>               optimal finite menu for a pricing spec
//
// Exit codes: 0 ok, 2 validation error, 3 solver failure, 4 certification
// failure (extreme fixed points disagree; outputs still written).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coarse/runner.hpp"

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("COARSE_OUT_DIR")) return env;
  return ".";
}

coarse::RunnerOverrides make_overrides(const double* tol, const int* max_iter,
                                       const std::string& seed_from) {
  coarse::RunnerOverrides ov;
  if (tol) ov.tolerance = *tol;
  if (max_iter) ov.max_iterations = *max_iter;
  if (seed_from == "zero")
    ov.seed_choice = coarse::SeedChoice::NearZero;
  else if (seed_from == "one")
    ov.seed_choice = coarse::SeedChoice::NearOne;
  else if (seed_from == "both")
    ov.seed_choice = coarse::SeedChoice::Both;
  return ov;
}

void print_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse information design solver"};
  app.require_subcommand(1);

  std::string out_dir = default_out_dir();
  double tol = 0.0;
  int max_iter = 0;
  std::string seed_from;
  bool tol_set = false, max_iter_set = false;
  app.add_option("--out-dir", out_dir, "output directory (env COARSE_OUT_DIR)");
  app.add_option("--tol", tol, "residual tolerance override")->each([&](const std::string&) {
    tol_set = true;
  });
  app.add_option("--max-iter", max_iter, "iteration cap override")
      ->each([&](const std::string&) { max_iter_set = true; });
  app.add_option("--seed-from", seed_from, "fixed-point seeding: zero|one|both")
      ->check(CLI::IsMember({"zero", "one", "both"}));

  std::string spec_a, spec_b, compare_kind = "likelihood-ratio";
  int n_from = 1, n_to = 1, grid = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve a problem spec");
  solve->add_option("spec", spec_a, "problem spec (JSON)")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "solve across signal budgets");
  sweep->add_option("spec", spec_a)->required();
  sweep->add_option("--n-from", n_from, "first budget")->required();
  sweep->add_option("--n-to", n_to, "last budget")->required();

  CLI::App* compare = app.add_subcommand("compare", "comparative statics");
  compare->add_option("base", spec_a)->required();
  compare->add_option("shifted", spec_b)->required();
  compare->add_option("--kind", compare_kind, "likelihood-ratio|uniform-variability")
      ->check(CLI::IsMember({"likelihood-ratio", "uniform-variability"}));

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force verification");
  oracle->add_option("spec", spec_a)->required();
  oracle->add_option("--grid", grid, "cutoff grid resolution (0 = default by N)");

  CLI::App* pricing = app.add_subcommand("pricing", "optimal finite menu");
  pricing->add_option("spec", spec_a)->required();

  CLI11_PARSE(app, argc, argv);

  const coarse::RunnerOverrides ov =
      make_overrides(tol_set ? &tol : nullptr, max_iter_set ? &max_iter : nullptr, seed_from);

  try {
    if (solve->parsed()) {
      const auto run = coarse::run_solve(spec_a, out_dir, ov);
      print_files(run.files);
      if (run.outcome.interval || run.outcome.solution.segment_count() > 0)
        std::cout << "payoff " << run.outcome.solution.payoff << "\n";
    } else if (sweep->parsed()) {
      const auto run = coarse::run_sweep(spec_a, n_from, n_to, out_dir, ov);
      print_files(run.files);
    } else if (compare->parsed()) {
      const auto kind = compare_kind == "likelihood-ratio"
                            ? coarse::CompareKind::LikelihoodRatio
                            : coarse::CompareKind::UniformVariability;
      const auto run = coarse::run_compare(spec_a, spec_b, kind, out_dir, ov);
      print_files(run.files);
    } else if (oracle->parsed()) {
      const auto run = coarse::run_oracle(spec_a, grid, out_dir, ov);
      print_files(run.files);
      std::cout << "oracle payoff " << run.solution.payoff << "\n";
    } else if (pricing->parsed()) {
      const auto run = coarse::run_pricing(spec_a, out_dir, ov);
      print_files(run.files);
      std::cout << "profit " << run.menu.profit << "\n";
    }
  } catch (const coarse::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const coarse::CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 4;
  } catch (const coarse::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
